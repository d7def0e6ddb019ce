#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>

#include "doctest.h"
#include "oracles.hpp"
#include "qtbasis/taylor_table.hpp"

using namespace qtb;
using oracle::Poly3;
using oracle::Rng;

namespace {

TaylorTable random_table(Rng& rng, Point center, int order) {
  TaylorTable t(center, order);
  for (const MultiIndex& i : indices_up_to(order)) t[i] = rng.cplx(-1.0, 1.0);
  return t;
}

double table_diff(const TaylorTable& a, const TaylorTable& b) {
  REQUIRE(a.order() == b.order());
  double worst = 0.0;
  for (const MultiIndex& i : indices_up_to(a.order()))
    worst = std::max(worst, std::abs(a[i] - b[i]));
  return worst;
}

}  // namespace

TEST_CASE("product with the constant-1 table is truncation") {
  Rng rng(11);
  const TaylorTable b = random_table(rng, {0.5, 0, 0}, 4);
  const TaylorTable one = constant_table({0.5, 0, 0}, 2, Complex{1.0, 0.0});
  const TaylorTable p = taylor_product(one, b);
  CHECK(p.order() == 2);
  CHECK(table_diff(p, b.truncated(2)) == 0.0);
}

TEST_CASE("monomial times monomial") {
  const Point c{0, 0, 0};
  const TaylorTable x1 = monomial_table(c, 3, {1, 0, 0});
  const TaylorTable p = taylor_product(x1, x1);
  for (const MultiIndex& i : indices_up_to(3)) {
    if (i == MultiIndex{2, 0, 0})
      CHECK(p[i] == Complex{1.0, 0.0});
    else
      CHECK(p[i] == Complex{0.0, 0.0});
  }
}

TEST_CASE("exp(x1) squared gives the series of exp(2 x1)") {
  TaylorTable e(Point{0, 0, 0}, 3);
  for (int k = 0; k <= 3; ++k) e[MultiIndex{k, 0, 0}] = 1.0 / oracle::fact(k);
  const TaylorTable p = taylor_product(e, e);
  for (int k = 0; k <= 3; ++k)
    CHECK(std::abs(p[MultiIndex{k, 0, 0}] - std::pow(2.0, k) / oracle::fact(k)) < 1e-15);
}

TEST_CASE("taylor_product agrees with symbolic polynomial multiplication") {
  Rng rng(42);
  for (int rep = 0; rep < 10; ++rep) {
    const Point c{rng.range(-1, 1), rng.range(-1, 1), rng.range(-1, 1)};
    const int oa = 2 + rep % 3, ob = 2 + (rep / 3) % 3;
    const TaylorTable a = random_table(rng, c, oa);
    const TaylorTable b = random_table(rng, c, ob);
    const TaylorTable p = taylor_product(a, b);
    CHECK(p.order() == std::min(oa, ob));

    const Poly3 ref =
        (oracle::poly_from_table(a) * oracle::poly_from_table(b)).truncate(p.order());
    for (const MultiIndex& i : indices_up_to(p.order()))
      CHECK(std::abs(p[i] - ref.coeff(i[0], i[1], i[2])) < 1e-13);
  }
}

TEST_CASE("taylor_product is commutative and center-checked") {
  Rng rng(7);
  const TaylorTable a = random_table(rng, {1, 2, 3}, 3);
  const TaylorTable b = random_table(rng, {1, 2, 3}, 4);
  // The two orderings sum the same terms in reverse, so only rounding differs.
  CHECK(table_diff(taylor_product(a, b), taylor_product(b, a)) <= 1e-14);
  const TaylorTable wrong = random_table(rng, {1, 2, 3.5}, 4);
  CHECK_THROWS(taylor_product(a, wrong));
}

TEST_CASE("derivative_table implements the shift rule") {
  Rng rng(3);
  const TaylorTable f = random_table(rng, {0, 0, 0}, 5);
  const Poly3 pf = oracle::poly_from_table(f);

  for (const MultiIndex alpha : {MultiIndex{1, 0, 0}, MultiIndex{0, 1, 0},
                                 MultiIndex{0, 0, 2}, MultiIndex{1, 1, 1}}) {
    const TaylorTable d = derivative_table(f, alpha);
    CHECK(d.order() == 5 - alpha.order());
    Poly3 ref = pf;
    for (int k = 0; k < 3; ++k)
      for (int r = 0; r < alpha[k]; ++r) ref = ref.diff(k);
    for (const MultiIndex& i : indices_up_to(d.order()))
      CHECK(std::abs(d[i] - ref.coeff(i[0], i[1], i[2])) < 1e-12);
    // same check stated directly against the rule
    for (const MultiIndex& i : indices_up_to(d.order())) {
      double w = 1.0;
      for (int k = 0; k < 3; ++k)
        for (int r = 1; r <= alpha[k]; ++r) w *= i[k] + r;
      CHECK(std::abs(d[i] - w * f[alpha + i]) == 0.0);
    }
  }
}

TEST_CASE("derivative of a polynomial's table matches calculus on monomials") {
  // f = (x-c)^(2,1,0): d/dx1 gives 2 (x-c)^(1,1,0)
  const TaylorTable f = monomial_table({0, 0, 0}, 4, {2, 1, 0});
  const TaylorTable d = derivative_table(f, {1, 0, 0});
  for (const MultiIndex& i : indices_up_to(d.order())) {
    if (i == MultiIndex{1, 1, 0})
      CHECK(d[i] == Complex{2.0, 0.0});
    else
      CHECK(d[i] == Complex{0.0, 0.0});
  }
}

TEST_CASE("axpy, scale, truncated") {
  Rng rng(5);
  const TaylorTable a = random_table(rng, {0, 0, 0}, 3);
  const TaylorTable b = random_table(rng, {0, 0, 0}, 5);
  const TaylorTable s = taylor_axpy(a, Complex{2.0, -1.0}, b);
  CHECK(s.order() == 3);
  for (const MultiIndex& i : indices_up_to(3))
    CHECK(std::abs(s[i] - (a[i] + Complex{2.0, -1.0} * b[i])) < 1e-15);

  const TaylorTable sc = taylor_scale(a, Complex{0.0, 2.0});
  for (const MultiIndex& i : indices_up_to(3))
    CHECK(sc[i] == Complex{0.0, 2.0} * a[i]);

  const TaylorTable ext = a.truncated(5);
  CHECK(ext.order() == 5);
  for (const MultiIndex& i : indices_up_to(5)) {
    if (i.order() <= 3)
      CHECK(ext[i] == a[i]);
    else
      CHECK(ext[i] == Complex{0.0, 0.0});
  }
}

TEST_CASE("max_abs") {
  TaylorTable t(Point{0, 0, 0}, 2);
  t[MultiIndex{1, 0, 1}] = Complex{3.0, 4.0};
  t[MultiIndex{0, 0, 0}] = Complex{1.0, 0.0};
  CHECK(t.max_abs() == doctest::Approx(5.0));
}
