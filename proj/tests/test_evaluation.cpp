#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <complex>
#include <stdexcept>
#include <vector>

#include "doctest.h"
#include "oracles.hpp"
#include "qtbasis/evaluation.hpp"

using namespace qtb;
using oracle::Poly3;
using oracle::Rng;

namespace {

constexpr MultiIndex kZero{0, 0, 0};

BasisFunction manual_function(Family fam, Point center, int q, Rng& rng) {
  BasisFunction b;
  b.family = fam;
  b.center = center;
  b.q = q;
  b.poly.assign(index_count(q + 1), Complex{0.0, 0.0});
  for (Complex& z : b.poly) z = rng.cplx(-0.5, 0.5);
  if (fam == Family::PHASE) b.poly[0] = Complex{0.0, 0.0};
  if (fam == Family::AMPLITUDE)
    for (int k = 0; k < 3; ++k) b.Lambda[k] = rng.cplx(-0.8, 0.8);
  return b;
}

Poly3 poly_part(const BasisFunction& b) {
  Poly3 p;
  for (const MultiIndex& i : indices_up_to(b.q + 1))
    p.add(i[0], i[1], i[2], b.poly[numbering(i)]);
  return p;
}

Complex oracle_value(const BasisFunction& b, const Point& x) {
  const double t1 = x[0] - b.center[0], t2 = x[1] - b.center[1], t3 = x[2] - b.center[2];
  const Complex core = poly_part(b).eval(t1, t2, t3);
  switch (b.family) {
    case Family::AMPLITUDE:
      return core * std::exp(b.Lambda[0] * t1 + b.Lambda[1] * t2 + b.Lambda[2] * t3);
    case Family::PHASE:
      return std::exp(core);
    default:
      return core;
  }
}

TaylorTable linear_table(Point center, const CVec3& La, int order) {
  TaylorTable t(center, order);
  t[e1] = La[0];
  t[e2] = La[1];
  t[e3] = La[2];
  return t;
}

Complex pow_over_factorial(const CVec3& La, MultiIndex i) {
  Complex pw{1.0, 0.0};
  for (int k = 0; k < 3; ++k)
    for (int r = 0; r < i[k]; ++r) pw *= La[k];
  return pw / factorial(i);
}

DirectionSet random_directions(int n, Rng& rng) {
  DirectionSet dirs;
  dirs.n = n;
  for (int a = 0; a < (n + 1) * (n + 2); ++a) {
    if (dirs.entries.size() == static_cast<std::size_t>((n + 1) * (n + 1))) break;
    DirectionSet::Entry en;
    en.l = a;
    en.m = 0;
    en.theta = rng.range(0.15, M_PI - 0.15);
    en.phi = rng.range(0.0, 2 * M_PI);
    en.d = {std::sin(en.theta) * std::cos(en.phi), std::sin(en.theta) * std::sin(en.phi),
            std::cos(en.theta)};
    dirs.entries.push_back(en);
  }
  return dirs;
}

bool is_permutation_matrix(const Eigen::MatrixXcd& M) {
  if (M.rows() != M.cols()) return false;
  for (Eigen::Index r = 0; r < M.rows(); ++r) {
    int ones = 0;
    for (Eigen::Index c = 0; c < M.cols(); ++c) {
      if (M(r, c) == Complex{1.0, 0.0})
        ++ones;
      else if (M(r, c) != Complex{0.0, 0.0})
        return false;
    }
    if (ones != 1) return false;
  }
  for (Eigen::Index c = 0; c < M.cols(); ++c) {
    int ones = 0;
    for (Eigen::Index r = 0; r < M.rows(); ++r)
      if (M(r, c) == Complex{1.0, 0.0}) ++ones;
    if (ones != 1) return false;
  }
  return true;
}

}  // namespace

TEST_CASE("pointwise values match a brute-force oracle for every family") {
  Rng rng(0xE7A1ULL);
  const Point center{0.3, -0.6, 0.45};
  for (Family fam : {Family::AMPLITUDE, Family::PHASE, Family::POLYNOMIAL}) {
    const BasisFunction b = manual_function(fam, center, 2, rng);
    for (int rep = 0; rep < 10; ++rep) {
      const Point x{center[0] + rng.range(-0.7, 0.7), center[1] + rng.range(-0.7, 0.7),
                    center[2] + rng.range(-0.7, 0.7)};
      const Complex ref = oracle_value(b, x);
      CHECK(std::abs(evaluate(b, x) - ref) <= 1e-13 * std::max(1.0, std::abs(ref)));
    }
  }
}

TEST_CASE("constructed plane waves evaluate to exp(i kappa d.(x-x_C))") {
  const double kappa = 3.0;
  const Point center{0.1, 1.2, -0.4};
  const PdeCoefficients c =
      builtin_operator(BuiltinCase::HELMHOLTZ_CONST, kappa, 0.0, center, 4);
  Rng rng(0xBEEFULL);
  for (const auto& en : generate_directions(1).entries) {
    const BasisFunction amp = construct_amplitude_gpw(c, 3, Complex{0.0, kappa}, en.d);
    const BasisFunction ph = construct_phase_gpw(c, 3, Complex{0.0, kappa}, en.d);
    for (int rep = 0; rep < 10; ++rep) {
      const Point x{center[0] + rng.range(-1, 1), center[1] + rng.range(-1, 1),
                    center[2] + rng.range(-1, 1)};
      const Complex arg{0.0, kappa * (en.d[0] * (x[0] - center[0]) +
                                      en.d[1] * (x[1] - center[1]) +
                                      en.d[2] * (x[2] - center[2]))};
      const Complex ref = std::exp(arg);
      CHECK(std::abs(evaluate(amp, x) - ref) <= 1e-12);
      CHECK(std::abs(evaluate(ph, x) - ref) <= 1e-12);
    }
  }
}

TEST_CASE("analytic gradients agree with finite differences") {
  Rng rng(0x6AD5ULL);
  const Point center{-0.2, 0.5, 0.1};
  for (Family fam : {Family::AMPLITUDE, Family::PHASE, Family::POLYNOMIAL}) {
    const BasisFunction b = manual_function(fam, center, 2, rng);
    for (int rep = 0; rep < 5; ++rep) {
      const Point x{center[0] + rng.range(-0.5, 0.5), center[1] + rng.range(-0.5, 0.5),
                    center[2] + rng.range(-0.5, 0.5)};
      const CVec3 g = evaluate_gradient(b, x);
      auto f = [&](const Point& p) { return evaluate(b, p); };
      for (int k = 0; k < 3; ++k) {
        const Complex ref = oracle::fd_partial(f, x, k, 1e-5);
        CHECK(std::abs(g[k] - ref) <= 1e-7 * std::max(1.0, std::abs(ref)));
      }
    }
  }
}

TEST_CASE("exponential series: one-variable pinned values") {
  // exp(t1 + t1^2): coefficients of t1^m are sum_{a+2b=m} 1/(a! b!).
  TaylorTable f({0, 0, 0}, 2);
  f[e1] = Complex{1.0, 0.0};
  f[MultiIndex{2, 0, 0}] = Complex{1.0, 0.0};
  const TaylorTable S = exp_series(f, 4);
  CHECK(S[kZero] == Complex{1.0, 0.0});
  CHECK(std::abs(S[e1] - 1.0) <= 1e-15);
  CHECK(std::abs(S[MultiIndex{2, 0, 0}] - 1.5) <= 1e-15);
  CHECK(std::abs(S[MultiIndex{3, 0, 0}] - 7.0 / 6.0) <= 1e-15);
  CHECK(std::abs(S[MultiIndex{4, 0, 0}] - 25.0 / 24.0) <= 1e-15);
  CHECK(S[MultiIndex{0, 1, 0}] == Complex{0.0, 0.0});
}

TEST_CASE("exponential series of a linear phase gives plane-wave coefficients at any order") {
  const CVec3 La{Complex{0.2, 1.1}, Complex{-0.7, 0.3}, Complex{0.4, -0.9}};
  // The input table only carries degree 1; the series is still exact far
  // beyond it (no truncation tied to the input order).
  const TaylorTable S = exp_series(linear_table({0, 0, 0}, La, 1), 6);
  for (const MultiIndex& i : indices_up_to(6)) {
    const Complex ref = pow_over_factorial(La, i);
    CHECK(std::abs(S[i] - ref) <= 1e-13 * std::max(1.0, std::abs(ref)));
  }
}

TEST_CASE("exponential series agrees with the combinatorial expansion") {
  Rng rng(0xFAB5ULL);
  for (int rep = 0; rep < 5; ++rep) {
    TaylorTable f({0, 0, 0}, 3);
    for (const MultiIndex& i : indices_up_to(3)) f[i] = rng.cplx(-0.4, 0.4);
    const TaylorTable S = exp_series(f, 4);
    for (const MultiIndex& i : indices_up_to(4)) {
      const Complex ref = oracle::exp_taylor_faa_di_bruno(f, i);
      CHECK(std::abs(S[i] - ref) <= 1e-11 * std::max(1.0, std::abs(ref)));
    }
  }
}

TEST_CASE("taylor tables: polynomial family reads off its own coefficients") {
  Rng rng(0x901DULL);
  const BasisFunction b = manual_function(Family::POLYNOMIAL, {0.2, 0.1, -0.7}, 2, rng);
  const TaylorTable t = taylor_table(b, 5);
  CHECK(t.order() == 5);
  for (const MultiIndex& i : indices_up_to(5)) {
    if (i.order() <= b.q + 1)
      CHECK(t[i] == b.poly[numbering(i)]);
    else
      CHECK(t[i] == Complex{0.0, 0.0});
  }
}

TEST_CASE("taylor tables: amplitude plane wave gives Lambda^i / i!") {
  BasisFunction b;
  b.family = Family::AMPLITUDE;
  b.center = {0.4, -0.3, 0.9};
  b.q = 2;
  b.poly.assign(index_count(3), Complex{0.0, 0.0});
  b.poly[0] = Complex{1.0, 0.0};
  b.Lambda = {Complex{0.3, 1.2}, Complex{-0.5, 0.7}, Complex{0.0, -1.4}};
  const TaylorTable t = taylor_table(b, 5);
  for (const MultiIndex& i : indices_up_to(5)) {
    const Complex ref = pow_over_factorial(b.Lambda, i);
    CHECK(std::abs(t[i] - ref) <= 1e-14 * std::max(1.0, std::abs(ref)));
  }
}

TEST_CASE("taylor tables: phase family reproduces the pinned quadratic example") {
  BasisFunction b;
  b.family = Family::PHASE;
  b.center = {0, 0, 0};
  b.q = 1;
  b.poly.assign(index_count(2), Complex{0.0, 0.0});
  b.poly[numbering(e1)] = Complex{1.0, 0.0};
  b.poly[numbering(MultiIndex{2, 0, 0})] = Complex{1.0, 0.0};
  const TaylorTable t = taylor_table(b, 2);
  CHECK(std::abs(t[MultiIndex{2, 0, 0}] - 1.5) <= 1e-15);
  CHECK(std::abs(t[e1] - 1.0) <= 1e-15);
  CHECK(t[kZero] == Complex{1.0, 0.0});
}

TEST_CASE("taylor tables agree with finite differences of the evaluated function") {
  Rng rng(0x7AB1ULL);
  const Point center{0.15, -0.25, 0.35};
  for (Family fam : {Family::AMPLITUDE, Family::PHASE, Family::POLYNOMIAL}) {
    const BasisFunction b = manual_function(fam, center, 2, rng);
    const TaylorTable t = taylor_table(b, 3);
    auto f = [&](const Point& p) { return evaluate(b, p); };
    for (const MultiIndex& i : indices_up_to(3)) {
      const Complex ref = oracle::fd_mixed(f, center, i, 2e-3) / factorial(i);
      CHECK(std::abs(t[i] - ref) <= 1e-5 * std::max(1.0, std::abs(ref)));
    }
  }
}

TEST_CASE("basis matrix of the lowest-order polynomial basis is a permutation") {
  const PdeCoefficients c =
      builtin_operator(BuiltinCase::HELMHOLTZ_CONST, 3.0, 0.0, {0, 0, 0}, 2);
  const BasisMatrix M = assemble_matrix(build_basis(c, 1, Family::POLYNOMIAL), 1);
  REQUIRE(M.rows() == 4);
  REQUIRE(M.p() == 4);
  CHECK(is_permutation_matrix(M.entries));
}

TEST_CASE("basis matrix rows at free slots form the identity for canonical seeds") {
  const PdeCoefficients c =
      builtin_operator(BuiltinCase::HELMHOLTZ_AIRY, 2.0, 0.0, {0.3, 0.2, -0.5}, 2);
  const std::vector<BasisFunction> basis = build_basis(c, 2, Family::POLYNOMIAL);
  const std::vector<MultiIndex> seeds = canonical_seeds(1);
  REQUIRE(basis.size() == seeds.size());
  const BasisMatrix M = assemble_matrix(basis, 2);
  for (std::size_t row = 0; row < seeds.size(); ++row)
    for (std::size_t col = 0; col < basis.size(); ++col)
      CHECK(M.entries(static_cast<Eigen::Index>(numbering(seeds[row])),
                      static_cast<Eigen::Index>(col)) ==
            (row == col ? Complex{1.0, 0.0} : Complex{0.0, 0.0}));
}

TEST_CASE("assembled plane-wave matrix equals the reference exponential matrix") {
  const double kappa = 3.0;
  const PdeCoefficients c =
      builtin_operator(BuiltinCase::HELMHOLTZ_CONST, kappa, 0.0, {0.2, 0.7, -0.1}, 4);
  const DirectionSet dirs = generate_directions(2);
  std::vector<BasisFunction> basis;
  for (const auto& en : dirs.entries)
    basis.push_back(construct_amplitude_gpw(c, 3, Complex{0.0, kappa}, en.d));
  const BasisMatrix A = assemble_matrix(basis, 2);
  const Mat3 I{{{1, 0, 0}, {0, 1, 0}, {0, 0, 1}}};
  const BasisMatrix E = reference_matrix_E(2, dirs, Complex{0.0, kappa}, I, {1, 1, 1});
  REQUIRE(A.rows() == E.rows());
  REQUIRE(A.p() == E.p());
  const double scale = E.entries.cwiseAbs().maxCoeff();
  CHECK((A.entries - E.entries).cwiseAbs().maxCoeff() <= 1e-12 * scale);
}

TEST_CASE("basis matrix rejects empty and mixed-center input") {
  const PdeCoefficients c =
      builtin_operator(BuiltinCase::HELMHOLTZ_CONST, 2.0, 0.0, {0, 0, 0}, 3);
  CHECK_THROWS_AS(assemble_matrix({}, 1), std::invalid_argument);
  std::vector<BasisFunction> basis = build_basis(c, 1, Family::POLYNOMIAL);
  basis.back().center = {0.0, 0.0, 0.5};
  CHECK_THROWS_AS(assemble_matrix(basis, 1), std::invalid_argument);
}

TEST_CASE("reference matrices: first row is all ones, axis column is 1/k!") {
  const DirectionSet dirs = generate_directions(2);
  const Mat3 I{{{1, 0, 0}, {0, 1, 0}, {0, 0, 1}}};
  const BasisMatrix E = reference_matrix_E(2, dirs, Complex{1.0, 0.0}, I, {1, 1, 1});
  const BasisMatrix R = reference_matrix_R(2, dirs);
  for (Eigen::Index col = 0; col < E.p(); ++col) {
    CHECK(std::abs(E.entries(0, col) - 1.0) <= 1e-15);
    CHECK(std::abs(R.entries(0, col) - 1.0) <= 1e-15);
  }

  DirectionSet axis;
  axis.n = 0;
  DirectionSet::Entry en;
  en.theta = 0.0;
  en.phi = 0.0;
  en.d = {0.0, 0.0, 1.0};
  axis.entries.push_back(en);
  const BasisMatrix Ez = reference_matrix_E(3, axis, Complex{1.0, 0.0}, I, {1, 1, 1});
  for (const MultiIndex& i : indices_up_to(3)) {
    const Complex want =
        (i[0] == 0 && i[1] == 0) ? Complex{1.0 / factorial(i), 0.0} : Complex{0.0, 0.0};
    CHECK(std::abs(Ez.entries(static_cast<Eigen::Index>(numbering(i)), 0) - want) <= 1e-15);
  }
}

TEST_CASE("reference angular matrix entries follow the trigonometric monomial formula") {
  const DirectionSet dirs = generate_directions(1);
  const BasisMatrix R = reference_matrix_R(1, dirs);
  for (std::size_t col = 0; col < dirs.entries.size(); ++col) {
    const auto& en = dirs.entries[col];
    for (const MultiIndex& i : indices_up_to(1)) {
      const double want = std::pow(std::sin(en.phi), i[0]) * std::pow(std::cos(en.phi), i[1]) *
                          std::pow(std::sin(en.theta), i[0] + i[1]) *
                          std::pow(std::cos(en.theta), i[2]) / factorial(i);
      CHECK(std::abs(R.entries(static_cast<Eigen::Index>(numbering(i)),
                               static_cast<Eigen::Index>(col)) -
                     want) <= 1e-15);
    }
  }
}

TEST_CASE("reference matrices have full rank (n+1)^2 on the canonical directions") {
  const PdeCoefficients c =
      builtin_operator(BuiltinCase::HELMHOLTZ_AIRY, 2.0, 0.0, {0.1, -0.3, 0.6}, 2);
  const SecondOrderStructure st = check_hypothesis(c);
  for (int n = 1; n <= 5; ++n) {
    const DirectionSet dirs = generate_directions(n);
    const int p = (n + 1) * (n + 1);
    CHECK(numerical_rank(reference_matrix_E(n, dirs, Complex{0.0, 2.0}, st.P, st.D)) == p);
    CHECK(numerical_rank(reference_matrix_R(n, dirs)) == p);
  }
}

TEST_CASE("assembled bases have full rank (n+1)^2 for every family") {
  const PdeCoefficients c =
      builtin_operator(BuiltinCase::HELMHOLTZ_AIRY, 2.0, 0.0, {0.4, 0.1, -0.2}, 4);
  for (int n = 1; n <= 3; ++n) {
    const int p = (n + 1) * (n + 1);
    for (Family fam : {Family::AMPLITUDE, Family::PHASE, Family::POLYNOMIAL})
      CHECK(numerical_rank(assemble_matrix(build_basis(c, n, fam), n)) == p);
  }
}

TEST_CASE("angular and exponential reference matrices share their rank on random directions") {
  Rng rng(0x0D1ECE5ULL);
  const Mat3 I{{{1, 0, 0}, {0, 1, 0}, {0, 0, 1}}};
  for (int n = 1; n <= 4; ++n)
    for (int rep = 0; rep < 3; ++rep) {
      const DirectionSet dirs = random_directions(n, rng);
      const int re = numerical_rank(reference_matrix_E(n, dirs, Complex{0.0, 1.7}, I, {1, 1, 1}));
      const int rr = numerical_rank(reference_matrix_R(n, dirs));
      CHECK(re == rr);
    }
}

TEST_CASE("extra directions beyond (n+1)^2 never raise the rank") {
  const Mat3 I{{{1, 0, 0}, {0, 1, 0}, {0, 0, 1}}};
  for (int n = 1; n <= 4; ++n) {
    const DirectionSet wide = generate_directions(n + 1);  // (n+2)^2 columns
    CHECK(numerical_rank(reference_matrix_E(n, wide, Complex{0.0, 2.0}, I, {1, 1, 1})) ==
          (n + 1) * (n + 1));
    CHECK(numerical_rank(reference_matrix_R(n, wide)) == (n + 1) * (n + 1));
  }
}

TEST_CASE("numerical rank edge cases") {
  CHECK(numerical_rank(Eigen::MatrixXcd()) == 0);
  CHECK(numerical_rank(Eigen::MatrixXcd::Zero(4, 3)) == 0);
  CHECK(numerical_rank(Eigen::MatrixXcd::Identity(5, 5)) == 5);
  Eigen::MatrixXcd M = Eigen::MatrixXcd::Identity(4, 4);
  M(3, 3) = Complex{1e-12, 0.0};  // below the 1e-8 relative cutoff
  CHECK(numerical_rank(M) == 3);
}
