// Independent reference implementations used only by the tests. Everything
// here is deliberately written with different data structures and algorithms
// than the library (sparse maps + brute-force enumeration rather than dense
// tables + recurrences) so agreement is meaningful.
#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <functional>
#include <map>
#include <vector>

#include "qtbasis/multi_index.hpp"
#include "qtbasis/taylor_table.hpp"

namespace oracle {

using qtb::Complex;
using qtb::MultiIndex;
using qtb::Point;

// Sparse trivariate polynomial keyed by exponents.
struct Poly3 {
  struct Key {
    int a = 0, b = 0, c = 0;
    bool operator<(const Key& o) const {
      if (a != o.a) return a < o.a;
      if (b != o.b) return b < o.b;
      return c < o.c;
    }
  };
  std::map<Key, Complex> terms;

  void add(int a, int b, int c, Complex v) {
    if (v == Complex{0.0, 0.0}) return;
    auto [it, fresh] = terms.try_emplace(Key{a, b, c}, v);
    if (!fresh) {
      it->second += v;
      if (it->second == Complex{0.0, 0.0}) terms.erase(it);
    }
  }

  Complex coeff(int a, int b, int c) const {
    auto it = terms.find(Key{a, b, c});
    return it == terms.end() ? Complex{0.0, 0.0} : it->second;
  }

  friend Poly3 operator*(const Poly3& p, const Poly3& q) {
    Poly3 out;
    for (const auto& [kp, vp] : p.terms)
      for (const auto& [kq, vq] : q.terms)
        out.add(kp.a + kq.a, kp.b + kq.b, kp.c + kq.c, vp * vq);
    return out;
  }

  friend Poly3 operator+(const Poly3& p, const Poly3& q) {
    Poly3 out = p;
    for (const auto& [k, v] : q.terms) out.add(k.a, k.b, k.c, v);
    return out;
  }

  Poly3 scaled(Complex s) const {
    Poly3 out;
    for (const auto& [k, v] : terms) out.add(k.a, k.b, k.c, s * v);
    return out;
  }

  // d/dx_k
  Poly3 diff(int k) const {
    Poly3 out;
    for (const auto& [key, v] : terms) {
      if (k == 0 && key.a > 0) out.add(key.a - 1, key.b, key.c, double(key.a) * v);
      if (k == 1 && key.b > 0) out.add(key.a, key.b - 1, key.c, double(key.b) * v);
      if (k == 2 && key.c > 0) out.add(key.a, key.b, key.c - 1, double(key.c) * v);
    }
    return out;
  }

  Poly3 truncate(int max_total_degree) const {
    Poly3 out;
    for (const auto& [k, v] : terms)
      if (k.a + k.b + k.c <= max_total_degree) out.add(k.a, k.b, k.c, v);
    return out;
  }

  Complex eval(double x, double y, double z) const {
    Complex s{0.0, 0.0};
    for (const auto& [k, v] : terms)
      s += v * std::pow(x, k.a) * std::pow(y, k.b) * std::pow(z, k.c);
    return s;
  }
};

inline double fact(int n) {
  double f = 1.0;
  for (int k = 2; k <= n; ++k) f *= k;
  return f;
}

// Poly3 from a Taylor table of a polynomial (monomials in x - center; the
// returned polynomial lives in the centered variables).
inline Poly3 poly_from_table(const qtb::TaylorTable& t) {
  Poly3 out;
  for (const MultiIndex& i : qtb::indices_up_to(t.order()))
    out.add(i[0], i[1], i[2], t[i]);
  return out;
}

// Taylor table of a Poly3 about 0 in the centered variables (entries are just
// the coefficients, up to `order`).
inline qtb::TaylorTable table_from_poly(const Poly3& p, Point center, int order) {
  qtb::TaylorTable t(center, order);
  for (const auto& [k, v] : p.terms)
    if (k.a + k.b + k.c <= order) t[MultiIndex{k.a, k.b, k.c}] += v;
  return t;
}

// Taylor coefficient of exp(P) at multi-index i by the Faa di Bruno / Bell
// polynomial expansion: sum over multisets of nonzero multi-indices
// {l_1 < l_2 < ... with multiplicities k_m}, sum k_m l_m = i, of
// exp(P_0) prod_m P[l_m]^{k_m} / k_m!.
inline Complex exp_taylor_faa_di_bruno(const qtb::TaylorTable& P, MultiIndex i) {
  // collect candidate nonzero multi-indices 0 < l <= i (componentwise)
  std::vector<MultiIndex> cand;
  for (int a = 0; a <= i[0]; ++a)
    for (int b = 0; b <= i[1]; ++b)
      for (int c = 0; c <= i[2]; ++c)
        if (a + b + c > 0 && a + b + c <= P.order())  // stay within the table
          cand.push_back(MultiIndex{a, b, c});

  Complex total{0.0, 0.0};
  // depth-first over multiplicities of each candidate
  std::function<void(std::size_t, MultiIndex, Complex)> rec =
      [&](std::size_t pos, MultiIndex rest, Complex acc) {
        if (rest == MultiIndex{0, 0, 0}) {
          total += acc;
          return;
        }
        if (pos == cand.size()) return;
        const MultiIndex l = cand[pos];
        // multiplicity 0
        rec(pos + 1, rest, acc);
        Complex factor{1.0, 0.0};
        MultiIndex r = rest;
        for (int k = 1;; ++k) {
          if (!(leq(l, r))) break;
          r = r - l;
          factor *= P[l] / double(k);
          rec(pos + 1, r, acc * factor);
          if (r == MultiIndex{0, 0, 0}) break;
        }
      };
  rec(0, i, Complex{1.0, 0.0});
  return total * std::exp(P[MultiIndex{0, 0, 0}]);
}

// Central finite differences ------------------------------------------------

// 4th-order central first derivative of a scalar complex field.
inline Complex fd_partial(const std::function<Complex(const Point&)>& f, Point x, int k,
                          double step) {
  auto shift = [&](double d) {
    Point p = x;
    p[static_cast<std::size_t>(k)] += d;
    return f(p);
  };
  return (-shift(2 * step) + 8.0 * shift(step) - 8.0 * shift(-step) + shift(-2 * step)) /
         (12.0 * step);
}

// Repeated central differencing for a mixed partial d^i f (adequate for the
// low orders the tests use).
inline Complex fd_mixed(const std::function<Complex(const Point&)>& f, Point x, MultiIndex i,
                        double step) {
  if (i[0] > 0) {
    auto g = [&](const Point& p) { return fd_mixed(f, p, i - qtb::e1, step); };
    return fd_partial(g, x, 0, step);
  }
  if (i[1] > 0) {
    auto g = [&](const Point& p) { return fd_mixed(f, p, i - qtb::e2, step); };
    return fd_partial(g, x, 1, step);
  }
  if (i[2] > 0) {
    auto g = [&](const Point& p) { return fd_mixed(f, p, i - qtb::e3, step); };
    return fd_partial(g, x, 2, step);
  }
  return f(x);
}

// Deterministic reproducible RNG for test data.
struct Rng {
  std::uint64_t s;
  explicit Rng(std::uint64_t seed) : s(seed) {}
  double uniform() {  // in [0,1)
    s = s * 6364136223846793005ULL + 1442695040888963407ULL;
    return double((s >> 11) & ((1ULL << 53) - 1)) / double(1ULL << 53);
  }
  double range(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  Complex cplx(double lo, double hi) { return {range(lo, hi), range(lo, hi)}; }
};

}  // namespace oracle
