#include "qtbasis/evaluation.hpp"

#include <cmath>
#include <stdexcept>

namespace qtb {

namespace {

// Multi-Horner evaluation of a dense polynomial (numbering layout) at t,
// innermost in t3, then t2, then t1.
Complex horner3(const std::vector<Complex>& poly, int deg, const std::array<double, 3>& t) {
  Complex acc1{0.0, 0.0};
  for (int a = deg; a >= 0; --a) {
    Complex acc2{0.0, 0.0};
    for (int b = deg - a; b >= 0; --b) {
      Complex acc3{0.0, 0.0};
      for (int c = deg - a - b; c >= 0; --c) acc3 = acc3 * t[2] + poly[numbering({a, b, c})];
      acc2 = acc2 * t[1] + acc3;
    }
    acc1 = acc1 * t[0] + acc2;
  }
  return acc1;
}

// Dense coefficients of d_k p for a degree-deg dense polynomial.
std::vector<Complex> diff_poly(const std::vector<Complex>& poly, int deg, int k) {
  const int dd = deg > 0 ? deg - 1 : 0;
  std::vector<Complex> out(index_count(dd), Complex{0.0, 0.0});
  if (deg == 0) return out;
  const MultiIndex ek = k == 0 ? e1 : k == 1 ? e2 : e3;
  for (const MultiIndex& i : indices_up_to(dd))
    out[numbering(i)] = double(i[k] + 1) * poly[numbering(i + ek)];
  return out;
}

std::array<double, 3> offset(const BasisFunction& b, const Point& x) {
  return {x[0] - b.center[0], x[1] - b.center[1], x[2] - b.center[2]};
}

}  // namespace

Complex evaluate(const BasisFunction& b, const Point& x) {
  const std::array<double, 3> t = offset(b, x);
  const Complex v = horner3(b.poly, b.q + 1, t);
  switch (b.family) {
    case Family::POLYNOMIAL:
      return v;
    case Family::PHASE:
      return std::exp(v);
    case Family::AMPLITUDE:
      return v * std::exp(b.Lambda[0] * t[0] + b.Lambda[1] * t[1] + b.Lambda[2] * t[2]);
  }
  return v;
}

CVec3 evaluate_gradient(const BasisFunction& b, const Point& x) {
  const std::array<double, 3> t = offset(b, x);
  const int deg = b.q + 1;
  CVec3 g;
  for (int k = 0; k < 3; ++k) g[k] = horner3(diff_poly(b.poly, deg, k), deg - 1, t);

  switch (b.family) {
    case Family::POLYNOMIAL:
      return g;
    case Family::PHASE: {
      const Complex G = std::exp(horner3(b.poly, deg, t));
      for (int k = 0; k < 3; ++k) g[k] *= G;
      return g;
    }
    case Family::AMPLITUDE: {
      const Complex v = horner3(b.poly, deg, t);
      const Complex E =
          std::exp(b.Lambda[0] * t[0] + b.Lambda[1] * t[1] + b.Lambda[2] * t[2]);
      for (int k = 0; k < 3; ++k) g[k] = (g[k] + b.Lambda[k] * v) * E;
      return g;
    }
  }
  return g;
}

TaylorTable exp_series(const TaylorTable& f, int order) {
  TaylorTable S(f.center(), order);
  S[MultiIndex{0, 0, 0}] = std::exp(f[MultiIndex{0, 0, 0}]);
  for (int m = 1; m <= order; ++m) {
    for (const MultiIndex& i : layer(m)) {
      Complex acc{0.0, 0.0};
      for (int a = 0; a <= i[0]; ++a)
        for (int b = 0; b <= i[1]; ++b)
          for (int c = 0; c <= i[2]; ++c) {
            const MultiIndex j{a, b, c};
            const int oj = j.order();
            if (oj == 0 || oj > f.order()) continue;
            acc += double(oj) * f[j] * S[i - j];
          }
      S[i] = acc / double(m);
    }
  }
  return S;
}

TaylorTable taylor_table(const BasisFunction& b, int order) {
  switch (b.family) {
    case Family::POLYNOMIAL: {
      TaylorTable t(b.center, order);
      for (const MultiIndex& i : indices_up_to(std::min(order, b.q + 1)))
        t[i] = b.poly[numbering(i)];
      return t;
    }
    case Family::AMPLITUDE: {
      TaylorTable q(b.center, order);
      for (const MultiIndex& i : indices_up_to(std::min(order, b.q + 1)))
        q[i] = b.poly[numbering(i)];
      TaylorTable ex(b.center, order);
      for (const MultiIndex& i : indices_up_to(order)) {
        Complex pw{1.0, 0.0};
        for (int k = 0; k < 3; ++k)
          for (int r = 0; r < i[k]; ++r) pw *= b.Lambda[k];
        ex[i] = pw / factorial(i);
      }
      return taylor_product(q, ex);
    }
    case Family::PHASE: {
      TaylorTable p(b.center, std::min(order, b.q + 1));
      for (const MultiIndex& i : indices_up_to(p.order())) p[i] = b.poly[numbering(i)];
      return exp_series(p, order);
    }
  }
  return TaylorTable(b.center, order);
}

BasisMatrix assemble_matrix(const std::vector<BasisFunction>& basis, int n) {
  if (basis.empty()) throw std::invalid_argument("assemble_matrix: empty basis");
  for (const BasisFunction& b : basis)
    if (b.center != basis.front().center)
      throw std::invalid_argument("assemble_matrix: mixed centers");

  BasisMatrix M;
  M.n = n;
  const std::size_t rows = index_count(n);
  M.entries.resize(static_cast<Eigen::Index>(rows),
                   static_cast<Eigen::Index>(basis.size()));
  for (std::size_t l = 0; l < basis.size(); ++l) {
    const TaylorTable t = taylor_table(basis[l], n);
    for (std::size_t r = 0; r < rows; ++r)
      M.entries(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(l)) = t.at_rank(r);
  }
  return M;
}

BasisMatrix reference_matrix_E(int n, const DirectionSet& dirs, Complex s, const Mat3& P,
                               const Vec3& D) {
  SecondOrderStructure structure;
  structure.P = P;
  structure.D = D;

  BasisMatrix M;
  M.n = n;
  const std::size_t rows = index_count(n);
  M.entries.resize(static_cast<Eigen::Index>(rows),
                   static_cast<Eigen::Index>(dirs.entries.size()));
  for (std::size_t l = 0; l < dirs.entries.size(); ++l) {
    const CVec3 La = structure.seed_direction(s, dirs.entries[l].d);
    for (const MultiIndex& i : indices_up_to(n)) {
      Complex pw{1.0, 0.0};
      for (int k = 0; k < 3; ++k)
        for (int r = 0; r < i[k]; ++r) pw *= La[k];
      M.entries(static_cast<Eigen::Index>(numbering(i)), static_cast<Eigen::Index>(l)) =
          pw / factorial(i);
    }
  }
  return M;
}

BasisMatrix reference_matrix_R(int n, const DirectionSet& dirs) {
  BasisMatrix M;
  M.n = n;
  const std::size_t rows = index_count(n);
  M.entries.resize(static_cast<Eigen::Index>(rows),
                   static_cast<Eigen::Index>(dirs.entries.size()));
  for (std::size_t l = 0; l < dirs.entries.size(); ++l) {
    const double st = std::sin(dirs.entries[l].theta), ct = std::cos(dirs.entries[l].theta);
    const double sp = std::sin(dirs.entries[l].phi), cp = std::cos(dirs.entries[l].phi);
    for (const MultiIndex& i : indices_up_to(n)) {
      const double v = std::pow(sp, i[0]) * std::pow(cp, i[1]) * std::pow(st, i[0] + i[1]) *
                       std::pow(ct, i[2]) / factorial(i);
      M.entries(static_cast<Eigen::Index>(numbering(i)), static_cast<Eigen::Index>(l)) = v;
    }
  }
  return M;
}

int numerical_rank(const Eigen::MatrixXcd& M) {
  if (M.rows() == 0 || M.cols() == 0) return 0;
  const Eigen::JacobiSVD<Eigen::MatrixXcd> svd(M);
  const auto& sv = svd.singularValues();
  if (sv.size() == 0 || sv(0) <= 0.0) return 0;
  int rank = 0;
  for (Eigen::Index k = 0; k < sv.size(); ++k)
    if (sv(k) >= 1e-8 * sv(0)) ++rank;
  return rank;
}

}  // namespace qtb
