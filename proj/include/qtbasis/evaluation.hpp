#pragma once

#include <Eigen/Dense>

#include "qtbasis/construction.hpp"

namespace qtb {

// Pointwise value of the basis function:
//   AMPLITUDE: Q(x-x_C) exp(Lambda.(x-x_C)); PHASE: exp(P(x-x_C)); POLYNOMIAL: R(x-x_C).
// Polynomials are evaluated by multi-Horner (innermost x3, then x2, then x1).
Complex evaluate(const BasisFunction& b, const Point& x);

// Analytic gradient of each ansatz (product/chain rule on the same Horner core).
CVec3 evaluate_gradient(const BasisFunction& b, const Point& x);

// Taylor table of the basis function about its own center up to `order`:
//   POLYNOMIAL: coefficients read off (zero beyond degree q+1);
//   AMPLITUDE:  T_J[i] = sum_{j<=i} mu_j Lambda^{i-j}/(i-j)!  (Leibniz);
//   PHASE:      exp_series of the phase polynomial.
// All three are exact at every order: the underlying polynomial is the whole
// object, not a truncation of something longer.
TaylorTable taylor_table(const BasisFunction& b, int order);

// Table of exp(f) for a polynomial table f, grade by grade: S_0 = exp(f[0]),
// and for the degree-m part  S[i] = (1/m) sum_{0<j<=i} |j| f[j] S[i-j].
TaylorTable exp_series(const TaylorTable& f, int order);

// The Taylor matrix M^{n,p} of a basis: entry (numbering(i), l) = T_{b_l}[i],
// (n+1)(n+2)(n+3)/6 rows by p columns.
struct BasisMatrix {
  int n = 0;
  Eigen::MatrixXcd entries;

  Eigen::Index rows() const { return entries.rows(); }
  Eigen::Index p() const { return entries.cols(); }
};

BasisMatrix assemble_matrix(const std::vector<BasisFunction>& basis, int n);

// Reference matrix of the constant-coefficient plane waves exp(s P D^{-1/2} d_l . (x-x_C)):
// entry (numbering(i), l) = Lambda_l^i / i!.
BasisMatrix reference_matrix_E(int n, const DirectionSet& dirs, Complex s, const Mat3& P,
                               const Vec3& D);

// Reference matrix with entries (sin phi_l)^{i1} (cos phi_l)^{i2} (sin theta_l)^{i1+i2}
// (cos theta_l)^{i3} / i!.
BasisMatrix reference_matrix_R(int n, const DirectionSet& dirs);

// Numerical rank: number of singular values >= 1e-8 * sigma_max.
int numerical_rank(const Eigen::MatrixXcd& M);
inline int numerical_rank(const BasisMatrix& M) { return numerical_rank(M.entries); }

}  // namespace qtb
