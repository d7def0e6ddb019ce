#pragma once

#include <functional>
#include <string>

#include "qtbasis/evaluation.hpp"
#include "qtbasis/exact_solutions.hpp"

namespace qtb {

// F[numbering(i)] = T_u[i] for |i| <= n (requires u.order >= n).
Eigen::VectorXcd solution_rhs(const TaylorTable& u, int n);

// Solution of the normal equations conj(M)^T M x = conj(M)^T F by a pivoted
// Hermitian factorization plus one step of iterative refinement. A numerically
// singular normal matrix is reported, not fatal: non-finite weights are zeroed
// and the flag set (the high-n wave bases reach this regime by design).
// use_qr switches to a column-pivoted QR of M itself (diagnostics only).
struct FitResult {
  Eigen::VectorXcd weights;
  bool normal_singular = false;
};
FitResult fit(const BasisMatrix& M, const Eigen::VectorXcd& F, bool use_qr = false);

using PointFn = std::function<Complex(const Point&)>;
using GradFn = std::function<CVec3(const Point&)>;

// Deterministic evaluation set: `samples` Fibonacci-sphere directions times
// radii {h, h/2, h/4}, plus the center itself.
std::vector<Point> ball_sample_points(Point x_C, double h, int samples);

// max |u(x) - sum_l w_l b_l(x)| over the sample set. samples >= 50, h > 0.
double max_error_on_ball(const PointFn& u_exact, const std::vector<BasisFunction>& basis,
                         const Eigen::VectorXcd& weights, Point x_C, double h, int samples);

// Same sampling, max Euclidean norm of the gradient mismatch.
double gradient_error_on_ball(const GradFn& grad_exact,
                              const std::vector<BasisFunction>& basis,
                              const Eigen::VectorXcd& weights, Point x_C, double h,
                              int samples);

// 2-norm condition number of conj(M)^T M via SVD (infinity when the smallest
// singular value is below 1e-300).
double condition_number(const BasisMatrix& M);

// Least-squares slope of log err vs log h over the points with
// err in (1e-13, 1e-2); throws if fewer than 3 qualify.
double fit_convergence_order(const std::vector<double>& h, const std::vector<double>& err);

// The four basis kinds of the experiments. PLANE_WAVE is the classical
// constant-coefficient basis exp(s P D^{-1/2} d_l . (x-x_C)) with no
// higher-order correction; only meaningful where the operator has constant
// coefficients (test case 1).
enum class BasisKind { AMPLITUDE, PHASE, POLYNOMIAL, PLANE_WAVE };
const char* kind_name(BasisKind k);

std::vector<BasisFunction> build_study_basis(const PdeCoefficients& coeffs, int n,
                                             BasisKind kind,
                                             std::optional<Complex> s = std::nullopt);

// Everything measured at one center: per-h errors, gradient errors, and the
// condition number of the fitted system.
struct CenterStudy {
  std::vector<double> errors;
  std::vector<double> grad_errors;
  double cond = 0.0;
  bool singular = false;
};
CenterStudy center_study(const TestCase& tc, BasisKind kind, int n, Point x_C,
                         const std::vector<double>& h, int samples,
                         std::optional<Complex> s = std::nullopt);

// Worst-over-centers aggregation of center_study plus the fitted slope.
// fitted_order is NaN when too few error values fall in the slope window.
struct ApproxReport {
  BasisKind kind = BasisKind::POLYNOMIAL;
  int n = 1;
  std::string case_id;
  std::vector<double> h;
  std::vector<double> max_errors;
  std::vector<double> gradient_errors;
  double cond = 0.0;
  double fitted_order = 0.0;
};
ApproxReport approximation_report(const TestCase& tc, BasisKind kind, int n,
                                  const std::vector<Point>& centers,
                                  const std::vector<double>& h, int samples,
                                  std::optional<Complex> s = std::nullopt);

}  // namespace qtb
