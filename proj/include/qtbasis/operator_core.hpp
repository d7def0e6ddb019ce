#pragma once

#include <stdexcept>

#include "qtbasis/pde_coefficients.hpp"

namespace qtb {

using Mat3 = std::array<std::array<double, 3>, 3>;
using Vec3 = std::array<double, 3>;
using CVec3 = std::array<Complex, 3>;

// Thrown when the operator fails the solvability requirements at the center
// (vanishing pivot coefficient, singular principal part, or a principal entry
// with a genuinely complex value).
struct HypothesisViolation : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Principal part at the center: C_kk = c_{2e_k}(x_C), C_kl = c_{e_k+e_l}(x_C)/2,
// with its spectral factorization C = P diag(D) P^T.
struct SecondOrderStructure {
  Mat3 C{};
  Mat3 P{};      // orthogonal, columns are eigenvectors
  Vec3 D{};      // eigenvalues, all nonzero
  double det = 0.0;

  // Lambda = s P D^{-1/2} d, the exponent seed; Lambda^T C Lambda = s^2 for
  // any unit d (negative eigenvalues take the principal complex square root).
  CVec3 seed_direction(Complex s, const Vec3& d) const;
};

// Symmetric 3x3 eigendecomposition: closed-form characteristic-polynomial
// eigenvalues with one Newton polish each, eigenvectors by deflation. Ascending
// eigenvalue order, except that (near-)diagonal input short-circuits to P = I
// with the diagonal read off verbatim.
void symmetric_eig3(const Mat3& A, Mat3& P, Vec3& D);

// Validates Hypothesis requirements and returns the principal structure.
// Tolerance: 1e-12 relative to max principal entry magnitude (cubed for the
// determinant test).
SecondOrderStructure check_hypothesis(const PdeCoefficients& coeffs);

// Taylor table of L_c f at the common center up to out_order, computed purely
// by derivative shifts and truncated convolutions:
//   T_{L f}[beta] = sum_j sum_{gamma<=beta} T_{c_j}[beta-gamma] ((j+gamma)!/gamma!) T_f[j+gamma]
// Requires f.order >= out_order + 2. This is the independent residual oracle.
TaylorTable apply_operator_taylor(const PdeCoefficients& coeffs, const TaylorTable& f,
                                  int out_order);

// Coefficients of the conjugated operator e^{-Lambda.(x-x_C)} L (e^{Lambda.(x-x_C)} .):
//   same second-order part, first order picks up 2 Lambda_k c_{2e_k} + cross terms,
//   zero order picks up the full quadratic form in Lambda.
// Applying this to an amplitude polynomial Q gives the table of L J / exp factor.
PdeCoefficients conjugate_by_exponential(const PdeCoefficients& coeffs, const CVec3& Lambda);

}  // namespace qtb
