#pragma once

#include <optional>
#include <string>

#include "qtbasis/operator_core.hpp"

namespace qtb {

enum class Family { AMPLITUDE, PHASE, POLYNOMIAL };

// One quasi-Trefftz basis function about `center` with L b = O(|x-x_C|^q):
//   AMPLITUDE:  J(x) = Q(x-x_C) exp(Lambda.(x-x_C)), poly = coefficients of Q
//   PHASE:      G(x) = exp(P(x-x_C)),                poly = coefficients of P
//   POLYNOMIAL: H(x) = R(x-x_C),                     poly = coefficients of R
// poly is dense up to degree q+1, indexed by numbering().
struct BasisFunction {
  Family family = Family::POLYNOMIAL;
  Point center{0, 0, 0};
  int q = 1;
  std::vector<Complex> poly;  // size index_count(q+1)
  CVec3 Lambda{};             // AMPLITUDE only

  // How the function was seeded (waves: angles and s; polynomial: none).
  struct DirectionMeta {
    double theta = 0.0, phi = 0.0;
    Complex s{0.0, 0.0};
  };
  std::optional<DirectionMeta> direction_meta;

  Complex coeff(MultiIndex i) const { return poly[numbering(i)]; }
};

// The (n+1)^2 unit directions of the rank theorem:
//   theta_l = pi (l+1)/(n+2), l = 0..n;  phi_lm = 2 pi (m+l)/(2l+1), m = -l..l;
//   d = (sin theta cos phi, sin theta sin phi, cos theta).
struct DirectionSet {
  struct Entry {
    int l = 0, m = 0;
    double theta = 0.0, phi = 0.0;
    Vec3 d{0, 0, 0};
  };
  int n = 0;
  std::vector<Entry> entries;
};

DirectionSet generate_directions(int n);

// One layer of the echelon solve (Algorithm "solve one subsystem"): given the
// right-hand side B over {|beta| = ell} and the fixed values on the slots
// {|i| = ell+2, i1 in {0,1}}, substitutes for the pivots xi_{beta+2e1}:
//   xi_{beta+2e1} = ( B_beta - sum_{k=2,3} (b_k+2)(b_k+1) c_{2e_k}[0] xi_{beta+2e_k}
//                     - sum_{k<k'} (b_k+1)(b_k'+1) c_{e_k+e_k'}[0] xi_{beta+e_k+e_k'} )
//                   / ((b_1+2)(b_1+1) c_{2e_1}[0])
// looping b1 = 0..ell outer, b2 = 0..ell-b1 inner, so every value on the right
// is either fixed or an earlier pivot. No linear solver involved.
//
// B is indexed by position within layer(ell) (prec order); `fixed` and the
// result are dense over layer(ell+2) in prec order, entries with i1 >= 2 of
// `fixed` ignored.
std::vector<Complex> solve_subsystem(const PdeCoefficients& coeffs, int ell,
                                     const std::vector<Complex>& B,
                                     const std::vector<Complex>& fixed);

// Amplitude-based construction: Lambda = s P D^{-1/2} d, Q seeded with
// Q(x_C)=1 and vanishing gradient, higher fixed slots zero; layers ell=0..q-1
// solved in turn. Requires coeffs.max_order >= q+1 (enough for both the
// recurrences and the residual oracle).
BasisFunction construct_amplitude_gpw(const PdeCoefficients& coeffs, int q, Complex s,
                                      const Vec3& d);
BasisFunction construct_amplitude_gpw(const PdeCoefficients& coeffs,
                                      const SecondOrderStructure& structure, int q,
                                      Complex s, const Vec3& d);

// Phase-based construction: the linear phase is the same seed, P(x_C) = 0.
BasisFunction construct_phase_gpw(const PdeCoefficients& coeffs, int q, Complex s,
                                  const Vec3& d);
BasisFunction construct_phase_gpw(const PdeCoefficients& coeffs,
                                  const SecondOrderStructure& structure, int q, Complex s,
                                  const Vec3& d);

// Polynomial construction: canonical seed nu_i = delta_{i,seed} on the free
// slots {|i| <= q+1, i1 in {0,1}}; seed must have seed1 in {0,1}, |seed| <= q+1.
BasisFunction construct_polynomial_qt(const PdeCoefficients& coeffs, int q, MultiIndex seed);

// max_{|beta| < q} |T_{L b}[beta]| through the independent operator oracle;
// wave families apply the conjugated operator to the polynomial part so no
// exponential is ever evaluated.
double residual_magnitude(const PdeCoefficients& coeffs, const BasisFunction& b, int q);

// The default exponent scale when the caller gives none: i sqrt(|c_0(x_C)|)
// (equals i kappa for the Helmholtz-type builtins).
Complex default_s(const PdeCoefficients& coeffs);

// A full basis of p = (n+1)^2 functions with q = max(n-1, 1): wave families use
// generate_directions(n) with the shared s; POLYNOMIAL takes the first (n+1)^2
// canonical seeds in prec order (all of them when n >= 2).
std::vector<BasisFunction> build_basis(const PdeCoefficients& coeffs, int n, Family family,
                                       std::optional<Complex> s = std::nullopt);

// The canonical polynomial seeds {|j| <= q+1, j1 in {0,1}} in prec order,
// (q+2)^2 of them.
std::vector<MultiIndex> canonical_seeds(int q);

// Serialization: "family q | i1 i2 i3 re im | ..." with nonzero entries in
// prec order, plus a "LAMBDA re im re im re im" line for AMPLITUDE.
std::string serialize_basis_function(const BasisFunction& b);

}  // namespace qtb
