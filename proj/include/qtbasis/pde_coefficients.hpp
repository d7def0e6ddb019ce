#pragma once

#include <iosfwd>

#include "qtbasis/taylor_table.hpp"

namespace qtb {

// The ten coefficient multi-indices {|j| <= 2}, addressed by numbering(j):
//   0:(0,0,0) 1:(1,0,0) 2:(0,1,0) 3:(0,0,1)
//   4:(2,0,0) 5:(1,1,0) 6:(1,0,1) 7:(0,2,0) 8:(0,1,1) 9:(0,0,2)
inline constexpr int kNumCoefficients = 10;

// Second-order linear operator L = sum_{|j|<=2} c_j(x) d^j, represented by the
// Taylor tables of its ten coefficient functions at a common center.
class PdeCoefficients {
 public:
  PdeCoefficients(Point center, int max_order);

  const Point& center() const { return center_; }
  int max_order() const { return max_order_; }

  TaylorTable& c(MultiIndex j) { return tables_[numbering(j)]; }
  const TaylorTable& c(MultiIndex j) const { return tables_[numbering(j)]; }

  // Value of c_j's Taylor entry at beta (zero beyond stored order is *not*
  // implied -- callers stay within max_order by construction).
  Complex at(MultiIndex j, MultiIndex beta) const { return c(j)[beta]; }

  // Largest coefficient-table entry magnitude; the natural scale for residual
  // and hypothesis tolerances.
  double scale() const;

  // All ten tables multiplied by s (the operator s*L).
  PdeCoefficients scaled(Complex s) const;

 private:
  Point center_;
  int max_order_;
  std::vector<TaylorTable> tables_;
};

enum class BuiltinCase { HELMHOLTZ_CONST, HELMHOLTZ_AIRY, CONVECTED_AIRY };

// The three operators used by the experiments, expanded about x_C:
//   HELMHOLTZ_CONST:  lap u + kappa^2 u
//   HELMHOLTZ_AIRY:   lap u + kappa^2 (1-x) u
//   CONVECTED_AIRY:   lap u - M0^2 dzz u + 2 i kappa M0 dz u + kappa^2 (1-z) u
// The convected potential varies in z, matching the Airy-in-z exact solution it
// is paired with (the uniform flow is along z).
PdeCoefficients builtin_operator(BuiltinCase which, double kappa, double M0,
                                 Point x_C, int max_order);

// Convected-Helmholtz coefficients from a density table rho and Mach tables
// M1,M2,M3 (all sharing center and order):
//   c_{2e_k}     = rho (M_k^2 - 1)
//   c_{e_k+e_l}  = rho M_k M_l                     (k < l)
//   c_{e_k}      = rho sum_l M_l d_l M_k + div(rho M) M_k - d_k rho - 2 i kappa rho M_k
//   c_0          = -i kappa div(rho M) - rho kappa^2
// Note the global sign: these equal -1 x the builtin Helmholtz convention.
PdeCoefficients coefficients_from_flow(const TaylorTable& rho, const TaylorTable& M1,
                                       const TaylorTable& M2, const TaylorTable& M3,
                                       double kappa);

// Text format for user-defined operators: one entry per line,
//   j1 j2 j3 | i1 i2 i3 | re im
// Unlisted entries are zero. Lines starting with '#' are skipped.
PdeCoefficients load_coefficients(std::istream& in, Point center, int max_order);

}  // namespace qtb
