#include "qtbasis/pde_coefficients.hpp"

#include <cmath>
#include <istream>
#include <sstream>
#include <stdexcept>
#include <string>

namespace qtb {

PdeCoefficients::PdeCoefficients(Point center, int max_order)
    : center_(center), max_order_(max_order) {
  tables_.reserve(kNumCoefficients);
  for (int r = 0; r < kNumCoefficients; ++r) tables_.emplace_back(center, max_order);
}

double PdeCoefficients::scale() const {
  double m = 0.0;
  for (const TaylorTable& t : tables_) m = std::max(m, t.max_abs());
  return m;
}

PdeCoefficients PdeCoefficients::scaled(Complex s) const {
  PdeCoefficients out(center_, max_order_);
  for (int m = 0; m <= 2; ++m)
    for (const MultiIndex& j : layer(m)) out.c(j) = taylor_scale(c(j), s);
  return out;
}

PdeCoefficients builtin_operator(BuiltinCase which, double kappa, double M0,
                                 Point x_C, int max_order) {
  PdeCoefficients out(x_C, max_order);
  const double k2 = kappa * kappa;
  switch (which) {
    case BuiltinCase::HELMHOLTZ_CONST:
      for (const MultiIndex j : {MultiIndex{2, 0, 0}, {0, 2, 0}, {0, 0, 2}})
        out.c(j)[{0, 0, 0}] = 1.0;
      out.c({0, 0, 0})[{0, 0, 0}] = k2;
      break;
    case BuiltinCase::HELMHOLTZ_AIRY:
      for (const MultiIndex j : {MultiIndex{2, 0, 0}, {0, 2, 0}, {0, 0, 2}})
        out.c(j)[{0, 0, 0}] = 1.0;
      // kappa^2 (1-x) about x_C: value at 0, slope at e1.
      out.c({0, 0, 0})[{0, 0, 0}] = k2 * (1.0 - x_C[0]);
      out.c({0, 0, 0})[e1] = -k2;
      break;
    case BuiltinCase::CONVECTED_AIRY: {
      if (std::abs(M0) >= 1.0)
        throw std::invalid_argument("builtin_operator: |M0| must be < 1");
      out.c({2, 0, 0})[{0, 0, 0}] = 1.0;
      out.c({0, 2, 0})[{0, 0, 0}] = 1.0;
      out.c({0, 0, 2})[{0, 0, 0}] = 1.0 - M0 * M0;
      out.c(e3)[{0, 0, 0}] = Complex{0.0, 2.0 * kappa * M0};
      out.c({0, 0, 0})[{0, 0, 0}] = k2 * (1.0 - x_C[2]);
      out.c({0, 0, 0})[e3] = -k2;
      break;
    }
  }
  return out;
}

PdeCoefficients coefficients_from_flow(const TaylorTable& rho, const TaylorTable& M1,
                                       const TaylorTable& M2, const TaylorTable& M3,
                                       double kappa) {
  const std::array<const TaylorTable*, 3> M{&M1, &M2, &M3};
  for (const TaylorTable* t : M)
    if (t->center() != rho.center() || t->order() != rho.order())
      throw std::invalid_argument("coefficients_from_flow: mismatched tables");

  const Complex rho0 = rho[{0, 0, 0}];
  const Complex m1 = M1[{0, 0, 0}], m2 = M2[{0, 0, 0}], m3 = M3[{0, 0, 0}];
  if (rho0.real() <= 0.0 || rho0.imag() != 0.0)
    throw std::invalid_argument("coefficients_from_flow: density must be positive at center");
  if (std::norm(m1) + std::norm(m2) + std::norm(m3) >= 1.0)
    throw std::invalid_argument("coefficients_from_flow: flow must be subsonic at center");

  // Differentiating the flow data costs one order: order-m input tables give
  // order m-1 coefficient tables (and the type wants all ten at equal order).
  if (rho.order() < 1)
    throw std::invalid_argument("coefficients_from_flow: tables must have order >= 1");
  const int n = rho.order() - 1;
  const Point x_C = rho.center();
  const std::array<MultiIndex, 3> ek{e1, e2, e3};
  const Complex ik{0.0, kappa};

  PdeCoefficients out(x_C, n);

  // div(rho M) = sum_l d_l (rho M_l)
  TaylorTable div_rhoM(x_C, n);
  for (int l = 0; l < 3; ++l)
    div_rhoM = taylor_axpy(div_rhoM, 1.0, derivative_table(taylor_product(rho, *M[l]), ek[l]));

  for (int k = 0; k < 3; ++k) {
    // c_{2e_k} = rho (M_k^2 - 1)
    TaylorTable mk2 = taylor_product(*M[k], *M[k]);
    mk2[{0, 0, 0}] -= 1.0;
    out.c(ek[k] + ek[k]) = taylor_product(rho, mk2).truncated(n);

    // c_{e_k+e_l} = rho M_k M_l, k < l
    for (int l = k + 1; l < 3; ++l)
      out.c(ek[k] + ek[l]) = taylor_product(rho, taylor_product(*M[k], *M[l])).truncated(n);

    // c_{e_k} = rho sum_l M_l d_l M_k + div(rho M) M_k - d_k rho - 2 i kappa rho M_k
    TaylorTable adv(x_C, n);
    for (int l = 0; l < 3; ++l)
      adv = taylor_axpy(adv, 1.0, taylor_product(*M[l], derivative_table(*M[k], ek[l])));
    TaylorTable cek = taylor_product(rho, adv);
    cek = taylor_axpy(cek, 1.0, taylor_product(div_rhoM, *M[k]));
    cek = taylor_axpy(cek, -1.0, derivative_table(rho, ek[k]));
    cek = taylor_axpy(cek, -2.0 * ik, taylor_product(rho, *M[k]));
    out.c(ek[k]) = cek.truncated(n);
  }

  // c_0 = -i kappa div(rho M) - rho kappa^2
  TaylorTable c0 = taylor_scale(div_rhoM, -ik);
  c0 = taylor_axpy(c0, -kappa * kappa, rho);
  out.c({0, 0, 0}) = c0.truncated(n);

  return out;
}

PdeCoefficients load_coefficients(std::istream& in, Point center, int max_order) {
  PdeCoefficients out(center, max_order);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty() || line[0] == '#') continue;
    std::istringstream ls(line);
    int j1, j2, j3, i1, i2, i3;
    double re, im;
    char bar1, bar2;
    if (!(ls >> j1 >> j2 >> j3 >> bar1 >> i1 >> i2 >> i3 >> bar2 >> re >> im) ||
        bar1 != '|' || bar2 != '|')
      throw std::runtime_error("coefficient file: malformed line " + std::to_string(lineno));
    const MultiIndex j{j1, j2, j3}, i{i1, i2, i3};
    if (j.order() > 2)
      throw std::runtime_error("coefficient file: |j| > 2 on line " + std::to_string(lineno));
    if (i.order() > max_order)
      throw std::runtime_error("coefficient file: |i| beyond table order on line " +
                               std::to_string(lineno));
    out.c(j)[i] = Complex{re, im};
  }
  return out;
}

}  // namespace qtb
