#include "qtbasis/construction.hpp"

#include <cassert>
#include <cmath>
#include <cstdio>
#include <stdexcept>

namespace qtb {

namespace {

// Position of i within layer(|i|) in prec order (i1 ascending, then i2).
inline std::size_t layer_pos(int ell, MultiIndex i) {
  return static_cast<std::size_t>(i[0]) * (2 * ell + 3 - i[0]) / 2 + i[1];
}

const MultiIndex kZero{0, 0, 0};
const std::array<MultiIndex, 3> kE{e1, e2, e3};

// Iterate gamma <= beta componentwise.
template <typename F>
void for_each_leq(MultiIndex beta, F&& f) {
  for (int g1 = 0; g1 <= beta[0]; ++g1)
    for (int g2 = 0; g2 <= beta[1]; ++g2)
      for (int g3 = 0; g3 <= beta[2]; ++g3) f(MultiIndex{g1, g2, g3});
}

void require_construct_inputs(const PdeCoefficients& coeffs, int q) {
  if (q < 1) throw std::invalid_argument("construction requires q >= 1");
  if (coeffs.max_order() < q + 1)
    throw std::invalid_argument("construction requires coefficient tables of order >= q+1");
}

// Writes the solved layer ell+2 into the dense coefficient array.
void store_layer(std::vector<Complex>& poly, int ell, const std::vector<Complex>& xi) {
  std::size_t pos = 0;
  for (const MultiIndex& i : layer(ell + 2)) poly[numbering(i)] = xi[pos++];
}

}  // namespace

DirectionSet generate_directions(int n) {
  if (n < 1) throw std::invalid_argument("generate_directions requires n >= 1");
  DirectionSet ds;
  ds.n = n;
  ds.entries.reserve(static_cast<std::size_t>(n + 1) * (n + 1));
  for (int l = 0; l <= n; ++l) {
    const double theta = M_PI * (l + 1) / (n + 2);
    for (int m = -l; m <= l; ++m) {
      double phi = std::fmod(2.0 * M_PI * (m + l) / (2 * l + 1), 2.0 * M_PI);
      if (phi < 0.0) phi += 2.0 * M_PI;
      DirectionSet::Entry e;
      e.l = l;
      e.m = m;
      e.theta = theta;
      e.phi = phi;
      e.d = {std::sin(theta) * std::cos(phi), std::sin(theta) * std::sin(phi),
             std::cos(theta)};
      ds.entries.push_back(e);
    }
  }
  return ds;
}

std::vector<Complex> solve_subsystem(const PdeCoefficients& coeffs, int ell,
                                     const std::vector<Complex>& B,
                                     const std::vector<Complex>& fixed) {
  if (B.size() != layer_size(ell) || fixed.size() != layer_size(ell + 2))
    throw std::invalid_argument("solve_subsystem: layer size mismatch");

  const Complex c2_1 = coeffs.at({2, 0, 0}, kZero);
  const Complex c2_2 = coeffs.at({0, 2, 0}, kZero);
  const Complex c2_3 = coeffs.at({0, 0, 2}, kZero);
  const Complex c12 = coeffs.at({1, 1, 0}, kZero);
  const Complex c13 = coeffs.at({1, 0, 1}, kZero);
  const Complex c23 = coeffs.at({0, 1, 1}, kZero);
  if (c2_1 == Complex{0.0, 0.0})
    throw HypothesisViolation("solve_subsystem: zero pivot coefficient c_{2e1}(x_C)");

  std::vector<Complex> xi = fixed;
#ifndef NDEBUG
  std::vector<char> touched(xi.size(), 0);
#endif
  const int L2 = ell + 2;
  for (int b1 = 0; b1 <= ell; ++b1) {
    for (int b2 = 0; b2 <= ell - b1; ++b2) {
      const int b3 = ell - b1 - b2;
      const MultiIndex beta{b1, b2, b3};
      Complex rhs = B[layer_pos(ell, beta)];
      rhs -= double((b2 + 2) * (b2 + 1)) * c2_2 * xi[layer_pos(L2, beta + e2 + e2)];
      rhs -= double((b3 + 2) * (b3 + 1)) * c2_3 * xi[layer_pos(L2, beta + e3 + e3)];
      rhs -= double((b1 + 1) * (b2 + 1)) * c12 * xi[layer_pos(L2, beta + e1 + e2)];
      rhs -= double((b1 + 1) * (b3 + 1)) * c13 * xi[layer_pos(L2, beta + e1 + e3)];
      rhs -= double((b2 + 1) * (b3 + 1)) * c23 * xi[layer_pos(L2, beta + e2 + e3)];
      const std::size_t pivot = layer_pos(L2, beta + e1 + e1);
#ifndef NDEBUG
      assert(!touched[pivot] && "each pivot unknown is written exactly once");
      touched[pivot] = 1;
#endif
      xi[pivot] = rhs / (double((b1 + 2) * (b1 + 1)) * c2_1);
    }
  }
#ifndef NDEBUG
  for (const MultiIndex& i : layer(L2))
    assert((i[0] >= 2) == bool(touched[layer_pos(L2, i)]));
#endif
  return xi;
}

namespace {

// Right-hand side B over {|beta| = ell} for the amplitude recurrence. The
// layer-(ell+2) unknowns (the gamma = beta second-order terms) belong to the
// subsystem's left-hand side and are excluded here.
std::vector<Complex> amplitude_rhs(const PdeCoefficients& coeffs,
                                   const std::vector<Complex>& mu, const CVec3& La,
                                   int ell) {
  std::vector<Complex> B(layer_size(ell));
  std::size_t pos = 0;
  for (const MultiIndex& beta : layer(ell)) {
    Complex acc{0.0, 0.0};
    for_each_leq(beta, [&](MultiIndex gamma) {
      const MultiIndex delta = beta - gamma;
      const bool top = gamma == beta;
      for (int k = 0; k < 3; ++k) {
        const Complex c2 = coeffs.at(kE[k] + kE[k], delta);
        if (c2 != Complex{0.0, 0.0}) {
          Complex t = 2.0 * La[k] * double(gamma[k] + 1) * mu[numbering(gamma + kE[k])] +
                      La[k] * La[k] * mu[numbering(gamma)];
          if (!top)
            t += double((gamma[k] + 2) * (gamma[k] + 1)) * mu[numbering(gamma + kE[k] + kE[k])];
          acc += c2 * t;
        }
        for (int l = k + 1; l < 3; ++l) {
          const Complex cx = coeffs.at(kE[k] + kE[l], delta);
          if (cx != Complex{0.0, 0.0}) {
            Complex t = La[k] * double(gamma[l] + 1) * mu[numbering(gamma + kE[l])] +
                        La[l] * double(gamma[k] + 1) * mu[numbering(gamma + kE[k])] +
                        La[k] * La[l] * mu[numbering(gamma)];
            if (!top)
              t += double((gamma[k] + 1) * (gamma[l] + 1)) *
                   mu[numbering(gamma + kE[k] + kE[l])];
            acc += cx * t;
          }
        }
        const Complex c1 = coeffs.at(kE[k], delta);
        if (c1 != Complex{0.0, 0.0})
          acc += c1 * (double(gamma[k] + 1) * mu[numbering(gamma + kE[k])] +
                       La[k] * mu[numbering(gamma)]);
      }
      acc += coeffs.at(kZero, delta) * mu[numbering(gamma)];
    });
    B[pos++] = -acc;
  }
  return B;
}

// Right-hand side for the phase recurrence; quadratic terms are the truncated
// convolutions of the first-derivative tables of the phase polynomial.
std::vector<Complex> phase_rhs(const PdeCoefficients& coeffs, const std::vector<Complex>& la,
                               int ell) {
  std::vector<Complex> B(layer_size(ell));
  std::size_t pos = 0;
  for (const MultiIndex& beta : layer(ell)) {
    Complex acc{0.0, 0.0};
    for_each_leq(beta, [&](MultiIndex gamma) {
      const MultiIndex delta = beta - gamma;
      const bool top = gamma == beta;
      for (int k = 0; k < 3; ++k) {
        const Complex c2 = coeffs.at(kE[k] + kE[k], delta);
        if (c2 != Complex{0.0, 0.0}) {
          Complex t{0.0, 0.0};  // table of (d_k P)^2 at gamma
          for_each_leq(gamma, [&](MultiIndex eta) {
            t += double(gamma[k] - eta[k] + 1) * la[numbering(gamma - eta + kE[k])] *
                 double(eta[k] + 1) * la[numbering(eta + kE[k])];
          });
          if (!top)
            t += double((gamma[k] + 2) * (gamma[k] + 1)) * la[numbering(gamma + kE[k] + kE[k])];
          acc += c2 * t;
        }
        for (int l = k + 1; l < 3; ++l) {
          const Complex cx = coeffs.at(kE[k] + kE[l], delta);
          if (cx != Complex{0.0, 0.0}) {
            Complex t{0.0, 0.0};  // table of (d_k P)(d_l P) at gamma
            for_each_leq(gamma, [&](MultiIndex eta) {
              t += double(gamma[l] - eta[l] + 1) * la[numbering(gamma - eta + kE[l])] *
                   double(eta[k] + 1) * la[numbering(eta + kE[k])];
            });
            if (!top)
              t += double((gamma[k] + 1) * (gamma[l] + 1)) *
                   la[numbering(gamma + kE[k] + kE[l])];
            acc += cx * t;
          }
        }
        const Complex c1 = coeffs.at(kE[k], delta);
        if (c1 != Complex{0.0, 0.0})
          acc += c1 * double(gamma[k] + 1) * la[numbering(gamma + kE[k])];
      }
    });
    // c_0 enters the phase operator additively, not through the unknowns.
    acc += coeffs.at(kZero, beta);
    B[pos++] = -acc;
  }
  return B;
}

// Right-hand side for the purely linear polynomial recurrence.
std::vector<Complex> polynomial_rhs(const PdeCoefficients& coeffs,
                                    const std::vector<Complex>& nu, int ell) {
  std::vector<Complex> B(layer_size(ell));
  std::size_t pos = 0;
  for (const MultiIndex& beta : layer(ell)) {
    Complex acc{0.0, 0.0};
    for_each_leq(beta, [&](MultiIndex gamma) {
      const MultiIndex delta = beta - gamma;
      const bool top = gamma == beta;
      for (int k = 0; k < 3; ++k) {
        if (!top) {
          const Complex c2 = coeffs.at(kE[k] + kE[k], delta);
          if (c2 != Complex{0.0, 0.0})
            acc += c2 * double((gamma[k] + 2) * (gamma[k] + 1)) *
                   nu[numbering(gamma + kE[k] + kE[k])];
          for (int l = k + 1; l < 3; ++l) {
            const Complex cx = coeffs.at(kE[k] + kE[l], delta);
            if (cx != Complex{0.0, 0.0})
              acc += cx * double((gamma[k] + 1) * (gamma[l] + 1)) *
                     nu[numbering(gamma + kE[k] + kE[l])];
          }
        }
        const Complex c1 = coeffs.at(kE[k], delta);
        if (c1 != Complex{0.0, 0.0})
          acc += c1 * double(gamma[k] + 1) * nu[numbering(gamma + kE[k])];
      }
      acc += coeffs.at(kZero, delta) * nu[numbering(gamma)];
    });
    B[pos++] = -acc;
  }
  return B;
}

std::vector<Complex> gather_fixed(const std::vector<Complex>& poly, int ell) {
  std::vector<Complex> fixed(layer_size(ell + 2));
  std::size_t pos = 0;
  for (const MultiIndex& i : layer(ell + 2)) fixed[pos++] = poly[numbering(i)];
  return fixed;
}

}  // namespace

BasisFunction construct_amplitude_gpw(const PdeCoefficients& coeffs,
                                      const SecondOrderStructure& structure, int q,
                                      Complex s, const Vec3& d) {
  require_construct_inputs(coeffs, q);
  BasisFunction b;
  b.family = Family::AMPLITUDE;
  b.center = coeffs.center();
  b.q = q;
  b.poly.assign(index_count(q + 1), Complex{0.0, 0.0});
  b.Lambda = structure.seed_direction(s, d);
  b.poly[numbering(kZero)] = 1.0;  // mu_0 = 1; the gradient slots stay 0

  for (int ell = 0; ell <= q - 1; ++ell) {
    const std::vector<Complex> B = amplitude_rhs(coeffs, b.poly, b.Lambda, ell);
    store_layer(b.poly, ell, solve_subsystem(coeffs, ell, B, gather_fixed(b.poly, ell)));
  }
  return b;
}

BasisFunction construct_amplitude_gpw(const PdeCoefficients& coeffs, int q, Complex s,
                                      const Vec3& d) {
  return construct_amplitude_gpw(coeffs, check_hypothesis(coeffs), q, s, d);
}

BasisFunction construct_phase_gpw(const PdeCoefficients& coeffs,
                                  const SecondOrderStructure& structure, int q, Complex s,
                                  const Vec3& d) {
  require_construct_inputs(coeffs, q);
  BasisFunction b;
  b.family = Family::PHASE;
  b.center = coeffs.center();
  b.q = q;
  b.poly.assign(index_count(q + 1), Complex{0.0, 0.0});
  const CVec3 seed = structure.seed_direction(s, d);
  for (int k = 0; k < 3; ++k) b.poly[numbering(kE[k])] = seed[k];  // lambda_0 = 0

  for (int ell = 0; ell <= q - 1; ++ell) {
    const std::vector<Complex> B = phase_rhs(coeffs, b.poly, ell);
    store_layer(b.poly, ell, solve_subsystem(coeffs, ell, B, gather_fixed(b.poly, ell)));
  }
  return b;
}

BasisFunction construct_phase_gpw(const PdeCoefficients& coeffs, int q, Complex s,
                                  const Vec3& d) {
  return construct_phase_gpw(coeffs, check_hypothesis(coeffs), q, s, d);
}

BasisFunction construct_polynomial_qt(const PdeCoefficients& coeffs, int q, MultiIndex seed) {
  require_construct_inputs(coeffs, q);
  if (seed[0] > 1 || seed.order() > q + 1)
    throw std::invalid_argument("construct_polynomial_qt: invalid canonical seed");
  check_hypothesis(coeffs);

  BasisFunction b;
  b.family = Family::POLYNOMIAL;
  b.center = coeffs.center();
  b.q = q;
  b.poly.assign(index_count(q + 1), Complex{0.0, 0.0});
  b.poly[numbering(seed)] = 1.0;  // delta seed on the free slots (i1 <= 1)

  for (int ell = 0; ell <= q - 1; ++ell) {
    const std::vector<Complex> B = polynomial_rhs(coeffs, b.poly, ell);
    store_layer(b.poly, ell, solve_subsystem(coeffs, ell, B, gather_fixed(b.poly, ell)));
  }
  return b;
}

double residual_magnitude(const PdeCoefficients& coeffs, const BasisFunction& b, int q) {
  TaylorTable table(b.center, q + 1);
  for (const MultiIndex& i : indices_up_to(std::min(q + 1, b.q + 1)))
    table[i] = b.poly[numbering(i)];

  switch (b.family) {
    case Family::POLYNOMIAL:
      return apply_operator_taylor(coeffs, table, q - 1).max_abs();
    case Family::AMPLITUDE:
      return apply_operator_taylor(conjugate_by_exponential(coeffs, b.Lambda), table, q - 1)
          .max_abs();
    case Family::PHASE: {
      // L^{Ph} P = sum_k c_{2e_k} (d_k^2 P + (d_k P)^2)
      //          + sum_{k<l} c_{e_k e_l} (d_k d_l P + d_k P d_l P)
      //          + sum_k c_{e_k} d_k P + c_0
      TaylorTable acc = coeffs.c(kZero).truncated(q - 1);
      std::array<TaylorTable, 3> dP;
      for (int k = 0; k < 3; ++k) dP[k] = derivative_table(table, kE[k]);
      for (int k = 0; k < 3; ++k) {
        TaylorTable quad = taylor_axpy(derivative_table(table, kE[k] + kE[k]), 1.0,
                                       taylor_product(dP[k], dP[k]));
        acc = taylor_axpy(acc, 1.0, taylor_product(coeffs.c(kE[k] + kE[k]), quad));
        acc = taylor_axpy(acc, 1.0, taylor_product(coeffs.c(kE[k]), dP[k]));
        for (int l = k + 1; l < 3; ++l) {
          TaylorTable cross = taylor_axpy(derivative_table(table, kE[k] + kE[l]), 1.0,
                                          taylor_product(dP[k], dP[l]));
          acc = taylor_axpy(acc, 1.0, taylor_product(coeffs.c(kE[k] + kE[l]), cross));
        }
      }
      return acc.max_abs();
    }
  }
  return 0.0;
}

Complex default_s(const PdeCoefficients& coeffs) {
  const double c0 = std::abs(coeffs.at(kZero, kZero));
  return Complex{0.0, c0 > 1e-300 ? std::sqrt(c0) : 1.0};
}

std::vector<MultiIndex> canonical_seeds(int q) {
  std::vector<MultiIndex> seeds;
  seeds.reserve(static_cast<std::size_t>(q + 2) * (q + 2));
  for (int m = 0; m <= q + 1; ++m)
    for (const MultiIndex& i : layer(m))
      if (i[0] <= 1) seeds.push_back(i);
  return seeds;
}

std::vector<BasisFunction> build_basis(const PdeCoefficients& coeffs, int n, Family family,
                                       std::optional<Complex> s_opt) {
  if (n < 1) throw std::invalid_argument("build_basis requires n >= 1");
  const int q = std::max(n - 1, 1);
  const std::size_t p = static_cast<std::size_t>(n + 1) * (n + 1);
  std::vector<BasisFunction> basis;
  basis.reserve(p);

  if (family == Family::POLYNOMIAL) {
    const std::vector<MultiIndex> seeds = canonical_seeds(q);
    for (std::size_t l = 0; l < p; ++l)
      basis.push_back(construct_polynomial_qt(coeffs, q, seeds[l]));
    return basis;
  }

  const Complex s = s_opt.value_or(default_s(coeffs));
  const SecondOrderStructure structure = check_hypothesis(coeffs);
  const DirectionSet dirs = generate_directions(n);
  for (const DirectionSet::Entry& e : dirs.entries) {
    BasisFunction b = family == Family::AMPLITUDE
                          ? construct_amplitude_gpw(coeffs, structure, q, s, e.d)
                          : construct_phase_gpw(coeffs, structure, q, s, e.d);
    b.direction_meta = BasisFunction::DirectionMeta{e.theta, e.phi, s};
    basis.push_back(b);
  }
  return basis;
}

std::string serialize_basis_function(const BasisFunction& b) {
  const char* name = b.family == Family::AMPLITUDE  ? "AMPLITUDE"
                     : b.family == Family::PHASE    ? "PHASE"
                                                    : "POLYNOMIAL";
  char buf[128];
  std::string out = name;
  std::snprintf(buf, sizeof(buf), " %d", b.q);
  out += buf;
  for (int m = 0; m <= b.q + 1; ++m)
    for (const MultiIndex& i : layer(m)) {
      const Complex z = b.poly[numbering(i)];
      if (z == Complex{0.0, 0.0}) continue;
      std::snprintf(buf, sizeof(buf), " | %d %d %d %.17g %.17g", i[0], i[1], i[2], z.real(),
                    z.imag());
      out += buf;
    }
  out += '\n';
  if (b.family == Family::AMPLITUDE) {
    out += "LAMBDA";
    for (const Complex& z : b.Lambda) {
      std::snprintf(buf, sizeof(buf), " %.17g %.17g", z.real(), z.imag());
      out += buf;
    }
    out += '\n';
  }
  return out;
}

}  // namespace qtb
