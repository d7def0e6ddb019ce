#include "qtbasis/operator_core.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>

namespace qtb {

namespace {

double max_abs(const Mat3& A) {
  double m = 0.0;
  for (const auto& row : A)
    for (double v : row) m = std::max(m, std::abs(v));
  return m;
}

double det3(const Mat3& A) {
  return A[0][0] * (A[1][1] * A[2][2] - A[1][2] * A[2][1]) -
         A[0][1] * (A[1][0] * A[2][2] - A[1][2] * A[2][0]) +
         A[0][2] * (A[1][0] * A[2][1] - A[1][1] * A[2][0]);
}

Vec3 mat_vec(const Mat3& A, const Vec3& x) {
  Vec3 y{};
  for (int r = 0; r < 3; ++r) y[r] = A[r][0] * x[0] + A[r][1] * x[1] + A[r][2] * x[2];
  return y;
}

Vec3 cross(const Vec3& a, const Vec3& b) {
  return {a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]};
}

double dot(const Vec3& a, const Vec3& b) { return a[0] * b[0] + a[1] * b[1] + a[2] * b[2]; }

double norm(const Vec3& a) { return std::sqrt(dot(a, a)); }

Vec3 normalized(const Vec3& a) {
  const double n = norm(a);
  return {a[0] / n, a[1] / n, a[2] / n};
}

// Unit vector in the kernel of (A - lambda I), via the largest cross product of
// two rows; falls back to the most orthogonal coordinate axis for a rank-1 gap.
Vec3 kernel_direction(const Mat3& A, double lambda) {
  Mat3 B = A;
  for (int k = 0; k < 3; ++k) B[k][k] -= lambda;
  const Vec3 r0{B[0][0], B[0][1], B[0][2]};
  const Vec3 r1{B[1][0], B[1][1], B[1][2]};
  const Vec3 r2{B[2][0], B[2][1], B[2][2]};
  const std::array<Vec3, 3> cands{cross(r0, r1), cross(r0, r2), cross(r1, r2)};
  int best = 0;
  double best_n = -1.0;
  for (int k = 0; k < 3; ++k)
    if (norm(cands[k]) > best_n) best = k, best_n = norm(cands[k]);
  if (best_n > 1e-12 * std::max(1.0, max_abs(A))) return normalized(cands[best]);
  // (Near-)repeated eigenvalue: any vector orthogonal to the strongest row works.
  const std::array<Vec3, 3> rows{r0, r1, r2};
  int strongest = 0;
  for (int k = 1; k < 3; ++k)
    if (norm(rows[k]) > norm(rows[strongest])) strongest = k;
  if (norm(rows[strongest]) < 1e-300) return {1, 0, 0};
  const Vec3 r = normalized(rows[strongest]);
  Vec3 axis = std::abs(r[0]) < 0.9 ? Vec3{1, 0, 0} : Vec3{0, 1, 0};
  Vec3 v = cross(r, axis);
  return normalized(v);
}

}  // namespace

void symmetric_eig3(const Mat3& A, Mat3& P, Vec3& D) {
  const double scale = std::max(max_abs(A), 1e-300);
  const double off = std::max({std::abs(A[0][1]), std::abs(A[0][2]), std::abs(A[1][2])});

  if (off <= 1e-14 * scale) {
    // Already diagonal: keep the given order so e.g. the identity principal
    // part maps each direction to itself.
    P = {{{1, 0, 0}, {0, 1, 0}, {0, 0, 1}}};
    D = {A[0][0], A[1][1], A[2][2]};
    return;
  }

  // Closed-form eigenvalues of the characteristic cubic (standard trigonometric
  // solution for real symmetric 3x3), then one Newton step each.
  const double q = (A[0][0] + A[1][1] + A[2][2]) / 3.0;
  const double p2 = (A[0][0] - q) * (A[0][0] - q) + (A[1][1] - q) * (A[1][1] - q) +
                    (A[2][2] - q) * (A[2][2] - q) +
                    2.0 * (A[0][1] * A[0][1] + A[0][2] * A[0][2] + A[1][2] * A[1][2]);
  const double p = std::sqrt(p2 / 6.0);
  Mat3 B{};
  for (int r = 0; r < 3; ++r)
    for (int c = 0; c < 3; ++c) B[r][c] = (A[r][c] - (r == c ? q : 0.0)) / p;
  const double rdet = std::clamp(det3(B) / 2.0, -1.0, 1.0);
  const double phi = std::acos(rdet) / 3.0;

  Vec3 lam;
  lam[2] = q + 2.0 * p * std::cos(phi);
  lam[0] = q + 2.0 * p * std::cos(phi + 2.0 * M_PI / 3.0);
  lam[1] = 3.0 * q - lam[0] - lam[2];

  // Newton polish on chi(l) = -l^3 + tr l^2 - m2 l + det.
  const double tr = 3.0 * q;
  const double m2 = A[0][0] * A[1][1] - A[0][1] * A[1][0] + A[0][0] * A[2][2] -
                    A[0][2] * A[2][0] + A[1][1] * A[2][2] - A[1][2] * A[2][1];
  const double dt = det3(A);
  for (double& l : lam) {
    const double chi = -l * l * l + tr * l * l - m2 * l + dt;
    const double dchi = -3.0 * l * l + 2.0 * tr * l - m2;
    if (std::abs(dchi) > 1e-30) l -= chi / dchi;
  }
  std::sort(lam.begin(), lam.end());

  // First eigenvector for the best-separated eigenvalue, then reduce the
  // orthogonal complement to a 2x2 problem; this keeps P orthonormal even for
  // clustered spectra.
  const int iso = (lam[1] - lam[0] > lam[2] - lam[1]) ? 0 : 2;
  const Vec3 u = kernel_direction(A, lam[iso]);
  lam[iso] = dot(u, mat_vec(A, u));  // Rayleigh quotient: quadratically refined
  Vec3 axis = std::abs(u[0]) < 0.9 ? Vec3{1, 0, 0} : Vec3{0, 1, 0};
  const Vec3 w1 = normalized(cross(u, axis));
  const Vec3 w2 = cross(u, w1);

  const Vec3 Aw1 = mat_vec(A, w1), Aw2 = mat_vec(A, w2);
  const double a11 = dot(w1, Aw1), a12 = dot(w1, Aw2), a22 = dot(w2, Aw2);
  // 2x2 symmetric eigenproblem in the {w1,w2} plane.
  const double half_tr = 0.5 * (a11 + a22);
  const double disc = std::sqrt(std::max(0.0, 0.25 * (a11 - a22) * (a11 - a22) + a12 * a12));
  const double l_lo = half_tr - disc, l_hi = half_tr + disc;
  double ct = 1.0, st = 0.0;
  if (std::abs(a12) > 1e-300) {
    const double t = (l_lo - a11) / a12;  // (A2 - l I) (1,t)^T = 0
    const double nn = std::sqrt(1.0 + t * t);
    ct = 1.0 / nn;
    st = t / nn;
  } else if (a11 > a22) {
    ct = 0.0;
    st = 1.0;
  }
  const Vec3 v_lo{ct * w1[0] + st * w2[0], ct * w1[1] + st * w2[1], ct * w1[2] + st * w2[2]};
  const Vec3 v_hi = cross(u, v_lo);

  std::array<std::pair<double, Vec3>, 3> eigs;
  eigs[0] = {lam[iso], u};
  eigs[1] = {l_lo, v_lo};
  eigs[2] = {l_hi, v_hi};
  std::sort(eigs.begin(), eigs.end(),
            [](const auto& a, const auto& b) { return a.first < b.first; });

  for (int c = 0; c < 3; ++c) {
    D[c] = eigs[c].first;
    for (int r = 0; r < 3; ++r) P[r][c] = eigs[c].second[r];
  }
}

CVec3 SecondOrderStructure::seed_direction(Complex s, const Vec3& d) const {
  CVec3 lambda{};
  for (int r = 0; r < 3; ++r) {
    Complex acc{0.0, 0.0};
    for (int c = 0; c < 3; ++c) {
      const Complex inv_sqrt = 1.0 / std::sqrt(Complex{D[c], 0.0});
      acc += P[r][c] * inv_sqrt * d[c];
    }
    lambda[r] = s * acc;
  }
  return lambda;
}

SecondOrderStructure check_hypothesis(const PdeCoefficients& coeffs) {
  const MultiIndex zero{0, 0, 0};
  const std::array<MultiIndex, 3> ek{e1, e2, e3};

  SecondOrderStructure s;
  double imag_max = 0.0;
  for (int k = 0; k < 3; ++k) {
    const Complex diag = coeffs.at(ek[k] + ek[k], zero);
    s.C[k][k] = diag.real();
    imag_max = std::max(imag_max, std::abs(diag.imag()));
    for (int l = k + 1; l < 3; ++l) {
      const Complex off = coeffs.at(ek[k] + ek[l], zero);
      s.C[k][l] = s.C[l][k] = 0.5 * off.real();
      imag_max = std::max(imag_max, std::abs(off.imag()));
    }
  }

  const double scale = std::max(max_abs(s.C), std::abs(coeffs.at({2, 0, 0}, zero)));
  const double tol = 1e-12 * std::max(scale, 1e-300);
  if (imag_max > tol)
    throw HypothesisViolation("principal-part coefficient has a complex value at the center");
  if (std::abs(coeffs.at({2, 0, 0}, zero)) <= tol)
    throw HypothesisViolation("pivot coefficient c_{2e1}(x_C) vanishes");

  s.det = det3(s.C);
  if (std::abs(s.det) <= 1e-12 * scale * scale * scale)
    throw HypothesisViolation("principal-part matrix is singular at the center");

  symmetric_eig3(s.C, s.P, s.D);
  return s;
}

TaylorTable apply_operator_taylor(const PdeCoefficients& coeffs, const TaylorTable& f,
                                  int out_order) {
  if (f.order() < out_order + 2)
    throw std::invalid_argument("apply_operator_taylor: f table order too small");
  if (coeffs.max_order() < out_order)
    throw std::invalid_argument("apply_operator_taylor: coefficient order too small");
  if (!(f.center() == coeffs.center()))
    throw std::invalid_argument("apply_operator_taylor: center mismatch");

  TaylorTable out(f.center(), out_order);
  std::vector<MultiIndex> js;
  for (int m = 0; m <= 2; ++m)
    for (const MultiIndex& j : layer(m)) js.push_back(j);

  for (const MultiIndex& beta : indices_up_to(out_order)) {
    Complex acc{0.0, 0.0};
    for (const MultiIndex& j : js) {
      for (int g1 = 0; g1 <= beta[0]; ++g1)
        for (int g2 = 0; g2 <= beta[1]; ++g2)
          for (int g3 = 0; g3 <= beta[2]; ++g3) {
            const MultiIndex gamma{g1, g2, g3};
            const Complex cj = coeffs.at(j, beta - gamma);
            if (cj == Complex{0.0, 0.0}) continue;
            double w = 1.0;  // (j+gamma)!/gamma!
            for (int k = 0; k < 3; ++k)
              for (int t = 1; t <= j[k]; ++t) w *= gamma[k] + t;
            acc += cj * w * f[gamma + j];
          }
    }
    out[beta] = acc;
  }
  return out;
}

PdeCoefficients conjugate_by_exponential(const PdeCoefficients& coeffs, const CVec3& Lambda) {
  const std::array<MultiIndex, 3> ek{e1, e2, e3};
  PdeCoefficients out = coeffs;

  // First order: c_{e_k} += 2 Lambda_k c_{2e_k} + sum_{l != k} Lambda_l c_{e_k+e_l}
  for (int k = 0; k < 3; ++k) {
    TaylorTable t = out.c(ek[k]);
    t = taylor_axpy(t, 2.0 * Lambda[k], coeffs.c(ek[k] + ek[k]));
    for (int l = 0; l < 3; ++l)
      if (l != k) t = taylor_axpy(t, Lambda[l], coeffs.c(ek[std::min(k, l)] + ek[std::max(k, l)]));
    out.c(ek[k]) = t;
  }

  // Zero order: c_0 += sum_k Lambda_k^2 c_{2e_k} + sum_{k<l} Lambda_k Lambda_l c_{e_k+e_l}
  //                   + sum_k Lambda_k c_{e_k}
  TaylorTable t0 = out.c({0, 0, 0});
  for (int k = 0; k < 3; ++k) {
    t0 = taylor_axpy(t0, Lambda[k] * Lambda[k], coeffs.c(ek[k] + ek[k]));
    t0 = taylor_axpy(t0, Lambda[k], coeffs.c(ek[k]));
    for (int l = k + 1; l < 3; ++l)
      t0 = taylor_axpy(t0, Lambda[k] * Lambda[l], coeffs.c(ek[k] + ek[l]));
  }
  out.c({0, 0, 0}) = t0;

  return out;
}

}  // namespace qtb
