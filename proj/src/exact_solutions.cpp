#include "qtbasis/exact_solutions.hpp"

#include <cmath>
#include <stdexcept>

namespace qtb {

namespace {

constexpr long double kAi0 = 0.3550280538878172392600631860041831763980L;   // Ai(0)
constexpr long double kAip0 = -0.2588194037928067984051835601892039634793L;  // Ai'(0)

// Maclaurin series of Ai and Ai' (accurate for |t| <= 8; loses digits to
// cancellation beyond).
void ai_series(long double t, long double& ai, long double& aip) {
  const long double t3 = t * t * t;
  long double f = 1.0L, g = t, gp = 1.0L;
  long double T = 1.0L, U = t, V = 1.0L;
  long double S = t * t / 2.0L, fp = S;
  for (int k = 1; k < 400; ++k) {
    T *= t3 / ((3 * k - 1) * (3 * k));
    U *= t3 / ((3 * k) * (3 * k + 1));
    V *= t3 / ((3 * k - 2) * (3 * k));
    if (k >= 2) S *= t3 * k / (static_cast<long double>(k - 1) * (3 * k - 1) * (3 * k));
    f += T;
    g += U;
    gp += V;
    if (k >= 2) fp += S;
    if (fabsl(T) < 1e-25L * fabsl(f) && fabsl(U) < 1e-25L * (fabsl(g) + 1e-30L)) break;
  }
  ai = kAi0 * f + kAip0 * g;
  aip = kAi0 * fp + kAip0 * gp;
}

// Non-oscillatory asymptotic expansion for t > 8 (truncated at the smallest
// term; relative error ~ e^{-2 zeta}).
void ai_asymptotic(long double t, long double& ai, long double& aip) {
  const long double zeta = 2.0L / 3.0L * t * sqrtl(t);
  const long double pre = expl(-zeta) / (2.0L * sqrtl(M_PIl));
  long double u = 1.0L, v = 1.0L;  // u_k, v_k
  long double su = 1.0L, sv = 1.0L;
  long double zk = 1.0L;
  long double prev = 1.0L;
  for (int k = 1; k < 80; ++k) {
    u *= static_cast<long double>((6 * k - 5)) * (6 * k - 3) * (6 * k - 1) /
         (216.0L * k * (2 * k - 1));
    v = u * (6 * k + 1) / (1.0L - 6.0L * k);
    zk /= -zeta;
    const long double term = u * zk;
    if (fabsl(term) > fabsl(prev)) break;  // divergent tail reached
    su += term;
    sv += v * zk;
    prev = term;
    if (fabsl(term) < 1e-22L) break;
  }
  ai = pre / sqrtl(sqrtl(t)) * su;
  aip = -pre * sqrtl(sqrtl(t)) * sv;
}

// Taylor recentering from (t0, Ai, Ai') to t1 in steps of 1/2, local degree 40.
void ai_march(long double t0, long double t1, long double& ai, long double& aip) {
  constexpr int kDeg = 40;
  long double t = t0;
  while (t != t1) {
    long double step = t1 - t;
    if (step > 0.5L)
      step = 0.5L;
    else if (step < -0.5L)
      step = -0.5L;
    long double d[kDeg + 2];  // Ai^{(m)}(t)
    d[0] = ai;
    d[1] = aip;
    for (int m = 0; m + 2 <= kDeg + 1; ++m)
      d[m + 2] = t * d[m] + (m > 0 ? m * d[m - 1] : 0.0L);
    long double c[kDeg + 2], fact = 1.0L;
    for (int m = 0; m <= kDeg + 1; ++m) {
      if (m > 0) fact *= m;
      c[m] = d[m] / fact;
    }
    long double v = 0.0L, w = 0.0L;
    for (int m = kDeg + 1; m >= 1; --m) {
      v = v * step + c[m];
      w = w * step + c[m] * m;
    }
    v = v * step + c[0];
    ai = v;
    aip = w;
    t += step;
  }
}

void ai_pair_ld(long double t, long double& ai, long double& aip) {
  if (t > 8.0L) {
    ai_asymptotic(t, ai, aip);
  } else if (t >= -8.0L) {
    ai_series(t, ai, aip);
  } else if (t >= -15.5L) {
    ai_series(-8.0L, ai, aip);
    ai_march(-8.0L, t, ai, aip);
  } else {
    throw std::domain_error("airy_ai: argument below supported range (t < -15.5)");
  }
}

struct Table1D {
  std::vector<Complex> c;  // c[j] = (d/dt)^j F(t_C) / j!
};

// 1D table of exp(r t) at t_C.
Table1D exp_table_1d(Complex r, double t_C, int order) {
  Table1D out;
  out.c.resize(order + 1);
  const Complex base = std::exp(r * t_C);
  Complex term = base;
  out.c[0] = term;
  for (int j = 1; j <= order; ++j) {
    term *= r / double(j);
    out.c[j] = term;
  }
  return out;
}

// 1D table of Ai(a t) at t_C.
Table1D airy_table_1d(double a, double t_C, int order) {
  const std::vector<double> derivs = airy_derivs(a * t_C, order);
  Table1D out;
  out.c.resize(order + 1);
  double aj = 1.0, fact = 1.0;
  for (int j = 0; j <= order; ++j) {
    if (j > 0) {
      aj *= a;
      fact *= j;
    }
    out.c[j] = aj * derivs[j] / fact;
  }
  return out;
}

// 1D Leibniz convolution (table of a pointwise product).
Table1D convolve_1d(const Table1D& a, const Table1D& b) {
  const int order = static_cast<int>(a.c.size()) - 1;
  Table1D out;
  out.c.assign(order + 1, Complex{0.0, 0.0});
  for (int j = 0; j <= order; ++j)
    for (int s = 0; s <= j; ++s) out.c[j] += a.c[s] * b.c[j - s];
  return out;
}

TaylorTable separable_table(Point x_C, int order, const Table1D& X, const Table1D& Y,
                            const Table1D& Z) {
  TaylorTable t(x_C, order);
  for (const MultiIndex& i : indices_up_to(order)) t[i] = X.c[i[0]] * Y.c[i[1]] * Z.c[i[2]];
  return t;
}

}  // namespace

double airy_ai(double t) {
  long double ai, aip;
  ai_pair_ld(t, ai, aip);
  return static_cast<double>(ai);
}

void airy_ai_pair(double t, double& ai, double& aip) {
  long double a, ap;
  ai_pair_ld(t, a, ap);
  ai = static_cast<double>(a);
  aip = static_cast<double>(ap);
}

std::vector<double> airy_derivs(double t, int m) {
  if (m < 0) throw std::invalid_argument("airy_derivs: m must be >= 0");
  long double ai, aip;
  ai_pair_ld(t, ai, aip);
  std::vector<long double> d(static_cast<std::size_t>(m) + 2);
  d[0] = ai;
  d[1] = aip;
  for (int j = 0; j + 2 <= m; ++j) d[j + 2] = t * d[j] + (j > 0 ? j * d[j - 1] : 0.0L);
  std::vector<double> out(static_cast<std::size_t>(m) + 1);
  for (int j = 0; j <= m; ++j) out[j] = static_cast<double>(d[j]);
  return out;
}

TestCase make_test_case(CaseId id) {
  TestCase tc;
  tc.id = id;
  switch (id) {
    case CaseId::TC1:
      tc.kappa = 3.0;
      tc.M0 = 0.0;
      tc.box_lo = {-1.0, 0.0, -1.0};
      tc.box_hi = {1.0, 2.0 * M_PI, 1.0};
      break;
    case CaseId::TC2:
      tc.kappa = 2.0;
      tc.M0 = 0.0;
      tc.box_lo = {-2.0, -2.0, -2.0};
      tc.box_hi = {2.0, 2.0, 2.0};
      break;
    case CaseId::TC3:
      tc.kappa = 2.0;
      tc.M0 = 0.2;
      tc.box_lo = {-2.0, -2.0, -2.0};
      tc.box_hi = {2.0, 2.0, 2.0};
      break;
  }
  return tc;
}

PdeCoefficients case_operator(const TestCase& tc, Point x_C, int max_order) {
  switch (tc.id) {
    case CaseId::TC1:
      return builtin_operator(BuiltinCase::HELMHOLTZ_CONST, tc.kappa, 0.0, x_C, max_order);
    case CaseId::TC2:
      return builtin_operator(BuiltinCase::HELMHOLTZ_AIRY, tc.kappa, 0.0, x_C, max_order);
    case CaseId::TC3:
      return builtin_operator(BuiltinCase::CONVECTED_AIRY, tc.kappa, tc.M0, x_C, max_order);
  }
  throw std::logic_error("case_operator: unreachable");
}

Complex solution_value(const TestCase& tc, const Point& x) {
  const Complex I{0.0, 1.0};
  switch (tc.id) {
    case CaseId::TC1:
      return std::exp(I * tc.kappa * x[1]);
    case CaseId::TC2: {
      const double a = std::cbrt(tc.kappa * tc.kappa);
      return airy_ai(a * x[0]) * std::exp(I * tc.kappa * (x[1] + x[2]) / std::sqrt(2.0));
    }
    case CaseId::TC3: {
      const double b = 1.0 - tc.M0 * tc.M0;
      const double a = std::cbrt(tc.kappa * tc.kappa / b);
      const Complex rz = -I * tc.kappa * tc.M0 / b;
      const Complex rxy = I * tc.kappa / std::sqrt(2.0 * b);
      return airy_ai(a * x[2]) * std::exp(rz * x[2] + rxy * (x[0] + x[1]));
    }
  }
  throw std::logic_error("solution_value: unreachable");
}

CVec3 solution_gradient(const TestCase& tc, const Point& x) {
  const Complex I{0.0, 1.0};
  switch (tc.id) {
    case CaseId::TC1: {
      const Complex u = std::exp(I * tc.kappa * x[1]);
      return {Complex{0.0, 0.0}, I * tc.kappa * u, Complex{0.0, 0.0}};
    }
    case CaseId::TC2: {
      const double a = std::cbrt(tc.kappa * tc.kappa);
      double ai, aip;
      airy_ai_pair(a * x[0], ai, aip);
      const Complex r = I * tc.kappa / std::sqrt(2.0);
      const Complex E = std::exp(r * (x[1] + x[2]));
      return {a * aip * E, r * ai * E, r * ai * E};
    }
    case CaseId::TC3: {
      const double b = 1.0 - tc.M0 * tc.M0;
      const double a = std::cbrt(tc.kappa * tc.kappa / b);
      const Complex rz = -I * tc.kappa * tc.M0 / b;
      const Complex rxy = I * tc.kappa / std::sqrt(2.0 * b);
      double ai, aip;
      airy_ai_pair(a * x[2], ai, aip);
      const Complex E = std::exp(rz * x[2] + rxy * (x[0] + x[1]));
      return {rxy * ai * E, rxy * ai * E, (a * aip + rz * ai) * E};
    }
  }
  throw std::logic_error("solution_gradient: unreachable");
}

TaylorTable solution_taylor(const TestCase& tc, Point x_C, int order) {
  const Complex I{0.0, 1.0};
  switch (tc.id) {
    case CaseId::TC1: {
      Table1D one;
      one.c.assign(order + 1, Complex{0.0, 0.0});
      one.c[0] = 1.0;
      return separable_table(x_C, order, one, exp_table_1d(I * tc.kappa, x_C[1], order),
                             one);
    }
    case CaseId::TC2: {
      const double a = std::cbrt(tc.kappa * tc.kappa);
      const Complex r = I * tc.kappa / std::sqrt(2.0);
      return separable_table(x_C, order, airy_table_1d(a, x_C[0], order),
                             exp_table_1d(r, x_C[1], order), exp_table_1d(r, x_C[2], order));
    }
    case CaseId::TC3: {
      const double b = 1.0 - tc.M0 * tc.M0;
      const double a = std::cbrt(tc.kappa * tc.kappa / b);
      const Complex rz = -I * tc.kappa * tc.M0 / b;
      const Complex rxy = I * tc.kappa / std::sqrt(2.0 * b);
      const Table1D Z =
          convolve_1d(airy_table_1d(a, x_C[2], order), exp_table_1d(rz, x_C[2], order));
      return separable_table(x_C, order, exp_table_1d(rxy, x_C[0], order),
                             exp_table_1d(rxy, x_C[1], order), Z);
    }
  }
  throw std::logic_error("solution_taylor: unreachable");
}

}  // namespace qtb
