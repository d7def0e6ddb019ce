#pragma once

#include "qtbasis/operator_core.hpp"

namespace qtb {

// Airy function of the first kind and its derivative, dependency-free:
//   t in [-8, 8]:  long-double Maclaurin series (absolute error <~ 1e-13);
//   t > 8:         non-oscillatory asymptotic expansion;
//   t in [-15.5, -8): Taylor recentering march seeded by the series at -8,
//                  step 1/2, driven by the ODE recurrence (stable: both
//                  fundamental solutions are bounded going left).
// Arguments below -15.5 throw (the test-case domains stay within |t| < 4).
double airy_ai(double t);
void airy_ai_pair(double t, double& ai, double& aip);

// (Ai, Ai', ..., Ai^{(m)})(t) via the ODE recurrence
// Ai^{(m+2)} = t Ai^{(m)} + m Ai^{(m-1)}.
std::vector<double> airy_derivs(double t, int m);

enum class CaseId { TC1, TC2, TC3 };

// The three reference problems:
//   TC1: lap u + k^2 u = 0,           u = exp(i k y),               k=3
//   TC2: lap u + k^2 (1-x) u = 0,     u = Ai(k^{2/3} x) exp(i k (y+z)/sqrt 2), k=2
//   TC3: convected Helmholtz, flow M0 along z, potential k^2 (1-z):
//        u = Ai((k^2/(1-M0^2))^{1/3} z)
//            exp(i k (-M0 z/(1-M0^2) + (x+y)/sqrt(2-2 M0^2))),       k=2, M0=0.2
struct TestCase {
  CaseId id = CaseId::TC1;
  double kappa = 3.0;
  double M0 = 0.0;
  Point box_lo{0, 0, 0};
  Point box_hi{0, 0, 0};
};

TestCase make_test_case(CaseId id);

// The PDE operator the case's solution satisfies, expanded about x_C.
PdeCoefficients case_operator(const TestCase& tc, Point x_C, int max_order);

Complex solution_value(const TestCase& tc, const Point& x);
CVec3 solution_gradient(const TestCase& tc, const Point& x);

// Taylor table of the exact solution at x_C. Separable products of 1D tables;
// TC3's z-direction is the Leibniz convolution of the Airy and exponential
// factors.
TaylorTable solution_taylor(const TestCase& tc, Point x_C, int order);

}  // namespace qtb
