#pragma once

#include <array>
#include <complex>
#include <vector>

#include "qtbasis/multi_index.hpp"

namespace qtb {

using Complex = std::complex<double>;
using Point = std::array<double, 3>;

// Truncated Taylor expansion of a smooth function f about `center`:
//   entry(i) = d^i f(center) / i!   for all |i| <= order.
// Stored densely, indexed by numbering(i), so lookups never fail in range.
class TaylorTable {
 public:
  TaylorTable() = default;
  TaylorTable(Point center, int order)
      : center_(center), order_(order), c_(index_count(order), Complex{0.0, 0.0}) {}

  const Point& center() const { return center_; }
  int order() const { return order_; }

  Complex& operator[](MultiIndex i) { return c_[numbering(i)]; }
  const Complex& operator[](MultiIndex i) const { return c_[numbering(i)]; }

  Complex& at_rank(std::size_t r) { return c_[r]; }
  const Complex& at_rank(std::size_t r) const { return c_[r]; }

  // Largest |entry|.
  double max_abs() const;

  // Copy truncated/extended (new entries zero) to the given order.
  TaylorTable truncated(int order) const;

 private:
  Point center_{0, 0, 0};
  int order_ = 0;
  std::vector<Complex> c_;
};

// Table of the constant function c.
TaylorTable constant_table(Point center, int order, Complex c);

// Table of the centered monomial (X - center)^i (a single 1 at i, if in range).
TaylorTable monomial_table(Point center, int order, MultiIndex i);

// Truncated product rule  T_{fg}[beta] = sum_{gamma <= beta} T_f[beta-gamma] T_g[gamma].
// Result order = min of the operand orders; centers must agree.
TaylorTable taylor_product(const TaylorTable& a, const TaylorTable& b);

// Derivative shift  T_{d^alpha f}[beta] = ((alpha+beta)!/beta!) T_f[alpha+beta].
// Result order = f.order - |alpha|.
TaylorTable derivative_table(const TaylorTable& f, MultiIndex alpha);

// a + s*b (same center; result order = min of the orders).
TaylorTable taylor_axpy(const TaylorTable& a, Complex s, const TaylorTable& b);

// In-place scale.
TaylorTable taylor_scale(const TaylorTable& a, Complex s);

}  // namespace qtb
