#include "qtbasis/taylor_table.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace qtb {

namespace {
void require_same_center(const TaylorTable& a, const TaylorTable& b) {
  if (a.center() != b.center())
    throw std::invalid_argument("taylor tables have different centers");
}
}  // namespace

double TaylorTable::max_abs() const {
  double m = 0.0;
  for (const Complex& z : c_) m = std::max(m, std::abs(z));
  return m;
}

TaylorTable TaylorTable::truncated(int order) const {
  TaylorTable out(center_, order);
  const std::size_t n = std::min(index_count(order), c_.size());
  for (std::size_t r = 0; r < n; ++r) out.at_rank(r) = c_[r];
  return out;
}

TaylorTable constant_table(Point center, int order, Complex c) {
  TaylorTable t(center, order);
  t[{0, 0, 0}] = c;
  return t;
}

TaylorTable monomial_table(Point center, int order, MultiIndex i) {
  TaylorTable t(center, order);
  if (i.order() <= order) t[i] = Complex{1.0, 0.0};
  return t;
}

TaylorTable taylor_product(const TaylorTable& a, const TaylorTable& b) {
  require_same_center(a, b);
  const int n = std::min(a.order(), b.order());
  TaylorTable out(a.center(), n);
  for (const MultiIndex& beta : indices_up_to(n)) {
    Complex s{0.0, 0.0};
    for (int g1 = 0; g1 <= beta[0]; ++g1)
      for (int g2 = 0; g2 <= beta[1]; ++g2)
        for (int g3 = 0; g3 <= beta[2]; ++g3) {
          const MultiIndex gamma{g1, g2, g3};
          s += a[beta - gamma] * b[gamma];
        }
    out[beta] = s;
  }
  return out;
}

TaylorTable derivative_table(const TaylorTable& f, MultiIndex alpha) {
  const int n = f.order() - alpha.order();
  if (n < 0) throw std::invalid_argument("derivative_table: order deficit");
  TaylorTable out(f.center(), n);
  for (const MultiIndex& beta : indices_up_to(n)) {
    // (alpha+beta)!/beta! = prod_k (beta_k+1)...(beta_k+alpha_k)
    double w = 1.0;
    for (int k = 0; k < 3; ++k)
      for (int j = 1; j <= alpha[k]; ++j) w *= beta[k] + j;
    out[beta] = w * f[alpha + beta];
  }
  return out;
}

TaylorTable taylor_axpy(const TaylorTable& a, Complex s, const TaylorTable& b) {
  require_same_center(a, b);
  const int n = std::min(a.order(), b.order());
  TaylorTable out = a.truncated(n);
  for (std::size_t r = 0; r < index_count(n); ++r) out.at_rank(r) += s * b.at_rank(r);
  return out;
}

TaylorTable taylor_scale(const TaylorTable& a, Complex s) {
  TaylorTable out = a;
  for (std::size_t r = 0; r < index_count(a.order()); ++r) out.at_rank(r) *= s;
  return out;
}

}  // namespace qtb
