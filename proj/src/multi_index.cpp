#include "qtbasis/multi_index.hpp"

namespace qtb {

Cmp compare_prec(MultiIndex a, MultiIndex b) {
  if (a.order() != b.order()) return a.order() < b.order() ? Cmp::LT : Cmp::GT;
  if (a[0] != b[0]) return a[0] < b[0] ? Cmp::LT : Cmp::GT;
  if (a[1] != b[1]) return a[1] < b[1] ? Cmp::LT : Cmp::GT;
  return Cmp::EQ;
}

std::size_t numbering(MultiIndex i) {
  const int m = i.order();
  const std::size_t layer_start = static_cast<std::size_t>(m) * (m + 1) * (m + 2) / 6;
  const int s = i[1] + i[2];
  return layer_start + static_cast<std::size_t>(s) * (s + 1) / 2 + i[2];
}

std::vector<MultiIndex> layer(int ell) {
  std::vector<MultiIndex> out;
  out.reserve(layer_size(ell));
  // i1 ascending then i2 ascending is exactly the prec order within a layer.
  for (int i1 = 0; i1 <= ell; ++i1)
    for (int i2 = 0; i2 <= ell - i1; ++i2) out.push_back({i1, i2, ell - i1 - i2});
  return out;
}

std::vector<MultiIndex> indices_up_to(int n) {
  std::vector<MultiIndex> out(index_count(n));
  for (int m = 0; m <= n; ++m)
    for (const MultiIndex& i : layer(m)) out[numbering(i)] = i;
  return out;
}

double factorial(MultiIndex i) {
  auto f = [](int k) {
    double r = 1.0;
    for (int j = 2; j <= k; ++j) r *= j;
    return r;
  };
  return f(i[0]) * f(i[1]) * f(i[2]);
}

}  // namespace qtb
