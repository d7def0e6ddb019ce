#pragma once

#include <array>
#include <compare>
#include <cstdint>
#include <vector>

namespace qtb {

// A 3D multi-index i = (i1,i2,i3) of partial-derivative / monomial exponents.
// Components are capped at 255; every order used here stays below ~12.
struct MultiIndex {
  std::array<std::uint8_t, 3> v{0, 0, 0};

  constexpr MultiIndex() = default;
  constexpr MultiIndex(int a, int b, int c)
      : v{static_cast<std::uint8_t>(a), static_cast<std::uint8_t>(b),
          static_cast<std::uint8_t>(c)} {}

  constexpr int operator[](int k) const { return v[static_cast<unsigned>(k)]; }

  constexpr int order() const { return v[0] + v[1] + v[2]; }

  friend constexpr bool operator==(MultiIndex a, MultiIndex b) { return a.v == b.v; }

  // Componentwise partial order (gamma <= beta means gamma_k <= beta_k for all k).
  friend constexpr bool leq(MultiIndex a, MultiIndex b) {
    return a.v[0] <= b.v[0] && a.v[1] <= b.v[1] && a.v[2] <= b.v[2];
  }

  friend constexpr MultiIndex operator+(MultiIndex a, MultiIndex b) {
    return {a[0] + b[0], a[1] + b[1], a[2] + b[2]};
  }
  // Caller must guarantee b <= a componentwise.
  friend constexpr MultiIndex operator-(MultiIndex a, MultiIndex b) {
    return {a[0] - b[0], a[1] - b[1], a[2] - b[2]};
  }
};

inline constexpr MultiIndex e1{1, 0, 0}, e2{0, 1, 0}, e3{0, 0, 1};

enum class Cmp { LT, EQ, GT };

// The strict total order "prec": first by |i|, then i1, then i2.
Cmp compare_prec(MultiIndex a, MultiIndex b);
inline bool prec(MultiIndex a, MultiIndex b) { return compare_prec(a, b) == Cmp::LT; }

// Zero-based global numbering: layers come in order of |i|, and inside layer m
// the closed-form position (i2+i3)(i2+i3+1)/2 + i3. Used directly as a matrix
// row index. Note this within-layer order is *not* the prec order; both are fixed.
std::size_t numbering(MultiIndex i);

// Number of multi-indices with |i| = m, i.e. (m+1)(m+2)/2.
constexpr std::size_t layer_size(int m) {
  return static_cast<std::size_t>((m + 1) * (m + 2) / 2);
}

// Number of multi-indices with |i| <= n, i.e. (n+1)(n+2)(n+3)/6. This is the
// row count of the Taylor matrices and the size of dense tables of order n.
constexpr std::size_t index_count(int n) {
  return static_cast<std::size_t>((n + 1) * (n + 2) * (n + 3) / 6);
}

// All i with |i| = ell, sorted by prec.
std::vector<MultiIndex> layer(int ell);

// All i with |i| <= n, in numbering order (so indices[numbering(i)] == i).
std::vector<MultiIndex> indices_up_to(int n);

// i! = i1! i2! i3! as a double (exact for the orders used here).
double factorial(MultiIndex i);

}  // namespace qtb
