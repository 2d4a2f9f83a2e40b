#pragma once

#include <bit>
#include <cstdint>
#include <string>

namespace cliffsolve {

// Metric signature (r,s): eta = diag(+1 x r, -1 x s) on generators e^1..e^n,
// n = r + s. Dense blade storage caps n at 12 (2^12 coefficients).
struct Signature {
  int r = 0;
  int s = 0;

  constexpr int n() const { return r + s; }
  constexpr std::size_t dim() const { return std::size_t{1} << n(); }

  // eta^{aa} for generator index a in 1..n.
  constexpr int metric(int a) const { return a <= r ? +1 : -1; }

  // Hermitian conjugation is defined only for these.
  constexpr bool is_lorentzian() const { return r == 1 && s >= 1; }

  friend constexpr bool operator==(const Signature&, const Signature&) = default;
};

// Validates 0 <= r, 0 <= s, 1 <= r+s <= 12.
Signature make_signature(int r, int s);

constexpr int kMaxDimension = 12;

// A basis blade is a bitmask: bit (a-1) set <=> generator e^a present,
// canonical order ascending in a.
using BladeMask = std::uint32_t;

inline int blade_grade(BladeMask m) { return std::popcount(m); }

struct BladeProduct {
  int sign;  // +1 or -1
  BladeMask mask;
};

// e^A e^B = sign * e^{A xor B}. The sign counts the transpositions needed to
// merge the two ascending index lists, times eta^{aa} for every contracted
// generator.
BladeProduct blade_product(BladeMask a, BladeMask b, const Signature& sig);

// "e", "e^23", or "e^{10,11}" once any index exceeds 9.
std::string blade_name(BladeMask m);

}  // namespace cliffsolve
