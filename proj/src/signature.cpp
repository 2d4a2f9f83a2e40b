#include "cliffsolve/signature.hpp"

#include "cliffsolve/error.hpp"

namespace cliffsolve {

Signature make_signature(int r, int s) {
  if (r < 0 || s < 0) throw Error("signature: r and s must be nonnegative");
  const int n = r + s;
  if (n < 1 || n > kMaxDimension)
    throw Error("signature: need 1 <= r+s <= " + std::to_string(kMaxDimension) +
                ", got " + std::to_string(n));
  return Signature{r, s};
}

BladeProduct blade_product(BladeMask a, BladeMask b, const Signature& sig) {
  // Transpositions = #{(i,j) : i in A, j in B, i > j}; shifting A down by k
  // and intersecting with B counts the pairs at distance k.
  int swaps = 0;
  for (BladeMask t = a >> 1; t != 0; t >>= 1) swaps += std::popcount(t & b);
  int sign = (swaps & 1) ? -1 : +1;
  for (BladeMask common = a & b; common != 0; common &= common - 1) {
    sign *= sig.metric(std::countr_zero(common) + 1);
  }
  return {sign, a ^ b};
}

std::string blade_name(BladeMask m) {
  if (m == 0) return "e";
  bool compact = (m >> 9) == 0;  // all indices single-digit
  std::string out = "e^";
  if (!compact) out += '{';
  bool first = true;
  for (BladeMask t = m; t != 0; t &= t - 1) {
    int idx = std::countr_zero(t) + 1;
    if (!first && !compact) out += ',';
    out += std::to_string(idx);
    first = false;
  }
  if (!compact) out += '}';
  return out;
}

}  // namespace cliffsolve
