#include "evd/rng.hpp"

#include "evd/error.hpp"

namespace evd {

std::uint64_t CounterRng::below(std::uint64_t bound) noexcept {
  // Reject the top partial block so every residue is equally likely.
  const std::uint64_t limit = bound * ((~std::uint64_t{0}) / bound);
  for (;;) {
    const std::uint64_t x = next();
    if (x < limit) return x % bound;
  }
}

Integer CounterRng::between(const Integer& lo, const Integer& hi) {
  if (hi < lo) throw Error(ErrorKind::InvalidArgument, "empty sampling range");
  const Integer span = hi - lo + 1;
  if (span <= Integer(std::numeric_limits<std::uint64_t>::max())) {
    return lo + Integer(below(span.convert_to<std::uint64_t>()));
  }
  const std::size_t bits = boost::multiprecision::msb(span - 1) + 1;
  const std::size_t words = (bits + 63) / 64;
  const std::size_t spare = words * 64 - bits;
  for (;;) {
    Integer x = 0;
    for (std::size_t w = 0; w < words; ++w) {
      x <<= 64;
      x += next();
    }
    x >>= spare;
    if (x < span) return lo + x;
  }
}

}  // namespace evd
