#pragma once

#include <boost/multiprecision/cpp_bin_float.hpp>
#include <boost/multiprecision/gmp.hpp>

#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>

namespace evd {

using Integer = boost::multiprecision::mpz_int;
using Rational = boost::multiprecision::mpq_rational;
/// 100 significant decimal digits; every transcendental output is quoted from this.
using Real = boost::multiprecision::cpp_bin_float_100;

Integer binomial(std::int64_t n, std::int64_t k);
Integer factorial(std::int64_t n);
Integer pow2(std::uint64_t e);
Rational rational_pow(const Rational& base, std::uint64_t e);

Integer floor(const Rational& q);
Integer ceil(const Rational& q);
/// floor of a finite Real; DomainError for non-finite input.
Integer floor(const Real& x);

/// Accepts "p/q", a signed integer, or a finite decimal like "0.3"; the result is exact.
Rational parse_rational(std::string_view text);
/// Non-negative decimal integer; rejects signs, fractions and empty input.
Integer parse_integer(std::string_view text);

/// "p/q", or just "p" when the denominator is 1.
std::string to_string(const Rational& q);
std::string to_string(const Integer& z);
/// Scientific-free fixed notation when reasonable, otherwise scientific; `digits` significant digits.
std::string to_string(const Real& x, int digits = 50);

inline Real to_real(const Integer& z) { return Real(z); }
inline Real to_real(const Rational& q) { return Real(q); }

/// log2 of a positive Integer without overflowing through a double.
Real log2(const Integer& z);
Real log2(const Real& x);

/// Stable hash over the limbs and sign of z.
std::uint64_t hash_value(const Integer& z) noexcept;
std::uint64_t hash_value(const Rational& q) noexcept;
/// Byte length of the magnitude; used for memory estimates.
std::size_t byte_size(const Integer& z) noexcept;

inline std::uint64_t hash_combine(std::uint64_t seed, std::uint64_t v) noexcept {
  seed ^= v + 0x9e3779b97f4a7c15ULL + (seed << 12) + (seed >> 4);
  return seed;
}

}  // namespace evd
