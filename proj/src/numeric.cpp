#include "evd/numeric.hpp"

#include "evd/error.hpp"

#include <gmp.h>

#include <cctype>
#include <sstream>

namespace evd {

Integer binomial(std::int64_t n, std::int64_t k) {
  if (n < 0 || k < 0 || k > n) return Integer(0);
  Integer out;
  mpz_bin_uiui(out.backend().data(), static_cast<unsigned long>(n), static_cast<unsigned long>(k));
  return out;
}

Integer factorial(std::int64_t n) {
  if (n < 0) throw Error(ErrorKind::DomainError, "factorial of a negative number");
  Integer out;
  mpz_fac_ui(out.backend().data(), static_cast<unsigned long>(n));
  return out;
}

Integer pow2(std::uint64_t e) {
  Integer out;
  mpz_setbit(out.backend().data(), static_cast<mp_bitcnt_t>(e));
  return out;
}

Rational rational_pow(const Rational& base, std::uint64_t e) {
  Integer num = boost::multiprecision::pow(boost::multiprecision::numerator(base), static_cast<unsigned>(e));
  Integer den = boost::multiprecision::pow(boost::multiprecision::denominator(base), static_cast<unsigned>(e));
  return Rational(num, den);
}

Integer floor(const Rational& q) {
  Integer out;
  mpz_fdiv_q(out.backend().data(), mpq_numref(q.backend().data()), mpq_denref(q.backend().data()));
  return out;
}

Integer ceil(const Rational& q) {
  Integer out;
  mpz_cdiv_q(out.backend().data(), mpq_numref(q.backend().data()), mpq_denref(q.backend().data()));
  return out;
}

Integer floor(const Real& x) {
  if (!boost::multiprecision::isfinite(x)) throw Error(ErrorKind::DomainError, "floor of a non-finite value");
  return static_cast<Integer>(boost::multiprecision::floor(x));
}

namespace {

bool all_digits(std::string_view s) {
  if (s.empty()) return false;
  for (char c : s)
    if (!std::isdigit(static_cast<unsigned char>(c))) return false;
  return true;
}

Integer digits_to_integer(std::string_view s) {
  return Integer(std::string(s));
}

}  // namespace

Integer parse_integer(std::string_view text) {
  if (!all_digits(text)) throw Error(ErrorKind::ParseError, "not a non-negative integer: '" + std::string(text) + "'");
  return digits_to_integer(text);
}

Rational parse_rational(std::string_view text) {
  std::string_view body = text;
  bool negative = false;
  if (!body.empty() && (body.front() == '-' || body.front() == '+')) {
    negative = body.front() == '-';
    body.remove_prefix(1);
  }
  Rational out;
  if (auto slash = body.find('/'); slash != std::string_view::npos) {
    auto p = body.substr(0, slash);
    auto q = body.substr(slash + 1);
    if (!all_digits(p) || !all_digits(q)) throw Error(ErrorKind::ParseError, "bad rational '" + std::string(text) + "'");
    Integer den = digits_to_integer(q);
    if (den == 0) throw Error(ErrorKind::ParseError, "zero denominator in '" + std::string(text) + "'");
    out = Rational(digits_to_integer(p), den);
  } else if (auto dot = body.find('.'); dot != std::string_view::npos) {
    auto whole = body.substr(0, dot);
    auto frac = body.substr(dot + 1);
    if ((!whole.empty() && !all_digits(whole)) || !all_digits(frac))
      throw Error(ErrorKind::ParseError, "bad decimal '" + std::string(text) + "'");
    Integer w = whole.empty() ? Integer(0) : digits_to_integer(whole);
    Integer scale = boost::multiprecision::pow(Integer(10), static_cast<unsigned>(frac.size()));
    out = Rational(w * scale + digits_to_integer(frac), scale);
  } else {
    if (!all_digits(body)) throw Error(ErrorKind::ParseError, "bad rational '" + std::string(text) + "'");
    out = Rational(digits_to_integer(body));
  }
  return negative ? Rational(-out) : out;
}

std::string to_string(const Rational& q) {
  if (boost::multiprecision::denominator(q) == 1) return boost::multiprecision::numerator(q).str();
  return q.str();
}

std::string to_string(const Integer& z) { return z.str(); }

std::string to_string(const Real& x, int digits) {
  std::ostringstream os;
  os.precision(digits);
  os << x;
  return os.str();
}

Real log2(const Integer& z) {
  if (z <= 0) throw Error(ErrorKind::DomainError, "log2 of a non-positive integer");
  // Shift the integer into range so the conversion keeps full precision.
  std::size_t bits = mpz_sizeinbase(z.backend().data(), 2);
  if (bits <= 300) return log2(Real(z));
  std::size_t shift = bits - 300;
  Integer top = z >> shift;
  return log2(Real(top)) + Real(shift);
}

Real log2(const Real& x) {
  static const Real ln2 = boost::multiprecision::log(Real(2));
  return boost::multiprecision::log(x) / ln2;
}

std::uint64_t hash_value(const Integer& z) noexcept {
  const __mpz_struct* raw = z.backend().data();
  std::uint64_t h = static_cast<std::uint64_t>(raw->_mp_size);
  const std::size_t limbs = mpz_size(raw);
  for (std::size_t i = 0; i < limbs; ++i) h = hash_combine(h, static_cast<std::uint64_t>(mpz_getlimbn(raw, static_cast<mp_size_t>(i))));
  return h;
}

std::uint64_t hash_value(const Rational& q) noexcept {
  return hash_combine(hash_value(boost::multiprecision::numerator(q)), hash_value(boost::multiprecision::denominator(q)));
}

std::size_t byte_size(const Integer& z) noexcept {
  return mpz_size(z.backend().data()) * sizeof(mp_limb_t);
}

}  // namespace evd
