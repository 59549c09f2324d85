#pragma once

#include "evd/numeric.hpp"

#include <cstdint>
#include <string>

namespace evd {

/// One instance of the distinct-evaluation problem: length n, dimension k,
/// polynomial degree m and family size ratio lambda in (0, 1].
class ProblemParams {
 public:
  ProblemParams(std::int64_t n, std::int64_t k, std::int64_t m, Rational lambda);

  std::int64_t n() const noexcept { return n_; }
  std::int64_t k() const noexcept { return k_; }
  std::int64_t m() const noexcept { return m_; }
  const Rational& lambda() const noexcept { return lambda_; }

  /// floor(lambda * n): the largest subset size in the family.
  std::int64_t size_cap() const noexcept { return cap_; }

  /// True when no subset of size >= m fits under the cap.
  bool degenerate() const noexcept { return cap_ < m_; }

  std::string describe() const;

  friend bool operator==(const ProblemParams&, const ProblemParams&) = default;

 private:
  std::int64_t n_;
  std::int64_t k_;
  std::int64_t m_;
  Rational lambda_;
  std::int64_t cap_;
};

/// floor(lambda * n) for a rational lambda; shared by family_size and the params type.
std::int64_t size_cap(std::int64_t n, const Rational& lambda);

}  // namespace evd
