#pragma once

#include "evd/params.hpp"
#include "evd/sequence.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace evd {

enum class ConstructionKind { ExplicitReal, ExplicitInteger, Probabilistic };

std::string_view to_string(ConstructionKind kind) noexcept;
/// "explicit-real", "explicit-integer" or "probabilistic"; ParseError otherwise.
ConstructionKind parse_construction_kind(std::string_view text);

struct ConstructionRecipe {
  ConstructionKind kind = ConstructionKind::Probabilistic;
  Rational epsilon = Rational(1, 2);
  Integer bound = 1;
  std::uint64_t seed = 0;
  std::int64_t max_retries = 100;
  /// Extra elements sampled beyond n; defaults to tau_lambda below 1/2, else 1.
  std::optional<std::int64_t> overshoot;
};

/// a_i = (2+eps)^n - 2^{i-1}, exactly. HypothesisViolated if m < 2.
RationalSequence construct_real(std::int64_t n, std::int64_t m, const Rational& epsilon);

/// a_i = floor((2+eps)^n) - 2^{i-1}, with bound M = a_1.
Sequence construct_integer(std::int64_t n, std::int64_t m, const Rational& epsilon);

struct RepairAttempt {
  std::uint64_t stream = 0;
  std::uint64_t colliding_pairs = 0;  ///< before any removal
  std::vector<std::uint32_t> removed;  ///< 1-based indices into the n' sampled entries, in removal order
  std::vector<std::uint32_t> trimmed;  ///< surplus entries dropped after repair
  bool accepted = false;
};

struct RepairLog {
  std::uint64_t seed = 0;
  Integer bound = 0;
  std::int64_t n = 0;
  std::int64_t sampled = 0;  ///< n' = n + t
  std::int64_t overshoot = 0;
  std::int64_t max_retries = 0;
  std::vector<RepairAttempt> attempts;

  std::size_t removals() const { return attempts.empty() ? 0 : attempts.back().removed.size(); }
  std::string to_json() const;
};

struct ProbabilisticResult {
  Sequence sequence;
  RepairLog log;
};

/// Samples n + t entries uniform on [1, M]^k, then greedily removes the entry
/// that breaks the most colliding pairs until the family (sizes m..floor(lambda n))
/// is collision-free. More than t removals triggers a fresh sample; after
/// max_retries samples RetriesExhausted is thrown. Output is deterministic in
/// the seed and independent of `threads`.
ProbabilisticResult construct_probabilistic(const ProblemParams& params, const ConstructionRecipe& recipe,
                                            unsigned threads = 1);

/// Overshoot used when the recipe does not set one.
std::int64_t default_overshoot(const Rational& lambda);

}  // namespace evd
