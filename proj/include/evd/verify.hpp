#pragma once

#include "evd/sequence.hpp"
#include "evd/subset.hpp"

#include <cstddef>
#include <cstdint>
#include <optional>
#include <utility>

namespace evd {

enum class VerifyMode {
  IntegerExact,  ///< evaluations must differ
  RealSpacing,   ///< evaluations must be at max-coordinate distance >= 1
};

enum class VerifyStatus { Pass, Fail };

struct VerificationResult {
  VerifyStatus status = VerifyStatus::Pass;
  /// (A1, A2) with A1 ranked before A2 in size-then-lex order; present iff Fail.
  std::optional<std::pair<SubsetRef, SubsetRef>> witness;
  std::uint64_t subsets_examined = 0;

  bool passed() const noexcept { return status == VerifyStatus::Pass; }
};

struct VerifyOptions {
  unsigned threads = 1;
  /// Bytes the single-pass hash table may use before MemoryBudgetExceeded.
  std::size_t memory_budget = std::size_t{1} << 30;
  /// Digest/sort mode: 16 bytes per subset, exact values recomputed only for digest ties.
  bool two_pass = false;
};

/// Checks that every pair of distinct family members of size >= m has distinct
/// evaluations. The witness is canonical: A2 is the earliest subset whose value
/// was already taken and A1 the earliest subset holding that value, so results
/// do not depend on the thread count or the pass mode.
///
/// Integer sequences have integral evaluations, so both modes coincide there.
VerificationResult verify_distinct(const Sequence& seq, VerifyMode mode = VerifyMode::IntegerExact,
                                   const VerifyOptions& options = {});
/// Rational sequences; RealSpacing has no two-pass variant.
VerificationResult verify_distinct(const RationalSequence& seq, VerifyMode mode, const VerifyOptions& options = {});

}  // namespace evd
