#pragma once

#include "evd/params.hpp"
#include "evd/sequence.hpp"
#include "evd/verify.hpp"

#include <chrono>
#include <cstdint>
#include <optional>
#include <string>

namespace evd::search {

struct SearchOptions {
  unsigned threads = 1;
  /// Partial-sequence extensions allowed across one feasible() call; 0 = unlimited.
  std::uint64_t max_nodes = 0;
  /// Wall-clock limit for the whole call; 0 = unlimited.
  double max_seconds = 0;
  /// Reject a prefix as soon as two of its family members collide.
  bool pruning = true;
  /// Also compare against the empty set (value zero). Defaults to m == 1, the
  /// classical distinct-sums setting where every A in the family is compared.
  std::optional<bool> compare_empty_set;
};

/// True when any solution can be rearranged into a strictly increasing one:
/// floor(lambda n) >= m and n >= m + 1, so duplicated entries always collide.
bool strict_order_complete(const ProblemParams& params);

struct FeasibleResult {
  std::optional<Sequence> witness;  ///< lexicographically first canonical witness
  std::uint64_t nodes = 0;
};

/// Depth-first search over canonically ordered sequences with entries in [0, M]^k.
/// Throws BudgetExceeded on node or time overrun.
FeasibleResult feasible(const ProblemParams& params, std::int64_t bound, const SearchOptions& options = {});

enum class Strategy { Linear, Bisect };
Strategy parse_strategy(std::string_view text);

enum class SearchStatus { Found, InfeasibleUpTo, BudgetExceeded };
std::string_view to_string(SearchStatus status) noexcept;

struct SearchOutcome {
  SearchStatus status = SearchStatus::InfeasibleUpTo;
  ProblemParams params;
  std::int64_t max_bound = 0;
  std::optional<std::int64_t> min_bound;   ///< M_min when found
  std::optional<Sequence> witness;
  std::uint64_t nodes = 0;                 ///< summed over every feasible() call
  std::chrono::duration<double> wall_time{0};
  std::string detail;                      ///< budget message when status is BudgetExceeded

  /// Stable JSON record; wall time is included only when asked, so reports can be compared byte for byte.
  std::string to_json(bool include_timing = false) const;
};

/// Least M in [0, max_bound] with a witness; feasibility is monotone in M.
SearchOutcome min_M_search(const ProblemParams& params, std::int64_t max_bound, const SearchOptions& options = {},
                           Strategy strategy = Strategy::Linear);

/// Distinct subset sums via half-set tables merged in sorted order (m = 1, lambda = 1 only).
/// The verdict matches verify_distinct; a failing witness is some colliding pair, ordered
/// size-then-lex, not necessarily the canonical one.
VerificationResult mitm_verify(const Sequence& seq);

}  // namespace evd::search
