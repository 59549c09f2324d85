#pragma once

#include "evd/esp.hpp"
#include "evd/numeric.hpp"
#include "evd/params.hpp"
#include "evd/sequence.hpp"
#include "evd/subset.hpp"

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

namespace evd {

/// sum_{i=minSize}^{floor(lambda n)} C(n, i), exactly.
Integer family_size(std::int64_t n, const Rational& lambda, std::int64_t min_size);

/// All subsets of one size sharing their smallest index. Blocks tile the
/// family in size-then-lex order, so `offset` is the rank of the block's first subset.
struct FamilyBlock {
  std::uint32_t size = 0;
  std::uint32_t first = 0;  // smallest index; 0 for the empty set
  std::uint64_t offset = 0;
  std::uint64_t count = 0;
};

/// Subsets of [1, n] with lo <= |A| <= hi in size-then-lex order, partitioned
/// by (size, smallest index). Throws BudgetExceeded if the family does not fit
/// 64-bit ranks.
class FamilyLayout {
 public:
  FamilyLayout(std::int64_t n, std::int64_t lo, std::int64_t hi);
  /// The family of `params`: sizes m..floor(lambda n).
  explicit FamilyLayout(const ProblemParams& params);

  std::int64_t n() const noexcept { return n_; }
  std::int64_t min_size() const noexcept { return lo_; }
  std::int64_t max_size() const noexcept { return hi_; }
  std::uint64_t total() const noexcept { return total_; }
  std::span<const FamilyBlock> blocks() const noexcept { return blocks_; }

  /// Inverse of the enumeration order.
  SubsetRef unrank(std::uint64_t rank) const;
  std::uint64_t rank(const SubsetRef& subset) const;

 private:
  std::int64_t n_;
  std::int64_t lo_;
  std::int64_t hi_;
  std::uint64_t total_ = 0;
  std::vector<FamilyBlock> blocks_;
};

/// Visits the combinations of one block in lex order. `visit` receives the
/// 1-based indices; returning false stops the walk.
template <class Visit>
void for_each_in_block(std::int64_t n, const FamilyBlock& block, Visit&& visit) {
  const std::size_t s = block.size;
  std::vector<std::uint32_t> c(s);
  if (s == 0) {
    visit(std::span<const std::uint32_t>(c));
    return;
  }
  c[0] = block.first;
  for (std::size_t p = 1; p < s; ++p) c[p] = block.first + static_cast<std::uint32_t>(p);
  const auto top = static_cast<std::uint32_t>(n);
  while (true) {
    if (!visit(std::span<const std::uint32_t>(c))) return;
    // Advance positions 1..s-1; position 0 is the block's fixed prefix.
    std::size_t p = s - 1;
    while (p >= 1 && c[p] == top - static_cast<std::uint32_t>(s - 1 - p)) --p;
    if (p == 0) return;
    ++c[p];
    for (std::size_t q = p + 1; q < s; ++q) c[q] = c[q - 1] + 1;
  }
}

/// Like for_each_in_block but also hands over the ESP state of each subset,
/// maintained incrementally: only the suffix that changed is re-absorbed.
template <class Scalar, class Visit>
void walk_block(const BasicSequence<Scalar>& seq, std::size_t degree, const FamilyBlock& block, Visit&& visit) {
  const auto dim = static_cast<std::size_t>(seq.params().k());
  std::vector<EspState<Scalar>> states(block.size + 1, EspState<Scalar>(dim, degree));
  std::vector<std::uint32_t> previous;
  for_each_in_block(seq.params().n(), block, [&](std::span<const std::uint32_t> idx) {
    std::size_t p = 0;
    while (p < previous.size() && p < idx.size() && previous[p] == idx[p]) ++p;
    for (std::size_t q = p; q < idx.size(); ++q) {
      states[q + 1] = states[q];
      states[q + 1].absorb(seq[idx[q] - 1]);
    }
    previous.assign(idx.begin(), idx.end());
    return visit(idx, static_cast<const EspState<Scalar>&>(states[idx.size()]));
  });
}

/// Forward stream over a family in size-then-lex order.
class FamilyStream {
 public:
  explicit FamilyStream(const ProblemParams& params);
  FamilyStream(std::int64_t n, std::int64_t lo, std::int64_t hi);

  /// Next subset, or nullopt at the end.
  std::optional<SubsetRef> next();

 private:
  std::int64_t n_;
  std::int64_t size_;
  std::int64_t hi_;
  std::vector<std::uint32_t> current_;
  bool started_ = false;
  bool done_ = false;
};

/// Materialises the stream; meant for small families and tests.
std::vector<SubsetRef> enumerate_family(const ProblemParams& params);

}  // namespace evd
