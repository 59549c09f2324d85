#include "evd/verify.hpp"

#include "evd/error.hpp"
#include "evd/esp.hpp"
#include "evd/family.hpp"
#include "evd/parallel.hpp"

#include <algorithm>
#include <unordered_map>
#include <unordered_set>

namespace evd {

namespace {

std::size_t magnitude_bits(const Integer& z) { return z == 0 ? 1 : msb(z) + 1; }
std::size_t magnitude_bits(const Rational& q) {
  return magnitude_bits(Integer(abs(numerator(q)))) + magnitude_bits(Integer(denominator(q)));
}

/// Rough per-subset cost of keeping an evaluation in a hash table.
template <class Scalar>
std::size_t bytes_per_value(const BasicSequence<Scalar>& seq) {
  const auto& p = seq.params();
  std::size_t bits = magnitude_bits(Integer(binomial(p.size_cap(), p.m()))) +
                     static_cast<std::size_t>(p.m()) * magnitude_bits(seq.max_coordinate());
  const std::size_t per_coord = sizeof(Scalar) + bits / 8 + 16;
  return sizeof(EvalValue<Scalar>) + static_cast<std::size_t>(p.k()) * per_coord + 48;
}

template <class Scalar>
std::uint64_t digest(const EvalValue<Scalar>& v) {
  return static_cast<std::uint64_t>(TupleHash<Scalar>{}(v));
}

template <class Scalar>
std::vector<EvalValue<Scalar>> evaluate_family(const BasicSequence<Scalar>& seq, const FamilyLayout& layout,
                                               unsigned threads) {
  std::vector<EvalValue<Scalar>> values(layout.total());
  const auto blocks = layout.blocks();
  const auto degree = static_cast<std::size_t>(seq.params().m());
  parallel_for(blocks.size(), threads, [&](std::size_t b) {
    std::uint64_t slot = blocks[b].offset;
    walk_block(seq, degree, blocks[b], [&](std::span<const std::uint32_t>, const EspState<Scalar>& state) {
      values[slot++] = state.top();
      return true;
    });
  });
  return values;
}

VerificationResult fail(const FamilyLayout& layout, std::uint64_t first, std::uint64_t second) {
  VerificationResult r;
  r.status = VerifyStatus::Fail;
  r.witness.emplace(layout.unrank(first), layout.unrank(second));
  r.subsets_examined = second + 1;
  return r;
}

template <class Scalar>
VerificationResult exact_single_pass(const BasicSequence<Scalar>& seq, const FamilyLayout& layout, unsigned threads) {
  const auto values = evaluate_family(seq, layout, threads);
  std::vector<std::uint64_t> hashes(values.size());
  parallel_for(values.size(), threads, [&](std::size_t i) { hashes[i] = digest(values[i]); });

  auto hash = [&](std::uint64_t r) { return static_cast<std::size_t>(hashes[r]); };
  auto eq = [&](std::uint64_t a, std::uint64_t b) { return values[a] == values[b]; };
  std::unordered_set<std::uint64_t, decltype(hash), decltype(eq)> seen(values.size(), hash, eq);
  for (std::uint64_t r = 0; r < values.size(); ++r) {
    auto [it, inserted] = seen.insert(r);
    if (!inserted) return fail(layout, *it, r);
  }
  VerificationResult ok;
  ok.subsets_examined = layout.total();
  return ok;
}

template <class Scalar>
VerificationResult exact_two_pass(const BasicSequence<Scalar>& seq, const FamilyLayout& layout, unsigned threads,
                                  std::size_t budget) {
  if (layout.total() > budget / 16)
    throw Error(ErrorKind::MemoryBudgetExceeded, "two-pass digests exceed the memory budget");
  std::vector<std::pair<std::uint64_t, std::uint64_t>> keyed(layout.total());
  const auto blocks = layout.blocks();
  const auto degree = static_cast<std::size_t>(seq.params().m());
  parallel_for(blocks.size(), threads, [&](std::size_t b) {
    std::uint64_t slot = blocks[b].offset;
    walk_block(seq, degree, blocks[b], [&](std::span<const std::uint32_t>, const EspState<Scalar>& state) {
      keyed[slot] = {digest(state.top()), slot};
      ++slot;
      return true;
    });
  });
  std::sort(keyed.begin(), keyed.end());

  // Within each digest tie, find the earliest rank that repeats a value.
  std::optional<std::pair<std::uint64_t, std::uint64_t>> best;
  for (std::size_t i = 0; i < keyed.size();) {
    std::size_t j = i;
    while (j < keyed.size() && keyed[j].first == keyed[i].first) ++j;
    if (j - i > 1) {
      std::vector<std::pair<EvalValue<Scalar>, std::uint64_t>> group;
      for (std::size_t q = i; q < j; ++q) {
        const std::uint64_t rank = keyed[q].second;
        if (best && rank >= best->second) break;  // ranks ascend within a tie
        group.emplace_back(eval_subset(seq, layout.unrank(rank)), rank);
        for (std::size_t e = 0; e + 1 < group.size(); ++e) {
          if (group[e].first == group.back().first) {
            best = std::make_pair(group[e].second, rank);
            break;
          }
        }
        if (best && best->second == rank) break;
      }
    }
    i = j;
  }
  if (best) return fail(layout, best->first, best->second);
  VerificationResult ok;
  ok.subsets_examined = layout.total();
  return ok;
}

bool within_unit(const EvalValue<Rational>& a, const EvalValue<Rational>& b) {
  for (std::size_t c = 0; c < a.dim(); ++c) {
    Rational d = a[c] - b[c];
    if (d >= 1 || d <= -1) return false;
  }
  return true;
}

struct CellHash {
  std::size_t operator()(const std::vector<Integer>& cell) const noexcept {
    std::uint64_t h = cell.size();
    for (const auto& z : cell) h = hash_combine(h, hash_value(z));
    return static_cast<std::size_t>(h);
  }
};

VerificationResult real_spacing(const RationalSequence& seq, const FamilyLayout& layout, unsigned threads) {
  const auto values = evaluate_family(seq, layout, threads);
  const auto k = static_cast<std::size_t>(seq.params().k());
  std::unordered_map<std::vector<Integer>, std::vector<std::uint64_t>, CellHash> grid;
  std::vector<Integer> cell(k);
  std::vector<Integer> probe(k);
  std::size_t neighbours = 1;
  for (std::size_t c = 0; c < k; ++c) neighbours *= 3;

  for (std::uint64_t r = 0; r < values.size(); ++r) {
    for (std::size_t c = 0; c < k; ++c) cell[c] = floor(values[r][c]);
    std::optional<std::uint64_t> clash;
    for (std::size_t code = 0; code < neighbours; ++code) {
      std::size_t rest = code;
      for (std::size_t c = 0; c < k; ++c) {
        probe[c] = cell[c] + static_cast<int>(rest % 3) - 1;
        rest /= 3;
      }
      auto it = grid.find(probe);
      if (it == grid.end()) continue;
      for (auto other : it->second) {
        if (within_unit(values[other], values[r]) && (!clash || other < *clash)) clash = other;
      }
    }
    if (clash) return fail(layout, *clash, r);
    grid[cell].push_back(r);
  }
  VerificationResult ok;
  ok.subsets_examined = layout.total();
  return ok;
}

template <class Scalar>
VerificationResult verify_exact(const BasicSequence<Scalar>& seq, const VerifyOptions& options) {
  const FamilyLayout layout(seq.params());
  if (layout.total() == 0) return {};
  const std::size_t per = bytes_per_value(seq);
  const bool fits = layout.total() <= options.memory_budget / per;
  if (options.two_pass) return exact_two_pass(seq, layout, options.threads, options.memory_budget);
  if (!fits)
    throw Error(ErrorKind::MemoryBudgetExceeded,
                std::to_string(layout.total()) + " evaluations exceed the memory budget; enable two-pass mode");
  return exact_single_pass(seq, layout, options.threads);
}

}  // namespace

VerificationResult verify_distinct(const Sequence& seq, VerifyMode, const VerifyOptions& options) {
  return verify_exact(seq, options);
}

VerificationResult verify_distinct(const RationalSequence& seq, VerifyMode mode, const VerifyOptions& options) {
  if (mode == VerifyMode::IntegerExact) return verify_exact(seq, options);
  const FamilyLayout layout(seq.params());
  if (layout.total() == 0) return {};
  if (layout.total() > options.memory_budget / bytes_per_value(seq))
    throw Error(ErrorKind::MemoryBudgetExceeded, "real-spacing verification exceeds the memory budget");
  return real_spacing(seq, layout, options.threads);
}

}  // namespace evd
