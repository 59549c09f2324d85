#pragma once

// Independent brute-force references. Nothing here touches EspState or the
// family layout; everything is computed from the defining sums over bitmasks.

#include "evd/numeric.hpp"
#include "evd/sequence.hpp"

#include <bit>
#include <cstdint>
#include <optional>
#include <random>
#include <utility>
#include <vector>

namespace evd::oracle {

/// Direct expansion: sum over all m-subsets of `mask` of the product of entries.
template <class Scalar>
std::vector<Scalar> naive_eval(const BasicSequence<Scalar>& seq, std::uint64_t mask, int m) {
  const auto k = static_cast<std::size_t>(seq.params().k());
  std::vector<Scalar> out(k, Scalar(0));
  if (std::popcount(mask) < m) return out;
  // Walk every sub-mask of `mask` with exactly m bits.
  for (std::uint64_t sub = mask;; sub = (sub - 1) & mask) {
    if (std::popcount(sub) == m) {
      for (std::size_t c = 0; c < k; ++c) {
        Scalar prod = 1;
        for (std::uint64_t b = sub; b; b &= b - 1) prod *= seq[static_cast<std::size_t>(std::countr_zero(b))][c];
        out[c] += prod;
      }
    }
    if (sub == 0) break;
  }
  return out;
}

/// Pairwise double loop over the family. Returns true when all evaluations are distinct.
template <class Scalar>
bool naive_distinct(const BasicSequence<Scalar>& seq) {
  const auto& p = seq.params();
  const int n = static_cast<int>(p.n());
  const int m = static_cast<int>(p.m());
  const auto cap = p.size_cap();
  std::vector<std::pair<std::uint64_t, std::vector<Scalar>>> members;
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << n); ++mask) {
    const int size = std::popcount(mask);
    if (size < m || size > cap) continue;
    members.emplace_back(mask, naive_eval(seq, mask, m));
  }
  for (std::size_t i = 0; i < members.size(); ++i)
    for (std::size_t j = i + 1; j < members.size(); ++j)
      if (members[i].second == members[j].second) return false;
  return true;
}

inline std::uint64_t mask_of(const std::vector<std::uint32_t>& indices) {
  std::uint64_t m = 0;
  for (auto i : indices) m |= std::uint64_t{1} << (i - 1);
  return m;
}

/// Random integer sequence with coordinates uniform on [0, max_entry].
inline Sequence random_sequence(std::mt19937_64& rng, const ProblemParams& p, long long max_entry) {
  std::uniform_int_distribution<long long> dist(0, max_entry);
  std::vector<Element<Integer>> elements;
  for (std::int64_t i = 0; i < p.n(); ++i) {
    Element<Integer> e;
    for (std::int64_t c = 0; c < p.k(); ++c) e.coords.emplace_back(dist(rng));
    elements.push_back(std::move(e));
  }
  return Sequence(p, std::move(elements));
}

}  // namespace evd::oracle
