#include "evd/family.hpp"

#include "evd/error.hpp"

#include <algorithm>
#include <limits>

namespace evd {

Integer family_size(std::int64_t n, const Rational& lambda, std::int64_t min_size) {
  if (n < 0 || min_size < 0 || lambda <= 0 || lambda > 1)
    throw Error(ErrorKind::InvalidArgument, "family_size needs n >= 0, minSize >= 0, 0 < lambda <= 1");
  const std::int64_t cap = size_cap(n, lambda);
  Integer total = 0;
  for (std::int64_t i = min_size; i <= cap; ++i) total += binomial(n, i);
  return total;
}

namespace {

std::uint64_t to_u64(const Integer& z, const char* what) {
  if (z > std::numeric_limits<std::uint64_t>::max())
    throw Error(ErrorKind::BudgetExceeded, std::string(what) + " does not fit 64-bit ranks");
  return z.convert_to<std::uint64_t>();
}

std::uint64_t choose_u64(std::int64_t n, std::int64_t k) { return to_u64(binomial(n, k), "family"); }

}  // namespace

FamilyLayout::FamilyLayout(std::int64_t n, std::int64_t lo, std::int64_t hi)
    : n_(n), lo_(std::max<std::int64_t>(lo, 0)), hi_(std::min(hi, n)) {
  if (n_ < 0) throw Error(ErrorKind::InvalidArgument, "negative n");
  if (n_ > std::numeric_limits<std::uint32_t>::max() / 2) throw Error(ErrorKind::InvalidArgument, "n too large");
  Integer running = 0;
  for (std::int64_t s = lo_; s <= hi_; ++s) {
    if (s == 0) {
      blocks_.push_back({0, 0, to_u64(running, "family"), 1});
      running += 1;
      continue;
    }
    for (std::int64_t f = 1; f + s - 1 <= n_; ++f) {
      const std::uint64_t count = choose_u64(n_ - f, s - 1);
      blocks_.push_back({static_cast<std::uint32_t>(s), static_cast<std::uint32_t>(f), to_u64(running, "family"), count});
      running += count;
    }
  }
  total_ = to_u64(running, "family");
}

FamilyLayout::FamilyLayout(const ProblemParams& params) : FamilyLayout(params.n(), params.m(), params.size_cap()) {}

SubsetRef FamilyLayout::unrank(std::uint64_t rank) const {
  if (rank >= total_) throw Error(ErrorKind::IndexOutOfRange, "rank past the end of the family");
  auto it = std::upper_bound(blocks_.begin(), blocks_.end(), rank,
                             [](std::uint64_t r, const FamilyBlock& b) { return r < b.offset; });
  const FamilyBlock& block = *std::prev(it);
  std::vector<std::uint32_t> out;
  if (block.size == 0) return SubsetRef(out);
  out.reserve(block.size);
  out.push_back(block.first);
  std::uint64_t r = rank - block.offset;
  std::uint32_t prev = block.first;
  for (std::uint32_t left = block.size - 1; left > 0; --left) {
    for (std::uint32_t v = prev + 1;; ++v) {
      const std::uint64_t with_v = choose_u64(n_ - v, left - 1);
      if (r < with_v) {
        out.push_back(v);
        prev = v;
        break;
      }
      r -= with_v;
    }
  }
  return SubsetRef(std::move(out));
}

std::uint64_t FamilyLayout::rank(const SubsetRef& subset) const {
  const auto s = static_cast<std::int64_t>(subset.size());
  if (s < lo_ || s > hi_ || subset.max_index() > static_cast<std::uint64_t>(n_))
    throw Error(ErrorKind::IndexOutOfRange, "subset " + subset.str() + " is not in the family");
  const std::uint32_t first = s == 0 ? 0 : subset.indices().front();
  auto it = std::find_if(blocks_.begin(), blocks_.end(), [&](const FamilyBlock& b) {
    return b.size == static_cast<std::uint32_t>(s) && b.first == first;
  });
  std::uint64_t r = it->offset;
  const auto& idx = subset.indices();
  for (std::size_t p = 1; p < idx.size(); ++p) {
    const auto left = static_cast<std::int64_t>(idx.size() - p);
    for (std::uint32_t v = idx[p - 1] + 1; v < idx[p]; ++v) r += choose_u64(n_ - v, left - 1);
  }
  return r;
}

FamilyStream::FamilyStream(std::int64_t n, std::int64_t lo, std::int64_t hi)
    : n_(n), size_(std::max<std::int64_t>(lo, 0)), hi_(std::min(hi, n)) {}

FamilyStream::FamilyStream(const ProblemParams& params) : FamilyStream(params.n(), params.m(), params.size_cap()) {}

std::optional<SubsetRef> FamilyStream::next() {
  if (done_) return std::nullopt;
  if (started_) {
    // Lex successor within the current size.
    const auto s = static_cast<std::size_t>(size_);
    std::size_t p = s;
    bool advanced = false;
    while (p > 0) {
      --p;
      if (current_[p] < static_cast<std::uint32_t>(n_ - static_cast<std::int64_t>(s - 1 - p))) {
        ++current_[p];
        for (std::size_t q = p + 1; q < s; ++q) current_[q] = current_[q - 1] + 1;
        advanced = true;
        break;
      }
    }
    if (!advanced) {
      ++size_;
      started_ = false;
    }
  }
  if (!started_) {
    if (size_ > hi_) {
      done_ = true;
      return std::nullopt;
    }
    current_.resize(static_cast<std::size_t>(size_));
    for (std::size_t q = 0; q < current_.size(); ++q) current_[q] = static_cast<std::uint32_t>(q + 1);
    started_ = true;
  }
  return SubsetRef(current_);
}

std::vector<SubsetRef> enumerate_family(const ProblemParams& params) {
  std::vector<SubsetRef> out;
  FamilyStream stream(params);
  while (auto s = stream.next()) out.push_back(std::move(*s));
  return out;
}

}  // namespace evd
