#include "evd/subset.hpp"

#include "evd/error.hpp"

#include <algorithm>
#include <bit>

namespace evd {

SubsetRef::SubsetRef(std::vector<std::uint32_t> indices) : indices_(std::move(indices)) {
  for (std::size_t i = 0; i < indices_.size(); ++i) {
    if (indices_[i] == 0) throw Error(ErrorKind::InvalidArgument, "subset indices are 1-based");
    if (i > 0 && indices_[i - 1] >= indices_[i])
      throw Error(ErrorKind::InvalidArgument, "subset indices must be strictly increasing");
  }
}

SubsetRef SubsetRef::from_mask(std::uint64_t mask) {
  std::vector<std::uint32_t> out;
  out.reserve(static_cast<std::size_t>(std::popcount(mask)));
  while (mask != 0) {
    out.push_back(static_cast<std::uint32_t>(std::countr_zero(mask)) + 1);
    mask &= mask - 1;
  }
  SubsetRef s;
  s.indices_ = std::move(out);
  return s;
}

bool SubsetRef::contains(std::uint32_t index) const noexcept {
  return std::binary_search(indices_.begin(), indices_.end(), index);
}

std::uint64_t SubsetRef::to_mask() const {
  std::uint64_t mask = 0;
  for (auto i : indices_) {
    if (i > 64) throw Error(ErrorKind::IndexOutOfRange, "bitmask encoding holds indices up to 64");
    mask |= std::uint64_t{1} << (i - 1);
  }
  return mask;
}

std::string SubsetRef::str() const {
  std::string out = "{";
  for (std::size_t i = 0; i < indices_.size(); ++i) {
    if (i) out += ',';
    out += std::to_string(indices_[i]);
  }
  return out + "}";
}

bool SubsetRef::operator<(const SubsetRef& other) const {
  if (indices_.size() != other.indices_.size()) return indices_.size() < other.indices_.size();
  return indices_ < other.indices_;
}

}  // namespace evd
