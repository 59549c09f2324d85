#pragma once

#include <cstdint>
#include <initializer_list>
#include <string>
#include <vector>

namespace evd {

/// A subset of [1, n] as strictly increasing 1-based indices.
class SubsetRef {
 public:
  SubsetRef() = default;
  /// Throws InvalidArgument unless `indices` is strictly increasing and >= 1.
  explicit SubsetRef(std::vector<std::uint32_t> indices);
  SubsetRef(std::initializer_list<std::uint32_t> indices) : SubsetRef(std::vector<std::uint32_t>(indices)) {}

  static SubsetRef from_mask(std::uint64_t mask);

  const std::vector<std::uint32_t>& indices() const noexcept { return indices_; }
  std::size_t size() const noexcept { return indices_.size(); }
  bool empty() const noexcept { return indices_.empty(); }
  std::uint32_t max_index() const noexcept { return indices_.empty() ? 0 : indices_.back(); }
  bool contains(std::uint32_t index) const noexcept;

  /// Bit i-1 set for index i; only valid when every index is <= 64.
  std::uint64_t to_mask() const;

  /// "{1,2,3}"
  std::string str() const;

  bool operator==(const SubsetRef&) const = default;
  /// Size-then-lex order, the enumeration order of the family.
  bool operator<(const SubsetRef& other) const;

 private:
  std::vector<std::uint32_t> indices_;
};

}  // namespace evd
