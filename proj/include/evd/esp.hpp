#pragma once

#include "evd/error.hpp"
#include "evd/sequence.hpp"
#include "evd/subset.hpp"

#include <cstddef>
#include <vector>

namespace evd {

/// Elementary symmetric values e_0..e_degree of the entries absorbed so far,
/// one table per coordinate. Absorbing x applies e_j += x * e_{j-1} from the
/// top down, so the table never depends on absorption order.
template <class Scalar>
class EspState {
 public:
  EspState(std::size_t dim, std::size_t degree) : dim_(dim), degree_(degree), table_(dim * (degree + 1)) {
    for (std::size_t c = 0; c < dim_; ++c) table_[c * (degree_ + 1)] = 1;
  }

  std::size_t dim() const noexcept { return dim_; }
  std::size_t degree() const noexcept { return degree_; }
  std::size_t count() const noexcept { return count_; }

  const Scalar& at(std::size_t coord, std::size_t j) const { return table_[coord * (degree_ + 1) + j]; }

  void absorb(const Element<Scalar>& x) {
    if (x.dim() != dim_) throw Error(ErrorKind::DimensionMismatch, "element arity differs from the state");
    for (std::size_t c = 0; c < dim_; ++c) {
      Scalar* row = table_.data() + c * (degree_ + 1);
      const std::size_t top = std::min(degree_, count_ + 1);
      for (std::size_t j = top; j >= 1; --j) row[j] += x.coords[c] * row[j - 1];
    }
    ++count_;
  }

  EspState extended(const Element<Scalar>& x) const {
    EspState next = *this;
    next.absorb(x);
    return next;
  }

  /// e_degree per coordinate.
  EvalValue<Scalar> top() const {
    EvalValue<Scalar> out;
    out.coords.reserve(dim_);
    for (std::size_t c = 0; c < dim_; ++c) out.coords.push_back(at(c, degree_));
    return out;
  }

  bool operator==(const EspState&) const = default;

 private:
  std::size_t dim_;
  std::size_t degree_;
  std::size_t count_ = 0;
  std::vector<Scalar> table_;
};

template <class Scalar>
EspState<Scalar> esp_extend(const EspState<Scalar>& state, const Element<Scalar>& x) {
  return state.extended(x);
}

/// Throws IndexOutOfRange when `subset` reaches past n.
inline void check_subset(const SubsetRef& subset, std::int64_t n) {
  if (subset.max_index() > static_cast<std::uint64_t>(n))
    throw Error(ErrorKind::IndexOutOfRange, "subset " + subset.str() + " exceeds n=" + std::to_string(n));
}

/// m-th elementary symmetric polynomial of the entries indexed by `subset`,
/// per coordinate; all zero when |subset| < m.
template <class Scalar>
EvalValue<Scalar> eval_subset(const BasicSequence<Scalar>& seq, const SubsetRef& subset) {
  check_subset(subset, seq.params().n());
  const auto m = static_cast<std::size_t>(seq.params().m());
  EspState<Scalar> state(static_cast<std::size_t>(seq.params().k()), m);
  for (auto i : subset.indices()) state.absorb(seq[i - 1]);
  return state.top();
}

}  // namespace evd
