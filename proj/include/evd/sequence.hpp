#pragma once

#include "evd/error.hpp"
#include "evd/numeric.hpp"
#include "evd/params.hpp"

#include <compare>
#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace evd {

/// A k-tuple of scalars. Used both for sequence entries and for evaluations.
template <class Scalar>
struct Tuple {
  std::vector<Scalar> coords;

  Tuple() = default;
  explicit Tuple(std::vector<Scalar> c) : coords(std::move(c)) {}
  Tuple(std::initializer_list<Scalar> c) : coords(c) {}

  std::size_t dim() const noexcept { return coords.size(); }
  const Scalar& operator[](std::size_t i) const { return coords[i]; }
  Scalar& operator[](std::size_t i) { return coords[i]; }

  bool operator==(const Tuple&) const = default;
  /// Lexicographic order; compatible with coordinatewise addition.
  std::strong_ordering operator<=>(const Tuple& other) const {
    const std::size_t len = std::min(coords.size(), other.coords.size());
    for (std::size_t i = 0; i < len; ++i) {
      if (coords[i] < other.coords[i]) return std::strong_ordering::less;
      if (other.coords[i] < coords[i]) return std::strong_ordering::greater;
    }
    return coords.size() <=> other.coords.size();
  }
};

template <class Scalar>
using Element = Tuple<Scalar>;
template <class Scalar>
using EvalValue = Tuple<Scalar>;

template <class Scalar>
struct TupleHash {
  std::size_t operator()(const Tuple<Scalar>& t) const noexcept {
    std::uint64_t h = t.coords.size();
    for (const auto& c : t.coords) h = hash_combine(h, hash_value(c));
    return static_cast<std::size_t>(h);
  }
};

/// An ordered list of n non-negative k-dimensional entries, optionally M-bounded.
template <class Scalar>
class BasicSequence {
 public:
  BasicSequence(ProblemParams params, std::vector<Element<Scalar>> elements,
                std::optional<Integer> bound = std::nullopt)
      : params_(std::move(params)), elements_(std::move(elements)), bound_(std::move(bound)) {
    validate();
  }

  const ProblemParams& params() const noexcept { return params_; }
  std::span<const Element<Scalar>> elements() const noexcept { return elements_; }
  const Element<Scalar>& operator[](std::size_t i) const { return elements_[i]; }
  std::size_t size() const noexcept { return elements_.size(); }
  const std::optional<Integer>& bound() const noexcept { return bound_; }

  /// Largest coordinate over all entries (0 for an empty sequence).
  Scalar max_coordinate() const {
    Scalar best = 0;
    for (const auto& e : elements_)
      for (const auto& c : e.coords)
        if (best < c) best = c;
    return best;
  }

  bool operator==(const BasicSequence&) const = default;

 private:
  void validate() const {
    if (elements_.size() != static_cast<std::size_t>(params_.n()))
      throw Error(ErrorKind::DimensionMismatch, "sequence has " + std::to_string(elements_.size()) +
                                                    " entries, expected n=" + std::to_string(params_.n()));
    for (const auto& e : elements_) {
      if (e.dim() != static_cast<std::size_t>(params_.k()))
        throw Error(ErrorKind::DimensionMismatch, "entry arity differs from k=" + std::to_string(params_.k()));
      for (const auto& c : e.coords) {
        if (c < 0) throw Error(ErrorKind::DomainError, "negative entry");
        if (bound_ && c > Scalar(*bound_)) throw Error(ErrorKind::DomainError, "entry exceeds the bound M");
      }
    }
    if (bound_ && *bound_ < 0) throw Error(ErrorKind::DomainError, "negative bound");
  }

  ProblemParams params_;
  std::vector<Element<Scalar>> elements_;
  std::optional<Integer> bound_;
};

using Sequence = BasicSequence<Integer>;
using RationalSequence = BasicSequence<Rational>;

/// Convenience for tests and one-dimensional callers.
Sequence make_sequence(const ProblemParams& params, std::span<const long long> values,
                       std::optional<Integer> bound = std::nullopt);

RationalSequence to_rational(const Sequence& seq);

}  // namespace evd
