#include "evd/sequence.hpp"

namespace evd {

Sequence make_sequence(const ProblemParams& params, std::span<const long long> values, std::optional<Integer> bound) {
  std::vector<Element<Integer>> elements;
  elements.reserve(values.size());
  for (long long v : values) elements.push_back(Element<Integer>{Integer(v)});
  return Sequence(params, std::move(elements), std::move(bound));
}

RationalSequence to_rational(const Sequence& seq) {
  std::vector<Element<Rational>> elements;
  elements.reserve(seq.size());
  for (const auto& e : seq.elements()) {
    Element<Rational> r;
    r.coords.reserve(e.dim());
    for (const auto& c : e.coords) r.coords.emplace_back(c);
    elements.push_back(std::move(r));
  }
  return RationalSequence(seq.params(), std::move(elements), seq.bound());
}

}  // namespace evd
