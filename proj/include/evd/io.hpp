#pragma once

#include "evd/params.hpp"
#include "evd/sequence.hpp"

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace evd {

/// Parsed sequence document. Entries are kept as rationals until the caller
/// picks an integer or real interpretation.
struct SequenceDocument {
  ProblemParams params;
  std::optional<Integer> bound;
  std::vector<Element<Rational>> elements;

  /// True when every coordinate has denominator 1.
  bool integral() const;
  /// ParseError if some entry is not an integer.
  Sequence to_sequence() const;
  RationalSequence to_rational_sequence() const;
};

/// Fields n, k, m, lambda ("p/q"), optional bound (decimal string) and
/// elements (array of arrays of decimal strings, "p/q" allowed).
SequenceDocument parse_sequence_json(std::string_view text);
SequenceDocument read_sequence_file(const std::filesystem::path& path);

std::string to_json(const Sequence& seq);
std::string to_json(const RationalSequence& seq);
void write_sequence_file(const std::filesystem::path& path, const Sequence& seq);
void write_sequence_file(const std::filesystem::path& path, const RationalSequence& seq);

/// Writes `text` to `path`, or to stdout when path is "-".
void write_text(const std::filesystem::path& path, std::string_view text);
std::string read_text(const std::filesystem::path& path);

}  // namespace evd
