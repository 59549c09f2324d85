#include "evd/io.hpp"

#include "evd/error.hpp"

#include <json.hpp>

#include <fstream>
#include <iostream>
#include <sstream>

namespace evd {

namespace {

using json = nlohmann::ordered_json;

std::int64_t int_field(const json& doc, const char* key) {
  if (!doc.contains(key)) throw Error(ErrorKind::ParseError, std::string("missing field '") + key + "'");
  const auto& v = doc.at(key);
  if (v.is_number_integer()) return v.get<std::int64_t>();
  if (v.is_string()) {
    const Integer z = parse_integer(v.get<std::string>());
    if (z > std::numeric_limits<std::int64_t>::max()) throw Error(ErrorKind::ParseError, std::string(key) + " too large");
    return z.convert_to<std::int64_t>();
  }
  throw Error(ErrorKind::ParseError, std::string("field '") + key + "' must be an integer");
}

std::string string_of(const json& v, const char* what) {
  if (v.is_string()) return v.get<std::string>();
  if (v.is_number_integer()) return v.dump();
  throw Error(ErrorKind::ParseError, std::string(what) + " must be a decimal string");
}

template <class Scalar>
std::string dump(const BasicSequence<Scalar>& seq) {
  const auto& p = seq.params();
  json doc;
  doc["n"] = p.n();
  doc["k"] = p.k();
  doc["m"] = p.m();
  doc["lambda"] = to_string(p.lambda());
  if (seq.bound()) doc["bound"] = to_string(*seq.bound());
  json elements = json::array();
  for (const auto& e : seq.elements()) {
    json row = json::array();
    for (const auto& c : e.coords) row.push_back(to_string(c));
    elements.push_back(std::move(row));
  }
  doc["elements"] = std::move(elements);
  return doc.dump(2) + "\n";
}

}  // namespace

bool SequenceDocument::integral() const {
  for (const auto& e : elements)
    for (const auto& c : e.coords)
      if (boost::multiprecision::denominator(c) != 1) return false;
  return true;
}

Sequence SequenceDocument::to_sequence() const {
  if (!integral()) throw Error(ErrorKind::ParseError, "sequence has non-integer entries");
  std::vector<Element<Integer>> out;
  out.reserve(elements.size());
  for (const auto& e : elements) {
    Element<Integer> z;
    for (const auto& c : e.coords) z.coords.push_back(boost::multiprecision::numerator(c));
    out.push_back(std::move(z));
  }
  return Sequence(params, std::move(out), bound);
}

RationalSequence SequenceDocument::to_rational_sequence() const { return RationalSequence(params, elements, bound); }

SequenceDocument parse_sequence_json(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::exception& e) {
    throw Error(ErrorKind::ParseError, std::string("malformed sequence file: ") + e.what());
  }
  if (!doc.is_object()) throw Error(ErrorKind::ParseError, "sequence file must be an object");
  if (!doc.contains("lambda")) throw Error(ErrorKind::ParseError, "missing field 'lambda'");
  ProblemParams params(int_field(doc, "n"), int_field(doc, "k"), int_field(doc, "m"),
                       parse_rational(string_of(doc.at("lambda"), "lambda")));
  std::optional<Integer> bound;
  if (doc.contains("bound") && !doc.at("bound").is_null()) bound = parse_integer(string_of(doc.at("bound"), "bound"));
  if (!doc.contains("elements") || !doc.at("elements").is_array())
    throw Error(ErrorKind::ParseError, "field 'elements' must be an array");
  std::vector<Element<Rational>> elements;
  for (const auto& row : doc.at("elements")) {
    if (!row.is_array()) throw Error(ErrorKind::ParseError, "each element must be an array of coordinates");
    Element<Rational> e;
    for (const auto& c : row) e.coords.push_back(parse_rational(string_of(c, "coordinate")));
    elements.push_back(std::move(e));
  }
  SequenceDocument out{std::move(params), std::move(bound), std::move(elements)};
  // Validates length, arity, sign and bound.
  (void)out.to_rational_sequence();
  return out;
}

SequenceDocument read_sequence_file(const std::filesystem::path& path) { return parse_sequence_json(read_text(path)); }

std::string to_json(const Sequence& seq) { return dump(seq); }
std::string to_json(const RationalSequence& seq) { return dump(seq); }

void write_sequence_file(const std::filesystem::path& path, const Sequence& seq) { write_text(path, to_json(seq)); }
void write_sequence_file(const std::filesystem::path& path, const RationalSequence& seq) {
  write_text(path, to_json(seq));
}

void write_text(const std::filesystem::path& path, std::string_view text) {
  if (path == "-") {
    std::cout << text;
    std::cout.flush();
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorKind::InvalidArgument, "cannot write " + path.string());
  out << text;
  if (!out) throw Error(ErrorKind::InvalidArgument, "write failed for " + path.string());
}

std::string read_text(const std::filesystem::path& path) {
  if (path == "-") {
    std::ostringstream ss;
    ss << std::cin.rdbuf();
    return ss.str();
  }
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::ParseError, "cannot read " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace evd
