#include "evd/report.hpp"

#include "evd/error.hpp"
#include "evd/numeric.hpp"

#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <tuple>

namespace evd {

namespace {

struct Key {
  Integer n, k, m;
  Rational lambda;
  auto tie() const { return std::tie(n, k, m, lambda); }
  bool operator<(const Key& o) const { return tie() < o.tie(); }
};

std::vector<std::string> lines_of(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (!line.empty()) out.push_back(line);
  }
  return out;
}

}  // namespace

std::vector<std::string> split_csv_line(std::string_view line) {
  if (line.find('"') != std::string_view::npos) throw Error(ErrorKind::SchemaMismatch, "quoted CSV fields are not supported");
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    const auto comma = line.find(',', start);
    out.emplace_back(line.substr(start, comma == std::string_view::npos ? std::string_view::npos : comma - start));
    if (comma == std::string_view::npos) return out;
    start = comma + 1;
  }
}

std::string merge_reports(const std::vector<std::string>& tables) {
  std::map<Key, std::map<std::string, std::string>> rows;
  std::set<std::string> columns;
  const char* key_names[] = {"n", "k", "m", "lambda"};

  for (std::size_t t = 0; t < tables.size(); ++t) {
    const auto lines = lines_of(tables[t]);
    if (lines.empty()) continue;
    const auto header = split_csv_line(lines.front());
    std::map<std::string, std::size_t> where;
    for (std::size_t i = 0; i < header.size(); ++i)
      if (!where.emplace(header[i], i).second)
        throw Error(ErrorKind::SchemaMismatch, "table " + std::to_string(t + 1) + " repeats column '" + header[i] + "'");
    for (const char* name : key_names)
      if (!where.count(name))
        throw Error(ErrorKind::SchemaMismatch, "table " + std::to_string(t + 1) + " lacks key column '" + name + "'");
    std::optional<std::size_t> pivot;
    if (where.count("name")) pivot = where.at("name");
    else if (where.count("op")) pivot = where.at("op");

    for (std::size_t r = 1; r < lines.size(); ++r) {
      const auto cells = split_csv_line(lines[r]);
      if (cells.size() != header.size())
        throw Error(ErrorKind::SchemaMismatch,
                    "table " + std::to_string(t + 1) + " row " + std::to_string(r + 1) + " has the wrong width");
      Key key;
      try {
        key = Key{parse_integer(cells[where.at("n")]), parse_integer(cells[where.at("k")]),
                  parse_integer(cells[where.at("m")]), parse_rational(cells[where.at("lambda")])};
      } catch (const Error& e) {
        throw Error(ErrorKind::SchemaMismatch, std::string("bad key cell: ") + e.what());
      }
      auto& row = rows[key];
      for (std::size_t c = 0; c < header.size(); ++c) {
        const auto& col = header[c];
        if (col == "n" || col == "k" || col == "m" || col == "lambda" || (pivot && c == *pivot)) continue;
        const std::string name = pivot ? cells[*pivot] + ":" + col : col;
        auto [it, inserted] = row.emplace(name, cells[c]);
        if (!inserted && it->second != cells[c])
          throw Error(ErrorKind::SchemaMismatch, "conflicting values for '" + name + "' at n=" + to_string(key.n) +
                                                     " k=" + to_string(key.k) + " m=" + to_string(key.m) +
                                                     " lambda=" + to_string(key.lambda));
        columns.insert(name);
      }
    }
  }

  std::ostringstream out;
  out << "n,k,m,lambda";
  for (const auto& c : columns) out << ',' << c;
  out << '\n';
  for (const auto& [key, values] : rows) {
    out << to_string(key.n) << ',' << to_string(key.k) << ',' << to_string(key.m) << ',' << to_string(key.lambda);
    for (const auto& c : columns) {
      out << ',';
      if (auto it = values.find(c); it != values.end()) out << it->second;
    }
    out << '\n';
  }
  return out.str();
}

}  // namespace evd
