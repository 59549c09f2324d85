#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace evd {

/// Outer-joins CSV tables on (n, k, m, lambda). Rows carrying a `name` or `op`
/// column are pivoted so each of their other columns becomes "<name>:<column>".
/// The output has one row per key, sorted by n, k, m, lambda, with an empty cell
/// wherever a table had nothing for that key. A key that receives two different
/// values for the same column is a SchemaMismatch.
std::string merge_reports(const std::vector<std::string>& tables);

/// Splits one CSV line; quoted fields are not part of the format and are rejected.
std::vector<std::string> split_csv_line(std::string_view line);

}  // namespace evd
