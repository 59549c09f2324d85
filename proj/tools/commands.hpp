#pragma once

#include <CLI11.hpp>

#include <cstdint>
#include <functional>
#include <optional>
#include <string>

namespace evd::cli {

enum ExitCode : int { kSuccess = 0, kNegative = 1, kUsage = 2, kBudget = 3 };

struct GlobalOptions {
  unsigned threads = 1;
  std::uint64_t seed = 0;
  double budget_seconds = 0;
  std::string format;  // empty: the subcommand's default
};

/// Registers a subcommand; the returned callback runs it after parsing.
using Runner = std::function<int()>;

Runner add_verify(CLI::App& app, const GlobalOptions& global);
Runner add_eval(CLI::App& app, const GlobalOptions& global);
Runner add_bounds(CLI::App& app, const GlobalOptions& global);
Runner add_construct(CLI::App& app, const GlobalOptions& global);
Runner add_stats(CLI::App& app, const GlobalOptions& global);
Runner add_search(CLI::App& app, const GlobalOptions& global);
Runner add_report(CLI::App& app, const GlobalOptions& global);

}  // namespace evd::cli
