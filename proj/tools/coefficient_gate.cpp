// Build step: checks the second-moment coefficient expansion against brute force
// and writes the outcome into a header the CLI reports under --version.
// A failing check exits non-zero, which fails the build.

#include "evd/error.hpp"
#include "evd/rng.hpp"
#include "evd/stats.hpp"

#include <fstream>
#include <iostream>

int main(int argc, char** argv) {
  if (argc != 2) {
    std::cerr << "usage: coefficient_gate <output header>\n";
    return 2;
  }
  constexpr std::uint64_t kSeed = 0x5eed;
  constexpr int kPerShape = 20;
  int checked = 0;
  int failed = 0;
  std::string first_failure;
  for (std::int64_t n = 1; n <= 8; ++n)
    for (std::int64_t m = 1; m <= 3; ++m)
      for (int trial = 0; trial < kPerShape; ++trial) {
        const std::int64_t k = 1 + trial % 2;
        evd::CounterRng rng(kSeed, static_cast<std::uint64_t>((n * 4 + m) * 64 + trial));
        std::vector<evd::Element<evd::Integer>> entries(static_cast<std::size_t>(n));
        for (auto& e : entries)
          for (std::int64_t c = 0; c < k; ++c) e.coords.push_back(rng.between(evd::Integer(0), evd::Integer(1000)));
        const evd::Sequence seq(evd::ProblemParams(n, k, m, evd::Rational(1)), std::move(entries));
        ++checked;
        try {
          const auto report = evd::stats::coefficient_report(seq);
          if (!report.holds() || report.shapes.front().coefficient != 0) {
            ++failed;
            if (first_failure.empty()) first_failure = seq.params().describe();
          }
        } catch (const evd::Error& e) {
          ++failed;
          if (first_failure.empty()) first_failure = seq.params().describe() + ": " + e.what();
        }
      }

  const bool pass = failed == 0;
  std::ofstream out(argv[1]);
  out << "#pragma once\n\n"
      << "inline constexpr bool kCoefficientGatePassed = " << (pass ? "true" : "false") << ";\n"
      << "inline constexpr const char* kCoefficientGateSummary = \"" << (pass ? "pass" : "fail") << " ("
      << (checked - failed) << "/" << checked << " sequences, n <= 8, m <= 3, k <= 2)\";\n";
  if (!out) {
    std::cerr << "cannot write " << argv[1] << "\n";
    return 2;
  }
  if (!pass) {
    std::cerr << "coefficient identity gate failed on " << failed << " of " << checked << " sequences; first: "
              << first_failure << "\n";
    return 1;
  }
  std::cout << "coefficient identity gate: pass (" << checked << " sequences)\n";
  return 0;
}
