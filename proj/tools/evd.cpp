#include "commands.hpp"

#include "coefficient_gate_status.hpp"
#include "evd/error.hpp"
#include "evd/parallel.hpp"

#include <iostream>
#include <map>

namespace {

int exit_code_for(evd::ErrorKind kind) {
  using evd::ErrorKind;
  switch (kind) {
    case ErrorKind::BudgetExceeded:
    case ErrorKind::MemoryBudgetExceeded:
      return evd::cli::kBudget;
    case ErrorKind::RetriesExhausted:
    case ErrorKind::IdentityViolated:
      return evd::cli::kNegative;
    default:
      return evd::cli::kUsage;
  }
}

}  // namespace

int main(int argc, char** argv) {
  using namespace evd::cli;
  CLI::App app{"Distinct evaluations of elementary symmetric polynomials over subset families"};
  app.set_version_flag("--version", std::string("evd 0.1.0\ncoefficient identity gate: ") + kCoefficientGateSummary);
  app.require_subcommand(1);

  GlobalOptions global;
  global.threads = evd::default_threads();
  app.add_option("--threads", global.threads, "Worker threads (default: EVD_THREADS or 1)")
      ->check(CLI::PositiveNumber);
  app.add_option("--seed", global.seed, "Seed for every randomized path");
  app.add_option("--budget-seconds", global.budget_seconds, "Wall-clock budget where supported")
      ->check(CLI::NonNegativeNumber);
  app.add_option("--format", global.format, "Output format")->check(CLI::IsMember({"csv", "json"}));

  std::map<std::string, Runner> runners;
  runners["verify"] = add_verify(app, global);
  runners["eval"] = add_eval(app, global);
  runners["bounds"] = add_bounds(app, global);
  runners["construct"] = add_construct(app, global);
  runners["stats"] = add_stats(app, global);
  runners["search"] = add_search(app, global);
  runners["report"] = add_report(app, global);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kUsage;
  }

  try {
    for (const auto* sub : app.get_subcommands()) return runners.at(sub->get_name())();
  } catch (const evd::Error& e) {
    std::cerr << "evd: " << e.what() << "\n";
    return exit_code_for(e.kind());
  } catch (const std::exception& e) {
    std::cerr << "evd: internal error: " << e.what() << "\n";
    return kUsage;
  }
  return kUsage;
}
