#include "commands.hpp"

#include "evd/bounds.hpp"
#include "evd/construct.hpp"
#include "evd/error.hpp"
#include "evd/esp.hpp"
#include "evd/io.hpp"
#include "evd/report.hpp"
#include "evd/search.hpp"
#include "evd/stats.hpp"
#include "evd/verify.hpp"

#include <json.hpp>

#include <iostream>
#include <memory>
#include <sstream>

namespace evd::cli {

namespace {

using json = nlohmann::ordered_json;

std::string format_or(const GlobalOptions& g, const char* fallback) { return g.format.empty() ? fallback : g.format; }

void emit(const std::string& text) {
  std::cout << text;
  std::cout.flush();
}

/// "10" or an inclusive range "1:40".
std::pair<std::int64_t, std::int64_t> parse_range(const std::string& text) {
  const auto colon = text.find(':');
  auto number = [&](std::string_view s) {
    const Integer z = parse_integer(s);
    if (z > 1000000000) throw Error(ErrorKind::InvalidArgument, "n out of range: " + std::string(s));
    return z.convert_to<std::int64_t>();
  };
  if (colon == std::string::npos) {
    const auto v = number(text);
    return {v, v};
  }
  const auto lo = number(std::string_view(text).substr(0, colon));
  const auto hi = number(std::string_view(text).substr(colon + 1));
  if (hi < lo) throw Error(ErrorKind::InvalidArgument, "empty range " + text);
  return {lo, hi};
}

std::string subset_cell(const SubsetRef& s) {
  std::string out;
  for (auto i : s.indices()) {
    if (!out.empty()) out += ';';
    out += std::to_string(i);
  }
  return out;
}

template <class Scalar>
std::string tuple_cell(const Tuple<Scalar>& t) {
  std::string out;
  for (std::size_t c = 0; c < t.dim(); ++c) {
    if (c) out += ';';
    out += to_string(t[c]);
  }
  return out;
}

template <class Scalar>
json tuple_json(const Tuple<Scalar>& t) {
  json out = json::array();
  for (const auto& c : t.coords) out.push_back(to_string(c));
  return out;
}

json subset_json(const SubsetRef& s) { return json(s.indices()); }

SubsetRef parse_subset(const std::string& text) {
  std::vector<std::uint32_t> idx;
  std::string token;
  std::istringstream in(text);
  while (std::getline(in, token, ',')) {
    if (token.empty()) continue;
    const Integer z = parse_integer(token);
    if (z < 1 || z > std::numeric_limits<std::uint32_t>::max())
      throw Error(ErrorKind::IndexOutOfRange, "subset index out of range: " + token);
    idx.push_back(z.convert_to<std::uint32_t>());
  }
  std::sort(idx.begin(), idx.end());
  if (std::adjacent_find(idx.begin(), idx.end()) != idx.end())
    throw Error(ErrorKind::InvalidArgument, "subset repeats an index");
  return SubsetRef(std::move(idx));
}

template <class Scalar>
std::string verification_text(const BasicSequence<Scalar>& seq, const VerificationResult& r, const std::string& format) {
  if (format == "json") {
    json doc;
    doc["status"] = r.passed() ? "pass" : "fail";
    doc["subsets_examined"] = r.subsets_examined;
    if (r.witness) {
      doc["witness"] = json::array({subset_json(r.witness->first), subset_json(r.witness->second)});
      doc["evaluations"] =
          json::array({tuple_json(eval_subset(seq, r.witness->first)), tuple_json(eval_subset(seq, r.witness->second))});
    } else {
      doc["witness"] = nullptr;
    }
    return doc.dump(2) + "\n";
  }
  std::string out = "status,subsets_examined,witness_a,witness_b,value_a,value_b\n";
  out += std::string(r.passed() ? "pass" : "fail") + "," + std::to_string(r.subsets_examined) + ",";
  if (r.witness)
    out += subset_cell(r.witness->first) + "," + subset_cell(r.witness->second) + "," +
           tuple_cell(eval_subset(seq, r.witness->first)) + "," + tuple_cell(eval_subset(seq, r.witness->second));
  else
    out += ",,,";
  return out + "\n";
}

}  // namespace

Runner add_verify(CLI::App& app, const GlobalOptions& global) {
  struct Opts {
    std::string in;
    std::string mode = "integer";
    bool two_pass = false;
    bool mitm = false;
    std::size_t memory_budget = std::size_t{1} << 30;
  };
  auto o = std::make_shared<Opts>();
  auto* sub = app.add_subcommand("verify", "Check that all family evaluations are distinct");
  sub->add_option("--in", o->in, "Sequence file ('-' for stdin)")->required();
  sub->add_option("--mode", o->mode, "integer: values differ; real: values at distance >= 1")
      ->check(CLI::IsMember({"integer", "real"}));
  sub->add_flag("--two-pass", o->two_pass, "Digest-and-sort mode (16 bytes per subset)");
  sub->add_flag("--mitm", o->mitm, "Meet-in-the-middle check (m = 1, lambda = 1 only)");
  sub->add_option("--memory-budget", o->memory_budget, "Bytes available to the value table");
  return [o, &global] {
    const auto doc = read_sequence_file(o->in);
    VerifyOptions opts;
    opts.threads = global.threads;
    opts.two_pass = o->two_pass;
    opts.memory_budget = o->memory_budget;
    const auto mode = o->mode == "real" ? VerifyMode::RealSpacing : VerifyMode::IntegerExact;
    const auto format = format_or(global, "csv");
    VerificationResult r;
    std::string text;
    if (doc.integral()) {
      const auto seq = doc.to_sequence();
      r = o->mitm ? search::mitm_verify(seq) : verify_distinct(seq, mode, opts);
      text = verification_text(seq, r, format);
    } else {
      if (o->mitm) throw Error(ErrorKind::InvalidArgument, "--mitm needs an integer sequence");
      const auto seq = doc.to_rational_sequence();
      r = verify_distinct(seq, mode, opts);
      text = verification_text(seq, r, format);
    }
    emit(text);
    if (r.witness)
      std::cerr << "evd: subsets " << r.witness->first.str() << " and " << r.witness->second.str()
                << (mode == VerifyMode::RealSpacing ? " are closer than 1\n" : " share an evaluation\n");
    return r.passed() ? kSuccess : kNegative;
  };
}

Runner add_eval(CLI::App& app, const GlobalOptions& global) {
  struct Opts {
    std::string in;
    std::string subset;
  };
  auto o = std::make_shared<Opts>();
  auto* sub = app.add_subcommand("eval", "Evaluate e^m on one subset");
  sub->add_option("--in", o->in, "Sequence file ('-' for stdin)")->required();
  sub->add_option("--subset", o->subset, "Comma-separated 1-based indices")->required();
  return [o, &global] {
    const auto doc = read_sequence_file(o->in);
    const auto subset = parse_subset(o->subset);
    std::string value;
    json value_json;
    if (doc.integral()) {
      const auto v = eval_subset(doc.to_sequence(), subset);
      value = tuple_cell(v);
      value_json = tuple_json(v);
    } else {
      const auto v = eval_subset(doc.to_rational_sequence(), subset);
      value = tuple_cell(v);
      value_json = tuple_json(v);
    }
    if (format_or(global, "csv") == "json") {
      json out;
      out["subset"] = subset_json(subset);
      out["value"] = value_json;
      emit(out.dump(2) + "\n");
    } else {
      emit("subset,value\n" + subset_cell(subset) + "," + value + "\n");
    }
    return kSuccess;
  };
}

Runner add_bounds(CLI::App& app, const GlobalOptions& global) {
  struct Opts {
    std::string n = "10";
    std::int64_t k = 1;
    std::int64_t m = 1;
    std::string lambda = "1";
    std::string bound;
    std::int64_t constants = 0;
  };
  auto o = std::make_shared<Opts>();
  auto* sub = app.add_subcommand("bounds", "Closed-form lower and upper bounds on M");
  sub->add_option("--n", o->n, "Length, or an inclusive range a:b");
  sub->add_option("--k", o->k, "Dimension")->check(CLI::PositiveNumber);
  sub->add_option("--m", o->m, "Degree")->check(CLI::PositiveNumber);
  sub->add_option("--lambda", o->lambda, "Family size ratio, e.g. 3/10");
  sub->add_option("--bound", o->bound, "M, for the upper bound on the variance of M-bounded sequences");
  sub->add_option("--constants", o->constants, "Print the constants table for m = 1..N instead")
      ->check(CLI::PositiveNumber);
  return [o, &global] {
    const auto format = format_or(global, "csv");
    if (o->constants > 0) {
      const auto rows = bounds::constants_table(o->constants);
      if (format == "json") {
        json out = json::array();
        for (const auto& r : rows)
          out.push_back({{"m", r.m},
                         {"c_m", to_string(r.c_m, 30)},
                         {"c_1m1", to_string(r.c_1m1, 30)},
                         {"c_1m1_from_theorem", to_string(r.c_1m1_from_theorem, 30)}});
        emit(out.dump(2) + "\n");
      } else {
        std::string text = "m,c_m,c_1m1,c_1m1_from_theorem\n";
        for (const auto& r : rows)
          text += std::to_string(r.m) + "," + to_string(r.c_m, 30) + "," + to_string(r.c_1m1, 30) + "," +
                  to_string(r.c_1m1_from_theorem, 30) + "\n";
        emit(text);
      }
      return kSuccess;
    }
    const auto [lo, hi] = parse_range(o->n);
    const Rational lambda = parse_rational(o->lambda);
    std::optional<Integer> bound;
    if (!o->bound.empty()) bound = parse_integer(o->bound);
    std::vector<bounds::BoundReport> reports;
    for (std::int64_t n = lo; n <= hi; ++n) {
      auto batch = bounds::standard_reports(ProblemParams(n, o->k, o->m, lambda), bound);
      reports.insert(reports.end(), batch.begin(), batch.end());
    }
    if (format == "json") {
      json out = json::array();
      for (const auto& r : reports) {
        json row;
        row["name"] = r.name;
        row["n"] = r.n;
        row["k"] = r.k;
        row["m"] = r.m;
        row["lambda"] = to_string(r.lambda);
        row["side"] = std::string(bounds::to_string(r.side));
        row["asymptotic"] = r.asymptotic;
        row["value"] = to_string(r.value, 50);
        row["value_log2"] = to_string(r.log2_value(), 30);
        if (r.exact) row["exact"] = to_string(*r.exact);
        if (r.tau) row["tau"] = *r.tau;
        out.push_back(std::move(row));
      }
      emit(out.dump(2) + "\n");
    } else {
      emit(bounds::to_csv(reports));
    }
    return kSuccess;
  };
}

Runner add_construct(CLI::App& app, const GlobalOptions& global) {
  struct Opts {
    std::string kind;
    std::int64_t n = 0;
    std::int64_t k = 1;
    std::int64_t m = 2;
    std::string lambda = "1";
    std::string epsilon = "1/2";
    std::string bound;
    std::int64_t retries = 100;
    std::optional<std::int64_t> overshoot;
    std::string out;
    std::string log;
  };
  auto o = std::make_shared<Opts>();
  auto* sub = app.add_subcommand("construct", "Build an evaluation-distinct sequence");
  sub->add_option("--kind", o->kind, "explicit-real, explicit-integer or probabilistic")
      ->required()
      ->check(CLI::IsMember({"explicit-real", "explicit-integer", "probabilistic"}));
  sub->add_option("--n", o->n, "Length")->required()->check(CLI::PositiveNumber);
  sub->add_option("--k", o->k, "Dimension (probabilistic only)")->check(CLI::PositiveNumber);
  sub->add_option("--m", o->m, "Degree")->check(CLI::PositiveNumber);
  sub->add_option("--lambda", o->lambda, "Family size ratio");
  sub->add_option("--epsilon", o->epsilon, "Rational epsilon of the explicit constructions");
  sub->add_option("--bound", o->bound, "Sampling range [1, M] (probabilistic)");
  sub->add_option("--retries", o->retries, "Fresh samples before giving up")->check(CLI::PositiveNumber);
  sub->add_option("--overshoot", o->overshoot, "Extra entries sampled (default tau_lambda or 1)");
  sub->add_option("--out", o->out, "Write the sequence file here");
  sub->add_option("--log", o->log, "Repair log path (default <out>.repair.json)");
  return [o, &global] {
    const auto kind = parse_construction_kind(o->kind);
    const Rational lambda = parse_rational(o->lambda);
    const ProblemParams params(o->n, o->k, o->m, lambda);
    VerifyOptions vopts;
    vopts.threads = global.threads;
    bool verified = false;
    std::string bound_text;
    Real log2_bound = 0;
    std::optional<RepairLog> log;
    std::string sequence_text;

    if (kind == ConstructionKind::Probabilistic) {
      if (o->bound.empty()) throw Error(ErrorKind::InvalidArgument, "--bound is required for probabilistic");
      ConstructionRecipe recipe;
      recipe.kind = kind;
      recipe.bound = parse_integer(o->bound);
      recipe.seed = global.seed;
      recipe.max_retries = o->retries;
      recipe.overshoot = o->overshoot;
      auto result = construct_probabilistic(params, recipe, global.threads);
      verified = verify_distinct(result.sequence, VerifyMode::IntegerExact, vopts).passed();
      bound_text = to_string(recipe.bound);
      log2_bound = log2(recipe.bound);
      sequence_text = to_json(result.sequence);
      log = std::move(result.log);
    } else {
      if (o->k != 1) throw Error(ErrorKind::InvalidArgument, "explicit constructions are one-dimensional");
      const Rational epsilon = parse_rational(o->epsilon);
      if (kind == ConstructionKind::ExplicitInteger) {
        const auto built = construct_integer(o->n, o->m, epsilon);
        const Sequence seq(params, {built.elements().begin(), built.elements().end()}, built.bound());
        verified = verify_distinct(seq, VerifyMode::IntegerExact, vopts).passed();
        bound_text = to_string(*seq.bound());
        log2_bound = log2(*seq.bound());
        sequence_text = to_json(seq);
      } else {
        const auto built = construct_real(o->n, o->m, epsilon);
        const RationalSequence seq(params, {built.elements().begin(), built.elements().end()});
        verified = verify_distinct(seq, VerifyMode::RealSpacing, vopts).passed();
        bound_text = to_string(seq.max_coordinate());
        log2_bound = log2(to_real(seq.max_coordinate()));
        sequence_text = to_json(seq);
      }
    }

    if (!o->out.empty()) write_text(o->out, sequence_text);
    if (log && !(o->out.empty() && o->log.empty()))
      write_text(o->log.empty() ? o->out + ".repair.json" : o->log, log->to_json());

    const std::string rate = to_string(log2_bound / Real(o->n), 20);
    const auto format = format_or(global, "csv");
    if (format == "json") {
      json out;
      out["kind"] = std::string(to_string(kind));
      out["n"] = o->n;
      out["k"] = o->k;
      out["m"] = o->m;
      out["lambda"] = to_string(lambda);
      out["bound"] = bound_text;
      out["log2_bound_per_n"] = rate;
      out["verified"] = verified;
      if (log) {
        out["attempts"] = log->attempts.size();
        out["removals"] = log->removals();
        out["repair"] = json::parse(log->to_json());
      }
      if (o->out.empty()) out["sequence"] = json::parse(sequence_text);
      emit(out.dump(2) + "\n");
    } else {
      std::string text = "kind,n,k,m,lambda,bound,log2_bound_per_n,verified,attempts,removals,seed\n";
      text += std::string(to_string(kind)) + "," + std::to_string(o->n) + "," + std::to_string(o->k) + "," +
              std::to_string(o->m) + "," + to_string(lambda) + "," + bound_text + "," + rate + "," +
              (verified ? "true" : "false") + ",";
      if (log)
        text += std::to_string(log->attempts.size()) + "," + std::to_string(log->removals()) + "," +
                std::to_string(global.seed);
      else
        text += ",,";
      emit(text + "\n");
    }
    return verified ? kSuccess : kNegative;
  };
}

Runner add_stats(CLI::App& app, const GlobalOptions& global) {
  struct Opts {
    std::string op;
    std::string in;
    std::string n;
    std::int64_t m = 1;
    std::string lambda;
    std::int64_t min_size = 0;
    std::uint64_t samples = 10000;
  };
  auto o = std::make_shared<Opts>();
  auto* sub = app.add_subcommand("stats", "Moments of e^m over subset families");
  sub->add_option("--op", o->op, "exact, coefficient, allones, montecarlo or compare")
      ->required()
      ->check(CLI::IsMember({"exact", "coefficient", "allones", "montecarlo", "compare"}));
  sub->add_option("--in", o->in, "Sequence file (exact, coefficient, montecarlo)");
  sub->add_option("--n", o->n, "Length or range a:b (allones, compare)");
  sub->add_option("--m", o->m, "Degree (allones, compare)")->check(CLI::PositiveNumber);
  sub->add_option("--lambda", o->lambda, "Family size ratio (default: the file's)");
  sub->add_option("--min-size", o->min_size, "Smallest subset size in the family")->check(CLI::NonNegativeNumber);
  sub->add_option("--samples", o->samples, "Monte Carlo samples")->check(CLI::Range(2ULL, 1ULL << 40));
  return [o, &global] {
    const auto format = format_or(global, "csv");
    std::vector<stats::CsvRow> rows;
    json detail = json::array();
    int code = kSuccess;

    if (o->op == "exact" || o->op == "coefficient" || o->op == "montecarlo") {
      if (o->in.empty()) throw Error(ErrorKind::InvalidArgument, "--in is required for --op " + o->op);
      const auto seq = read_sequence_file(o->in).to_sequence();
      const auto& p = seq.params();
      const Rational lambda = o->lambda.empty() ? p.lambda() : parse_rational(o->lambda);
      stats::StatsOptions opts;
      opts.threads = global.threads;
      if (o->op == "exact") {
        rows.push_back(stats::moment_row("exact_moments", p.n(), p.k(), p.m(), lambda,
                                         stats::exact_moments(seq, lambda, o->min_size, opts)));
      } else if (o->op == "montecarlo") {
        rows.push_back(stats::moment_row(
            "montecarlo_moments", p.n(), p.k(), p.m(), lambda,
            stats::montecarlo_moments(seq, lambda, o->samples, global.seed, o->min_size, global.threads)));
      } else {
        const auto report = stats::coefficient_report(seq, opts);
        const auto moments = stats::exact_moments(seq, Rational(1), 0, opts);
        auto row = stats::moment_row("coefficient_identity", p.n(), p.k(), p.m(), Rational(1), moments);
        row.ratio = report.lhs == 0 ? (report.rhs == 0 ? "1" : "") : to_string(Rational(report.rhs / report.lhs));
        rows.push_back(row);
        json shapes = json::array();
        for (const auto& s : report.shapes)
          shapes.push_back({{"j", s.j},
                            {"multiplicity", to_string(s.multiplicity)},
                            {"coefficient", to_string(s.coefficient)},
                            {"pattern_sum", to_string(s.pattern_sum)}});
        detail.push_back({{"lhs", to_string(report.lhs)},
                          {"rhs", to_string(report.rhs)},
                          {"holds", report.holds()},
                          {"shapes", shapes}});
        if (!report.holds()) {
          std::cerr << "evd: coefficient identity violated: lhs " << to_string(report.lhs) << " != rhs "
                    << to_string(report.rhs) << "\n";
          code = kNegative;
        }
      }
    } else {
      if (o->n.empty() || o->lambda.empty())
        throw Error(ErrorKind::InvalidArgument, "--n and --lambda are required for --op " + o->op);
      const auto [lo, hi] = parse_range(o->n);
      const Rational lambda = parse_rational(o->lambda);
      for (std::int64_t n = lo; n <= hi; ++n) {
        if (o->op == "allones")
          rows.push_back(stats::moment_row("allones_exact", n, 1, o->m, lambda, stats::allones_exact(n, o->m, lambda)));
        else
          rows.push_back(stats::comparison_row(stats::bound_comparison(n, o->m, lambda)));
      }
    }

    if (format == "json") {
      json out = json::array();
      for (std::size_t i = 0; i < rows.size(); ++i) {
        const auto& r = rows[i];
        json row = {{"op", r.op},       {"n", r.n},         {"k", r.k},         {"m", r.m},
                    {"lambda", to_string(r.lambda)},        {"mu", r.mu},       {"sigma2", r.sigma2},
                    {"bound", r.bound}, {"ratio", r.ratio}, {"samples", r.samples},
                    {"stderr", r.stderr_text},              {"seed", r.seed}};
        if (i < detail.size()) row["identity"] = detail[i];
        out.push_back(std::move(row));
      }
      emit(out.dump(2) + "\n");
    } else {
      std::string text = stats::csv_header();
      for (const auto& r : rows) text += stats::to_csv_line(r);
      emit(text);
    }
    return code;
  };
}

Runner add_search(CLI::App& app, const GlobalOptions& global) {
  struct Opts {
    std::int64_t n = 0;
    std::int64_t k = 1;
    std::int64_t m = 1;
    std::string lambda = "1";
    std::int64_t mmax = 0;
    std::uint64_t budget_nodes = 0;
    std::string strategy = "linear";
    bool no_pruning = false;
    bool timing = false;
    std::string out;
  };
  auto o = std::make_shared<Opts>();
  auto* sub = app.add_subcommand("search", "Exhaustive search for the least M");
  sub->add_option("--n", o->n, "Length")->required()->check(CLI::PositiveNumber);
  sub->add_option("--k", o->k, "Dimension")->check(CLI::PositiveNumber);
  sub->add_option("--m", o->m, "Degree")->check(CLI::PositiveNumber);
  sub->add_option("--lambda", o->lambda, "Family size ratio");
  sub->add_option("--mmax", o->mmax, "Largest M tried")->required()->check(CLI::NonNegativeNumber);
  sub->add_option("--budget-nodes", o->budget_nodes, "Node budget (0 = unlimited)");
  sub->add_option("--strategy", o->strategy, "linear or bisect")->check(CLI::IsMember({"linear", "bisect"}));
  sub->add_flag("--no-pruning", o->no_pruning, "Check collisions only on complete sequences");
  sub->add_flag("--timing", o->timing, "Include wall time in the JSON record");
  sub->add_option("--out", o->out, "Write the witness sequence file here");
  return [o, &global] {
    const ProblemParams params(o->n, o->k, o->m, parse_rational(o->lambda));
    search::SearchOptions opts;
    opts.threads = global.threads;
    opts.max_nodes = o->budget_nodes;
    opts.max_seconds = global.budget_seconds;
    opts.pruning = !o->no_pruning;
    const auto outcome = search::min_M_search(params, o->mmax, opts, search::parse_strategy(o->strategy));
    if (!o->out.empty() && outcome.witness) write_sequence_file(o->out, *outcome.witness);
    if (format_or(global, "json") == "csv") {
      std::string text = "op,n,k,m,lambda,status,mmin,mmin_log2,nodes\n";
      text += "min_M_search," + std::to_string(o->n) + "," + std::to_string(o->k) + "," + std::to_string(o->m) + "," +
              to_string(params.lambda()) + "," + std::string(search::to_string(outcome.status)) + ",";
      if (outcome.min_bound) {
        text += std::to_string(*outcome.min_bound) + ",";
        if (*outcome.min_bound > 0) text += to_string(log2(Integer(*outcome.min_bound)), 20);
      } else {
        text += ",";
      }
      text += "," + std::to_string(outcome.nodes) + "\n";
      emit(text);
    } else {
      emit(outcome.to_json(o->timing));
    }
    if (outcome.status == search::SearchStatus::BudgetExceeded) {
      std::cerr << "evd: " << outcome.detail << "\n";
      return kBudget;
    }
    return outcome.status == search::SearchStatus::Found ? kSuccess : kNegative;
  };
}

Runner add_report(CLI::App& app, const GlobalOptions&) {
  struct Opts {
    std::vector<std::string> in;
    std::string out = "-";
  };
  auto o = std::make_shared<Opts>();
  auto* sub = app.add_subcommand("report", "Outer-join CSV outputs on (n, k, m, lambda)");
  sub->add_option("--in", o->in, "CSV files to merge")->required();
  sub->add_option("--out", o->out, "Merged CSV path ('-' for stdout)");
  return [o] {
    std::vector<std::string> tables;
    for (const auto& path : o->in) tables.push_back(read_text(path));
    write_text(o->out, merge_reports(tables));
    return kSuccess;
  };
}

}  // namespace evd::cli
