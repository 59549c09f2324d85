#include "evd/construct.hpp"

#include "evd/bounds.hpp"
#include "evd/error.hpp"
#include "evd/family.hpp"
#include "evd/parallel.hpp"
#include "evd/rng.hpp"
#include "evd/verify.hpp"

#include <json.hpp>

#include <algorithm>
#include <bit>
#include <unordered_map>

namespace evd {

namespace {

void require_explicit_hypotheses(std::int64_t n, std::int64_t m, const Rational& epsilon) {
  if (m < 2) throw Error(ErrorKind::HypothesisViolated, "the explicit construction needs m >= 2");
  if (n < 1) throw Error(ErrorKind::InvalidArgument, "n must be positive");
  if (epsilon <= 0) throw Error(ErrorKind::DomainError, "epsilon must be positive");
}

std::uint64_t pairs(std::uint64_t g) { return g < 2 ? 0 : g * (g - 1) / 2; }

/// Evaluations of the sampled entries grouped by value; only groups with two or
/// more members are kept, each as a list of member masks in rank order.
std::vector<std::vector<std::uint64_t>> collision_groups(const Sequence& sample, std::int64_t cap, unsigned threads) {
  const auto& p = sample.params();
  const FamilyLayout layout(p.n(), p.m(), cap);
  const auto blocks = layout.blocks();
  std::vector<std::vector<std::pair<EvalValue<Integer>, std::uint64_t>>> per_block(blocks.size());
  parallel_for(blocks.size(), threads, [&](std::size_t b) {
    auto& out = per_block[b];
    out.reserve(blocks[b].count);
    walk_block(sample, static_cast<std::size_t>(p.m()), blocks[b],
               [&](std::span<const std::uint32_t> idx, const EspState<Integer>& state) {
                 std::uint64_t mask = 0;
                 for (auto i : idx) mask |= std::uint64_t{1} << (i - 1);
                 out.emplace_back(state.top(), mask);
                 return true;
               });
  });
  std::unordered_map<EvalValue<Integer>, std::vector<std::uint64_t>, TupleHash<Integer>> by_value;
  std::vector<const EvalValue<Integer>*> order;
  for (auto& block : per_block)
    for (auto& [value, mask] : block) {
      auto [it, inserted] = by_value.try_emplace(std::move(value));
      if (inserted) order.push_back(&it->first);
      it->second.push_back(mask);
    }
  std::vector<std::vector<std::uint64_t>> groups;
  for (const auto* value : order) {
    auto& members = by_value.at(*value);
    if (members.size() > 1) groups.push_back(std::move(members));
  }
  return groups;
}

std::uint64_t live_pairs(const std::vector<std::vector<std::uint64_t>>& groups, std::uint64_t dead) {
  std::uint64_t total = 0;
  for (const auto& g : groups) {
    std::uint64_t alive = 0;
    for (auto mask : g) alive += (mask & dead) == 0;
    total += pairs(alive);
  }
  return total;
}

/// Entry whose removal destroys the most colliding pairs; lowest index on ties.
std::uint32_t best_removal(const std::vector<std::vector<std::uint64_t>>& groups, std::uint64_t dead, int width) {
  std::vector<std::uint64_t> gain(static_cast<std::size_t>(width), 0);
  std::vector<std::uint64_t> holders(static_cast<std::size_t>(width));
  for (const auto& g : groups) {
    std::uint64_t alive = 0;
    std::fill(holders.begin(), holders.end(), 0);
    for (auto mask : g) {
      if (mask & dead) continue;
      ++alive;
      for (std::uint64_t b = mask; b; b &= b - 1) ++holders[static_cast<std::size_t>(std::countr_zero(b))];
    }
    if (alive < 2) continue;
    for (int i = 0; i < width; ++i)
      if (holders[i]) gain[i] += pairs(alive) - pairs(alive - holders[i]);
  }
  std::uint32_t best = 0;
  for (int i = 1; i < width; ++i)
    if (gain[i] > gain[best]) best = static_cast<std::uint32_t>(i);
  return best + 1;
}

}  // namespace

std::string_view to_string(ConstructionKind kind) noexcept {
  switch (kind) {
    case ConstructionKind::ExplicitReal: return "explicit-real";
    case ConstructionKind::ExplicitInteger: return "explicit-integer";
    case ConstructionKind::Probabilistic: return "probabilistic";
  }
  return "?";
}

ConstructionKind parse_construction_kind(std::string_view text) {
  for (auto kind : {ConstructionKind::ExplicitReal, ConstructionKind::ExplicitInteger, ConstructionKind::Probabilistic})
    if (text == to_string(kind)) return kind;
  throw Error(ErrorKind::ParseError, "unknown construction kind '" + std::string(text) + "'");
}

RationalSequence construct_real(std::int64_t n, std::int64_t m, const Rational& epsilon) {
  require_explicit_hypotheses(n, m, epsilon);
  const Rational top = rational_pow(2 + epsilon, static_cast<std::uint64_t>(n));
  std::vector<Element<Rational>> entries;
  entries.reserve(static_cast<std::size_t>(n));
  for (std::int64_t i = 1; i <= n; ++i) entries.push_back(Element<Rational>{top - Rational(pow2(i - 1))});
  return RationalSequence(ProblemParams(n, 1, m, Rational(1)), std::move(entries));
}

Sequence construct_integer(std::int64_t n, std::int64_t m, const Rational& epsilon) {
  require_explicit_hypotheses(n, m, epsilon);
  const Integer top = floor(rational_pow(2 + epsilon, static_cast<std::uint64_t>(n)));
  std::vector<Element<Integer>> entries;
  entries.reserve(static_cast<std::size_t>(n));
  for (std::int64_t i = 1; i <= n; ++i) entries.push_back(Element<Integer>{top - pow2(i - 1)});
  Integer bound = entries.front()[0];
  return Sequence(ProblemParams(n, 1, m, Rational(1)), std::move(entries), std::move(bound));
}

std::int64_t default_overshoot(const Rational& lambda) {
  if (lambda < Rational(1, 2)) return bounds::tau_from_entropy(bounds::binary_entropy(lambda));
  return 1;
}

ProbabilisticResult construct_probabilistic(const ProblemParams& params, const ConstructionRecipe& recipe,
                                            unsigned threads) {
  if (recipe.kind != ConstructionKind::Probabilistic)
    throw Error(ErrorKind::InvalidArgument, "recipe is not probabilistic");
  if (recipe.bound < 1) throw Error(ErrorKind::DomainError, "M must be at least 1");
  if (recipe.bound < params.m())
    throw Error(ErrorKind::HypothesisViolated, "M must be at least m for the sampling argument");
  if (recipe.max_retries < 1) throw Error(ErrorKind::InvalidArgument, "retries must be at least 1");
  const std::int64_t t = recipe.overshoot.value_or(default_overshoot(params.lambda()));
  if (t < 0) throw Error(ErrorKind::InvalidArgument, "overshoot must be non-negative");
  const std::int64_t sampled = params.n() + t;
  if (sampled > 64) throw Error(ErrorKind::BudgetExceeded, "n + t exceeds 64 sampled entries");
  const std::int64_t cap = params.size_cap();

  RepairLog log;
  log.seed = recipe.seed;
  log.bound = recipe.bound;
  log.n = params.n();
  log.sampled = sampled;
  log.overshoot = t;
  log.max_retries = recipe.max_retries;

  const ProblemParams sample_params(sampled, params.k(), params.m(), Rational(1));
  for (std::int64_t attempt = 0; attempt < recipe.max_retries; ++attempt) {
    RepairAttempt record;
    record.stream = static_cast<std::uint64_t>(attempt);
    CounterRng rng(recipe.seed, record.stream);
    std::vector<Element<Integer>> entries(static_cast<std::size_t>(sampled));
    for (auto& e : entries)
      for (std::int64_t c = 0; c < params.k(); ++c) e.coords.push_back(rng.between(Integer(1), recipe.bound));
    const Sequence sample(sample_params, entries, recipe.bound);

    std::vector<std::vector<std::uint64_t>> groups;
    if (cap >= params.m()) groups = collision_groups(sample, cap, threads);
    std::uint64_t dead = 0;
    record.colliding_pairs = live_pairs(groups, dead);
    bool overrun = false;
    while (live_pairs(groups, dead) > 0) {
      if (static_cast<std::int64_t>(record.removed.size()) == t) {
        overrun = true;
        break;
      }
      const auto victim = best_removal(groups, dead, static_cast<int>(sampled));
      dead |= std::uint64_t{1} << (victim - 1);
      record.removed.push_back(victim);
    }
    if (overrun) {
      log.attempts.push_back(std::move(record));
      continue;
    }
    // Fewer than t removals: drop surplus entries from the top.
    std::int64_t alive = sampled - std::popcount(dead);
    for (std::int64_t i = sampled; i >= 1 && alive > params.n(); --i) {
      const std::uint64_t bit = std::uint64_t{1} << (i - 1);
      if (dead & bit) continue;
      dead |= bit;
      --alive;
      record.trimmed.push_back(static_cast<std::uint32_t>(i));
    }
    std::vector<Element<Integer>> kept;
    for (std::int64_t i = 0; i < sampled; ++i)
      if (!(dead & (std::uint64_t{1} << i))) kept.push_back(entries[static_cast<std::size_t>(i)]);
    Sequence result(params, std::move(kept), recipe.bound);
    VerifyOptions options;
    options.threads = threads;
    if (!verify_distinct(result, VerifyMode::IntegerExact, options).passed())
      throw Error(ErrorKind::IdentityViolated, "repaired sample failed verification");
    record.accepted = true;
    log.attempts.push_back(std::move(record));
    return {std::move(result), std::move(log)};
  }
  throw Error(ErrorKind::RetriesExhausted, "no collision-free sample after " + std::to_string(recipe.max_retries) +
                                               " attempts; M is likely below the feasible threshold");
}

std::string RepairLog::to_json() const {
  nlohmann::ordered_json doc;
  doc["seed"] = std::to_string(seed);
  doc["bound"] = evd::to_string(bound);
  doc["n"] = n;
  doc["sampled"] = sampled;
  doc["overshoot"] = overshoot;
  doc["max_retries"] = max_retries;
  auto list = nlohmann::ordered_json::array();
  for (const auto& a : attempts) {
    nlohmann::ordered_json entry;
    entry["stream"] = a.stream;
    entry["colliding_pairs"] = a.colliding_pairs;
    entry["removed"] = a.removed;
    entry["trimmed"] = a.trimmed;
    entry["outcome"] = a.accepted ? "accepted" : "overrun";
    list.push_back(std::move(entry));
  }
  doc["attempts"] = std::move(list);
  return doc.dump(2) + "\n";
}

}  // namespace evd
