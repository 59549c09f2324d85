#include "evd/search.hpp"

#include "evd/error.hpp"
#include "evd/parallel.hpp"

#include <json.hpp>

#include <algorithm>
#include <atomic>
#include <limits>
#include <queue>
#include <unordered_map>

namespace evd::search {

namespace {

using Clock = std::chrono::steady_clock;
using Value = std::vector<std::int64_t>;

struct ValueHash {
  std::size_t operator()(const Value& v) const noexcept {
    std::uint64_t h = v.size();
    for (auto x : v) h = hash_combine(h, static_cast<std::uint64_t>(x));
    return static_cast<std::size_t>(h);
  }
};

/// Shared, read-only description of one feasible() call.
struct Problem {
  std::int64_t n;
  std::size_t k;
  std::size_t m;
  std::int64_t cap;
  bool strict;
  bool pruning;
  bool empty_set;
  std::vector<Value> candidates;  // [0, M]^k in lexicographic order
};

struct Shared {
  std::atomic<std::uint64_t> winner{std::numeric_limits<std::uint64_t>::max()};
  std::atomic<std::uint64_t> nodes{0};
  std::uint64_t max_nodes = 0;
  std::optional<Clock::time_point> deadline;
};

struct Aborted {};

/// Incremental DFS state for one top-level branch. Every subset of the current
/// prefix with size <= cap is stored with its ESP table; values of members of
/// size >= m live in a counted map.
class Walker {
 public:
  Walker(const Problem& problem, Shared& shared, std::uint64_t branch)
      : p_(problem), shared_(shared), branch_(branch), stride_(p_.k * (p_.m + 1)) {
    sizes_.push_back(0);
    esp_.assign(stride_, 0);
    for (std::size_t c = 0; c < p_.k; ++c) esp_[c * (p_.m + 1)] = 1;
    // Never rolled back: the empty set is part of every prefix.
    if (p_.empty_set) values_.emplace(Value(p_.k, 0), 1);
  }

  std::uint64_t nodes() const noexcept { return nodes_; }

  /// Fills `chosen` with the first witness whose first entry is the branch candidate.
  bool run(std::vector<std::size_t>& chosen) {
    chosen.clear();
    if (!extend(branch_)) return false;
    chosen.push_back(branch_);
    return descend(chosen);
  }

 private:
  bool descend(std::vector<std::size_t>& chosen) {
    if (static_cast<std::int64_t>(chosen.size()) == p_.n) return collisions_ == 0;
    const std::size_t total = p_.candidates.size();
    const std::size_t start = chosen.back() + (p_.strict ? 1 : 0);
    const std::size_t left = static_cast<std::size_t>(p_.n) - chosen.size();
    const std::size_t stop = p_.strict ? total - left + 1 : total;
    for (std::size_t c = start; c < stop; ++c) {
      const auto mark = mark_state();
      if (!extend(c)) continue;
      chosen.push_back(c);
      if (descend(chosen)) return true;
      chosen.pop_back();
      rollback(mark);
    }
    return false;
  }

  struct Mark {
    std::size_t records;
    std::size_t inserted;
    std::uint64_t collisions;
  };

  Mark mark_state() const { return {sizes_.size(), inserted_.size(), collisions_}; }

  void rollback(const Mark& mark) {
    sizes_.resize(mark.records);
    esp_.resize(mark.records * stride_);
    while (inserted_.size() > mark.inserted) {
      auto it = values_.find(inserted_.back());
      if (--it->second == 0) values_.erase(it);
      inserted_.pop_back();
    }
    collisions_ = mark.collisions;
  }

  void tick() {
    ++nodes_;
    const auto total = shared_.nodes.fetch_add(1, std::memory_order_relaxed) + 1;
    if (shared_.max_nodes && total > shared_.max_nodes)
      throw Error(ErrorKind::BudgetExceeded, "node budget exhausted");
    if ((nodes_ & 255) == 0) {
      if (shared_.winner.load(std::memory_order_relaxed) < branch_) throw Aborted{};
      if (shared_.deadline && Clock::now() > *shared_.deadline)
        throw Error(ErrorKind::BudgetExceeded, "time budget exhausted");
    }
  }

  /// Appends candidate `c`; false (with state restored) when pruning rejects it.
  bool extend(std::size_t c) {
    tick();
    const Value& a = p_.candidates[c];
    const auto mark = mark_state();
    const std::size_t existing = sizes_.size();
    for (std::size_t r = 0; r < existing; ++r) {
      if (sizes_[r] >= p_.cap) continue;
      const std::size_t size = sizes_[r] + 1;
      sizes_.push_back(static_cast<std::int64_t>(size));
      const std::size_t base = esp_.size();
      esp_.resize(base + stride_);
      const std::int64_t* src = esp_.data() + r * stride_;
      std::int64_t* dst = esp_.data() + base;
      for (std::size_t d = 0; d < p_.k; ++d) {
        const std::int64_t* row = src + d * (p_.m + 1);
        std::int64_t* out = dst + d * (p_.m + 1);
        out[0] = 1;
        for (std::size_t j = 1; j <= p_.m; ++j) out[j] = row[j] + a[d] * row[j - 1];
      }
      if (size < p_.m) continue;
      Value v(p_.k);
      for (std::size_t d = 0; d < p_.k; ++d) v[d] = dst[d * (p_.m + 1) + p_.m];
      auto [it, fresh] = values_.try_emplace(v, 0);
      if (!fresh) {
        if (p_.pruning) {
          rollback(mark);
          return false;
        }
        ++collisions_;
      }
      ++it->second;
      inserted_.push_back(std::move(v));
    }
    return true;
  }

  const Problem& p_;
  Shared& shared_;
  std::uint64_t branch_;
  std::size_t stride_;
  std::vector<std::int64_t> sizes_;
  std::vector<std::int64_t> esp_;
  std::unordered_map<Value, std::uint32_t, ValueHash> values_;
  std::vector<Value> inserted_;
  std::uint64_t collisions_ = 0;
  std::uint64_t nodes_ = 0;
};

struct BranchResult {
  std::optional<std::vector<std::size_t>> chosen;
  std::uint64_t nodes = 0;
};

}  // namespace

bool strict_order_complete(const ProblemParams& params) {
  return params.size_cap() >= params.m() && params.n() >= params.m() + 1;
}

FeasibleResult feasible(const ProblemParams& params, std::int64_t bound, const SearchOptions& options) {
  if (bound < 0) throw Error(ErrorKind::DomainError, "M must be non-negative");
  const auto start_time = Clock::now();

  // Exhaustive search uses 64-bit evaluations: C(n, m) M^m per coordinate must fit.
  if (binomial(params.n(), params.m()) * boost::multiprecision::pow(Integer(bound), static_cast<unsigned>(params.m())) >
      Integer(std::numeric_limits<std::int64_t>::max() / 4))
    throw Error(ErrorKind::BudgetExceeded, "evaluations exceed the 64-bit range of the exhaustive search");
  const Integer per_axis = Integer(bound) + 1;
  const Integer total = boost::multiprecision::pow(per_axis, static_cast<unsigned>(params.k()));
  if (total > Integer(std::uint64_t{1} << 32)) throw Error(ErrorKind::BudgetExceeded, "candidate alphabet too large");

  Problem problem{params.n(),
                  static_cast<std::size_t>(params.k()),
                  static_cast<std::size_t>(params.m()),
                  params.size_cap(),
                  strict_order_complete(params),
                  options.pruning,
                  options.compare_empty_set.value_or(params.m() == 1),
                  {}};
  const auto count = total.convert_to<std::size_t>();
  problem.candidates.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    Value v(problem.k);
    std::size_t rest = i;
    for (std::size_t d = problem.k; d-- > 0;) {
      v[d] = static_cast<std::int64_t>(rest % static_cast<std::size_t>(bound + 1));
      rest /= static_cast<std::size_t>(bound + 1);
    }
    problem.candidates.push_back(std::move(v));
  }

  const std::size_t branches =
      problem.strict ? (count >= static_cast<std::size_t>(params.n()) ? count - static_cast<std::size_t>(params.n()) + 1 : 0)
                     : count;
  Shared shared;
  shared.max_nodes = options.max_nodes;
  if (options.max_seconds > 0)
    shared.deadline = start_time + std::chrono::duration_cast<Clock::duration>(std::chrono::duration<double>(options.max_seconds));

  std::vector<BranchResult> results(branches);
  parallel_for(branches, options.threads, [&](std::size_t b) {
    if (shared.winner.load() < b) return;
    Walker walker(problem, shared, b);
    std::vector<std::size_t> chosen;
    try {
      if (walker.run(chosen)) {
        results[b].chosen = chosen;
        auto current = shared.winner.load();
        while (b < current && !shared.winner.compare_exchange_weak(current, b)) {
        }
      }
    } catch (const Aborted&) {
    }
    results[b].nodes = walker.nodes();
  });

  FeasibleResult out;
  const auto winner = shared.winner.load();
  const std::size_t last = winner == std::numeric_limits<std::uint64_t>::max() ? branches : winner + 1;
  for (std::size_t b = 0; b < last; ++b) out.nodes += results[b].nodes;
  if (winner != std::numeric_limits<std::uint64_t>::max()) {
    std::vector<Element<Integer>> entries;
    for (auto c : *results[winner].chosen) {
      Element<Integer> e;
      for (auto x : problem.candidates[c]) e.coords.emplace_back(x);
      entries.push_back(std::move(e));
    }
    out.witness = Sequence(params, std::move(entries), Integer(bound));
  }
  return out;
}

Strategy parse_strategy(std::string_view text) {
  if (text == "linear") return Strategy::Linear;
  if (text == "bisect") return Strategy::Bisect;
  throw Error(ErrorKind::ParseError, "unknown strategy '" + std::string(text) + "'");
}

std::string_view to_string(SearchStatus status) noexcept {
  switch (status) {
    case SearchStatus::Found: return "found";
    case SearchStatus::InfeasibleUpTo: return "infeasibleUpTo";
    case SearchStatus::BudgetExceeded: return "budgetExceeded";
  }
  return "?";
}

SearchOutcome min_M_search(const ProblemParams& params, std::int64_t max_bound, const SearchOptions& options,
                           Strategy strategy) {
  if (max_bound < 0) throw Error(ErrorKind::DomainError, "Mmax must be non-negative");
  const auto start_time = Clock::now();
  SearchOutcome out{SearchStatus::InfeasibleUpTo, params, max_bound, std::nullopt, std::nullopt, 0, {}, {}};
  SearchOptions local = options;

  // Returns the witness for M, sharing one wall-clock budget across calls.
  auto probe = [&](std::int64_t bound) {
    if (options.max_seconds > 0) {
      local.max_seconds = options.max_seconds - std::chrono::duration<double>(Clock::now() - start_time).count();
      if (local.max_seconds <= 0) throw Error(ErrorKind::BudgetExceeded, "time budget exhausted");
    }
    auto r = feasible(params, bound, local);
    out.nodes += r.nodes;
    if (options.max_nodes) {
      if (out.nodes > options.max_nodes) throw Error(ErrorKind::BudgetExceeded, "node budget exhausted");
      local.max_nodes = options.max_nodes - out.nodes;
    }
    return std::move(r.witness);
  };

  try {
    if (strategy == Strategy::Linear) {
      for (std::int64_t bound = 0; bound <= max_bound; ++bound) {
        if (auto w = probe(bound)) {
          out.status = SearchStatus::Found;
          out.min_bound = bound;
          out.witness = std::move(w);
          break;
        }
      }
    } else {
      std::optional<Sequence> best = probe(0);
      std::int64_t lo = 0;  // largest M known infeasible
      std::int64_t hi = 0;  // smallest M known feasible
      if (!best) {
        std::int64_t step = 1;
        while (true) {
          if (step >= max_bound) {
            best = probe(max_bound);
            if (best) hi = max_bound;
            break;
          }
          best = probe(step);
          if (best) {
            hi = step;
            break;
          }
          lo = step;
          step *= 2;
        }
        if (best) {
          while (hi - lo > 1) {
            const std::int64_t mid = lo + (hi - lo) / 2;
            if (auto w = probe(mid)) {
              hi = mid;
              best = std::move(w);
            } else {
              lo = mid;
            }
          }
        }
      }
      if (best) {
        out.status = SearchStatus::Found;
        out.min_bound = hi;
        out.witness = std::move(best);
      }
    }
  } catch (const Error& e) {
    if (e.kind() != ErrorKind::BudgetExceeded) throw;
    out.status = SearchStatus::BudgetExceeded;
    out.detail = e.what();
  }
  out.wall_time = Clock::now() - start_time;
  return out;
}

std::string SearchOutcome::to_json(bool include_timing) const {
  nlohmann::ordered_json doc;
  doc["status"] = std::string(search::to_string(status));
  doc["n"] = params.n();
  doc["k"] = params.k();
  doc["m"] = params.m();
  doc["lambda"] = evd::to_string(params.lambda());
  doc["mmax"] = max_bound;
  doc["mmin"] = min_bound ? nlohmann::ordered_json(*min_bound) : nlohmann::ordered_json(nullptr);
  if (witness) {
    auto rows = nlohmann::ordered_json::array();
    for (const auto& e : witness->elements()) {
      auto row = nlohmann::ordered_json::array();
      for (const auto& c : e.coords) row.push_back(evd::to_string(c));
      rows.push_back(std::move(row));
    }
    doc["witness"] = std::move(rows);
  } else {
    doc["witness"] = nullptr;
  }
  doc["nodes_expanded"] = nodes;
  if (!detail.empty()) doc["detail"] = detail;
  if (include_timing) doc["wall_time_seconds"] = wall_time.count();
  return doc.dump(2) + "\n";
}

VerificationResult mitm_verify(const Sequence& seq) {
  const auto& p = seq.params();
  if (p.m() != 1 || p.lambda() != 1)
    throw Error(ErrorKind::HypothesisViolated, "meet-in-the-middle check needs m = 1 and lambda = 1");
  if (p.n() > 62) throw Error(ErrorKind::BudgetExceeded, "meet-in-the-middle check limited to n <= 62");
  const auto n = static_cast<std::uint32_t>(p.n());
  const std::uint32_t half = n / 2;
  const auto k = static_cast<std::size_t>(p.k());

  struct Half {
    EvalValue<Integer> sum;
    std::uint64_t mask;
  };
  auto table = [&](std::uint32_t from, std::uint32_t to) {
    std::vector<Half> out{{EvalValue<Integer>(std::vector<Integer>(k, 0)), 0}};
    for (std::uint32_t i = from; i < to; ++i) {
      const std::size_t size = out.size();
      for (std::size_t s = 0; s < size; ++s) {
        Half next = out[s];
        for (std::size_t c = 0; c < k; ++c) next.sum[c] += seq[i][c];
        next.mask |= std::uint64_t{1} << i;
        out.push_back(std::move(next));
      }
    }
    std::sort(out.begin(), out.end(), [](const Half& a, const Half& b) {
      if (a.sum != b.sum) return a.sum < b.sum;
      return a.mask < b.mask;
    });
    return out;
  };
  const auto left = table(0, half);
  const auto right = table(half, n);

  // One stream per left sum, walking the right table in increasing order.
  struct Head {
    EvalValue<Integer> sum;
    std::size_t l;
    std::size_t r;
  };
  auto later = [](const Head& a, const Head& b) {
    if (a.sum != b.sum) return b.sum < a.sum;
    if (a.l != b.l) return a.l > b.l;
    return a.r > b.r;
  };
  auto combine = [&](std::size_t l, std::size_t r) {
    EvalValue<Integer> s = left[l].sum;
    for (std::size_t c = 0; c < k; ++c) s[c] += right[r].sum[c];
    return Head{std::move(s), l, r};
  };
  std::priority_queue<Head, std::vector<Head>, decltype(later)> heap(later);
  for (std::size_t l = 0; l < left.size(); ++l) heap.push(combine(l, 0));

  VerificationResult result;
  std::optional<Head> previous;
  while (!heap.empty()) {
    Head top = heap.top();
    heap.pop();
    if (top.r + 1 < right.size()) heap.push(combine(top.l, top.r + 1));
    const std::uint64_t mask = left[top.l].mask | right[top.r].mask;
    if (mask == 0) continue;  // the empty set is outside the family
    ++result.subsets_examined;
    if (previous && previous->sum == top.sum) {
      auto a = SubsetRef::from_mask(left[previous->l].mask | right[previous->r].mask);
      auto b = SubsetRef::from_mask(mask);
      if (b < a) std::swap(a, b);
      result.status = VerifyStatus::Fail;
      result.witness = std::make_pair(std::move(a), std::move(b));
      return result;
    }
    previous = std::move(top);
  }
  return result;
}

}  // namespace evd::search
