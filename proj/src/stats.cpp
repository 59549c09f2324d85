#include "evd/stats.hpp"

#include "evd/bounds.hpp"
#include "evd/error.hpp"
#include "evd/esp.hpp"
#include "evd/family.hpp"
#include "evd/parallel.hpp"
#include "evd/rng.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>

namespace evd::stats {

namespace {

struct Sums {
  std::vector<Integer> s1;
  std::vector<Integer> s2;
  explicit Sums(std::size_t k) : s1(k, 0), s2(k, 0) {}
  void add(const EvalValue<Integer>& x) {
    for (std::size_t c = 0; c < s1.size(); ++c) {
      s1[c] += x[c];
      s2[c] += x[c] * x[c];
    }
  }
  void merge(const Sums& other) {
    for (std::size_t c = 0; c < s1.size(); ++c) {
      s1[c] += other.s1[c];
      s2[c] += other.s2[c];
    }
  }
};

Rational pow2q(std::int64_t e) {
  if (e >= 0) return Rational(pow2(static_cast<std::uint64_t>(e)));
  return Rational(Integer(1), pow2(static_cast<std::uint64_t>(-e)));
}

std::string join(const std::vector<std::string>& parts) {
  std::string out;
  for (std::size_t i = 0; i < parts.size(); ++i) {
    if (i) out += ';';
    out += parts[i];
  }
  return out;
}

/// T_j for one coordinate: coefficient of s^j l^{2m-2j} in prod (1 + l a + s a^2).
std::vector<Integer> pattern_sums(const Sequence& seq, std::size_t coord, std::int64_t m) {
  const auto mm = static_cast<std::size_t>(m);
  std::vector<std::vector<Integer>> poly(mm + 1, std::vector<Integer>(2 * mm + 1, 0));
  poly[0][0] = 1;
  for (const auto& e : seq.elements()) {
    const Integer& a = e[coord];
    const Integer a2 = a * a;
    for (std::size_t s = mm + 1; s-- > 0;)
      for (std::size_t l = 2 * mm + 1; l-- > 0;) {
        if (s > 0) poly[s][l] += poly[s - 1][l] * a2;
        if (l > 0) poly[s][l] += poly[s][l - 1] * a;
      }
  }
  std::vector<Integer> out(mm + 1);
  for (std::size_t j = 0; j <= mm; ++j) out[j] = poly[j][2 * mm - 2 * j];
  return out;
}

}  // namespace

MomentReport exact_moments(const Sequence& seq, const Rational& lambda, std::int64_t min_size,
                           const StatsOptions& options) {
  const auto& p = seq.params();
  if (min_size < 0) throw Error(ErrorKind::InvalidArgument, "minimum size must be non-negative");
  if (lambda <= 0 || lambda > 1) throw Error(ErrorKind::DomainError, "lambda must lie in (0, 1]");
  const std::int64_t cap = size_cap(p.n(), lambda);
  if (min_size > cap) throw Error(ErrorKind::DegenerateFamily, "no subset sizes between the minimum and the cap");
  const Integer count = family_size(p.n(), lambda, min_size);
  if (count > options.max_subsets)
    throw Error(ErrorKind::BudgetExceeded, "family of " + to_string(count) + " subsets exceeds the enumeration budget");
  const FamilyLayout layout(p.n(), min_size, cap);
  const auto blocks = layout.blocks();
  const auto k = static_cast<std::size_t>(p.k());
  std::vector<Sums> per_block(blocks.size(), Sums(k));
  parallel_for(blocks.size(), options.threads, [&](std::size_t b) {
    walk_block(seq, static_cast<std::size_t>(p.m()), blocks[b],
               [&](std::span<const std::uint32_t>, const EspState<Integer>& state) {
                 per_block[b].add(state.top());
                 return true;
               });
  });
  Sums total(k);
  for (const auto& s : per_block) total.merge(s);

  MomentReport r;
  r.family_count = count;
  r.sigma2 = 0;
  for (std::size_t c = 0; c < k; ++c) {
    const Rational mu(total.s1[c], count);
    r.mu.push_back(mu);
    r.sigma2 += Rational(total.s2[c], count) - mu * mu;
  }
  return r;
}

CoefficientReport coefficient_report(const Sequence& seq, const StatsOptions& options) {
  const auto& p = seq.params();
  if (p.lambda() != 1) throw Error(ErrorKind::HypothesisViolated, "the coefficient identity is stated for lambda = 1");
  const std::int64_t n = p.n();
  const std::int64_t m = p.m();
  const auto moments = exact_moments(seq, Rational(1), 0, options);

  CoefficientReport r;
  r.lhs = moments.sigma2 * Rational(moments.family_count);
  r.rhs = 0;
  std::vector<Integer> totals(static_cast<std::size_t>(m) + 1, 0);
  for (std::size_t c = 0; c < static_cast<std::size_t>(p.k()); ++c) {
    const auto t = pattern_sums(seq, c, m);
    for (std::size_t j = 0; j < t.size(); ++j) totals[j] += t[j];
  }
  for (std::int64_t j = 0; j <= m; ++j) {
    ShapeTerm term;
    term.j = j;
    term.multiplicity = binomial(2 * m - 2 * j, m - j);
    // Three-term form before simplification, so the j = 0 cancellation is computed.
    const Rational raw = pow2q(n - 2 * m + j) - 2 * pow2q(n - m) * pow2q(-m) + pow2q(n) * pow2q(-2 * m);
    term.coefficient = Rational(term.multiplicity) * raw;
    if (term.coefficient != Rational(term.multiplicity) * pow2q(n - 2 * m) * Rational(pow2(j) - 1))
      throw Error(ErrorKind::IdentityViolated, "coefficient closed form disagrees with its expansion");
    term.pattern_sum = totals[static_cast<std::size_t>(j)];
    r.rhs += term.coefficient * Rational(term.pattern_sum);
    r.shapes.push_back(std::move(term));
  }
  return r;
}

CoefficientReport coefficient_identity(const Sequence& seq, const StatsOptions& options) {
  auto r = coefficient_report(seq, options);
  if (!r.holds())
    throw Error(ErrorKind::IdentityViolated,
                "second-moment expansion failed: lhs " + to_string(r.lhs) + " != rhs " + to_string(r.rhs));
  return r;
}

MomentReport allones_exact(std::int64_t n, std::int64_t m, const Rational& lambda) {
  const ProblemParams p(n, 1, m, lambda);
  const std::int64_t cap = p.size_cap();
  Integer count = 0;
  Integer s1 = 0;
  Integer s2 = 0;
  for (std::int64_t i = 0; i <= cap; ++i) {
    const Integer w = binomial(n, i);
    const Integer v = binomial(i, m);
    count += w;
    s1 += w * v;
    s2 += w * v * v;
  }
  MomentReport r;
  r.family_count = count;
  const Rational mu(s1, count);
  r.mu.push_back(mu);
  r.sigma2 = Rational(s2, count) - mu * mu;
  return r;
}

MomentReport montecarlo_moments(const Sequence& seq, const Rational& lambda, std::uint64_t samples,
                                std::uint64_t seed, std::int64_t min_size, unsigned threads) {
  if (samples < 2) throw Error(ErrorKind::InvalidArgument, "Monte Carlo needs at least two samples");
  const auto& p = seq.params();
  const std::int64_t n = p.n();
  if (lambda <= 0 || lambda > 1) throw Error(ErrorKind::DomainError, "lambda must lie in (0, 1]");
  const std::int64_t cap = size_cap(n, lambda);
  if (min_size < 0 || min_size > cap) throw Error(ErrorKind::DegenerateFamily, "empty sampling family");

  // cumulative[i] = sum of C(n, s) for s in [min_size, min_size + i].
  std::vector<Integer> cumulative;
  Integer running = 0;
  for (std::int64_t s = min_size; s <= cap; ++s) {
    running += binomial(n, s);
    cumulative.push_back(running);
  }
  const Integer family = running;

  const auto k = static_cast<std::size_t>(p.k());
  const auto m = static_cast<std::size_t>(p.m());
  constexpr std::uint64_t kChunks = 64;
  const std::uint64_t chunks = std::min<std::uint64_t>(kChunks, samples);
  std::vector<Sums> per_chunk(chunks, Sums(k));
  parallel_for(chunks, threads, [&](std::size_t chunk) {
    const std::uint64_t begin = samples * chunk / chunks;
    const std::uint64_t end = samples * (chunk + 1) / chunks;
    std::vector<std::uint32_t> perm(static_cast<std::size_t>(n));
    for (std::uint64_t s = begin; s < end; ++s) {
      CounterRng rng(seed, s);
      const Integer u = rng.between(Integer(0), family - 1);
      const auto pos = std::upper_bound(cumulative.begin(), cumulative.end(), u) - cumulative.begin();
      const auto size = static_cast<std::size_t>(min_size + pos);
      std::iota(perm.begin(), perm.end(), 0u);
      EspState<Integer> state(k, m);
      for (std::size_t t = 0; t < size; ++t) {
        const auto r = t + static_cast<std::size_t>(rng.below(static_cast<std::uint64_t>(n) - t));
        std::swap(perm[t], perm[r]);
        state.absorb(seq[perm[t]]);
      }
      per_chunk[chunk].add(state.top());
    }
  });
  Sums total(k);
  for (const auto& c : per_chunk) total.merge(c);

  MomentReport r;
  r.mode = MomentMode::MonteCarlo;
  r.family_count = family;
  r.samples = samples;
  r.seed = seed;
  r.sigma2 = 0;
  const Integer count(samples);
  for (std::size_t c = 0; c < k; ++c) {
    const Rational mean(total.s1[c], count);
    r.mu.push_back(mean);
    const Rational var = (Rational(total.s2[c]) - mean * Rational(total.s1[c])) / Rational(count - 1);
    r.sigma2 += var;
    r.stderr_mu.push_back(boost::multiprecision::sqrt(to_real(var) / to_real(count)));
  }
  return r;
}

BoundComparison bound_comparison(std::int64_t n, std::int64_t m, const Rational& lambda) {
  BoundComparison cmp;
  cmp.n = n;
  cmp.m = m;
  cmp.lambda = lambda;
  cmp.sigma2 = allones_exact(n, m, lambda).sigma2;
  cmp.bound = bounds::allones_variance_bound(n, m, lambda).value;
  cmp.ratio = to_real(cmp.sigma2) / cmp.bound;
  return cmp;
}

std::string csv_header() { return "op,n,k,m,lambda,mu,sigma2,bound,ratio,samples,stderr,seed\n"; }

std::string to_csv_line(const CsvRow& row) {
  std::ostringstream out;
  out << row.op << ',' << row.n << ',' << row.k << ',' << row.m << ',' << to_string(row.lambda) << ',' << row.mu
      << ',' << row.sigma2 << ',' << row.bound << ',' << row.ratio << ',' << row.samples << ',' << row.stderr_text
      << ',' << row.seed << '\n';
  return out.str();
}

CsvRow moment_row(std::string op, std::int64_t n, std::int64_t k, std::int64_t m, const Rational& lambda,
                  const MomentReport& report) {
  CsvRow row;
  row.op = std::move(op);
  row.n = n;
  row.k = k;
  row.m = m;
  row.lambda = lambda;
  std::vector<std::string> mu;
  for (const auto& x : report.mu) mu.push_back(to_string(x));
  row.mu = join(mu);
  row.sigma2 = to_string(report.sigma2);
  if (report.mode == MomentMode::MonteCarlo) {
    row.samples = std::to_string(report.samples);
    std::vector<std::string> se;
    for (const auto& x : report.stderr_mu) se.push_back(to_string(x, 20));
    row.stderr_text = join(se);
  }
  if (report.seed) row.seed = std::to_string(*report.seed);
  return row;
}

CsvRow comparison_row(const BoundComparison& cmp) {
  const auto exact = allones_exact(cmp.n, cmp.m, cmp.lambda);
  CsvRow row = moment_row("bound_comparison", cmp.n, 1, cmp.m, cmp.lambda, exact);
  row.bound = to_string(cmp.bound, 30);
  row.ratio = to_string(cmp.ratio, 30);
  return row;
}

}  // namespace evd::stats
