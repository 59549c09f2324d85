#pragma once

#include "evd/numeric.hpp"
#include "evd/sequence.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace evd::stats {

enum class MomentMode { Exact, MonteCarlo };

/// Moments of X = e^m(A) over a subset family. For k > 1, `mu` holds one mean
/// per coordinate and `sigma2` is the sum of the per-coordinate variances.
struct MomentReport {
  std::vector<Rational> mu;
  Rational sigma2;
  Integer family_count;
  MomentMode mode = MomentMode::Exact;
  std::uint64_t samples = 0;
  /// Standard error of each coordinate mean (Monte Carlo only).
  std::vector<Real> stderr_mu;
  std::optional<std::uint64_t> seed;
};

struct StatsOptions {
  unsigned threads = 1;
  /// Largest family exact enumeration will walk before BudgetExceeded.
  std::uint64_t max_subsets = std::uint64_t{1} << 26;
};

/// Exact moments over {A : min_size <= |A| <= floor(lambda n)}; e^m(A) = 0 when |A| < m.
MomentReport exact_moments(const Sequence& seq, const Rational& lambda, std::int64_t min_size,
                           const StatsOptions& options = {});

struct ShapeTerm {
  std::int64_t j = 0;
  Integer multiplicity;  ///< C(2m-2j, m-j)
  Rational coefficient;  ///< multiplicity * 2^{n-2m}(2^j - 1)
  Integer pattern_sum;   ///< T_j: monomials with j squared and 2m-2j linear distinct factors
};

struct CoefficientReport {
  std::vector<ShapeTerm> shapes;  ///< j = 0..m; the j = 0 coefficient is computed, not assumed
  Rational lhs;                   ///< sum over all A of (e^m(A) - mu)^2
  Rational rhs;
  bool holds() const { return lhs == rhs; }
};

/// Computes both sides of the second-moment expansion over the full power set;
/// throws IdentityViolated when they differ. HypothesisViolated unless lambda == 1.
CoefficientReport coefficient_identity(const Sequence& seq, const StatsOptions& options = {});
/// Same computation without the throw, for gate reporting.
CoefficientReport coefficient_report(const Sequence& seq, const StatsOptions& options = {});

/// Closed-form moments for the all-ones sequence over sizes 0..floor(lambda n).
MomentReport allones_exact(std::int64_t n, std::int64_t m, const Rational& lambda);

/// Two-stage uniform sampling over sizes min_size..floor(lambda n): size by exact
/// inverse CDF on binomial weights, then a uniform subset by partial Fisher-Yates.
/// Sample i uses generator stream i, so results do not depend on `threads`.
MomentReport montecarlo_moments(const Sequence& seq, const Rational& lambda, std::uint64_t samples,
                                std::uint64_t seed, std::int64_t min_size = 0, unsigned threads = 1);

struct BoundComparison {
  std::int64_t n = 0;
  std::int64_t m = 1;
  Rational lambda;
  Rational sigma2;
  Real bound;
  Real ratio;  ///< sigma2 / bound
};

/// Exact all-ones variance against the closed-form case bound.
BoundComparison bound_comparison(std::int64_t n, std::int64_t m, const Rational& lambda);

/// One CSV row per report with header op,n,k,m,lambda,mu,sigma2,bound,ratio,samples,stderr,seed.
/// Tuples are joined with ';'. Empty cells mean "not applicable".
struct CsvRow {
  std::string op;
  std::int64_t n = 0;
  std::int64_t k = 1;
  std::int64_t m = 1;
  Rational lambda;
  std::string mu;
  std::string sigma2;
  std::string bound;
  std::string ratio;
  std::string samples;
  std::string stderr_text;
  std::string seed;
};

std::string csv_header();
std::string to_csv_line(const CsvRow& row);
CsvRow moment_row(std::string op, std::int64_t n, std::int64_t k, std::int64_t m, const Rational& lambda,
                  const MomentReport& report);
CsvRow comparison_row(const BoundComparison& cmp);

}  // namespace evd::stats
