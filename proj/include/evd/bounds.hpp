#pragma once

#include "evd/numeric.hpp"
#include "evd/params.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace evd::bounds {

enum class Side { Lower, Upper };

std::string_view to_string(Side side) noexcept;

/// A named closed-form bound. `value` always carries at least 50 significant
/// digits; `exact` is set when the bound is rational for these parameters.
/// `asymptotic` marks formulas whose (1+o(1)) factor was dropped.
struct BoundReport {
  std::string name;
  std::int64_t n = 0;
  std::int64_t k = 1;
  std::int64_t m = 1;
  Rational lambda = 1;
  std::optional<Integer> bound_m;
  Side side = Side::Lower;
  bool asymptotic = true;
  Real value;
  std::optional<Rational> exact;
  std::optional<std::int64_t> tau;

  Real log2_value() const { return log2(value); }
};

/// -l log2 l - (1-l) log2 (1-l), with 0 log 0 = 0. DomainError outside [0, 1].
Real binary_entropy(const Rational& lambda);

/// ceil(1 / (4^h - 1)); values within 1e-80 of an integer snap to it first.
std::int64_t tau_from_entropy(const Real& h);
/// 4^{h t} / t, the quantity the overshoot t minimises.
Real overshoot_cost(const Real& h, std::int64_t t);

/// Gamma(k/2 + 1) from factorials: (k/2)! for even k, (2j)! sqrt(pi) / (4^j j!) with j = (k+1)/2 for odd k.
Real gamma_half_plus_one(std::int64_t k);

/// Counting bound: M >= (m! * count^{1/k})^{1/m} / (lambda n), count = #family members of size >= m.
BoundReport pigeonhole_lower(const ProblemParams& params);

/// Variance-method bound for k = 1, lambda = 1: C_m 2^{n/m} / n^{1 - 1/(2m)}.
BoundReport variance_lower_small(std::int64_t n, std::int64_t m);

/// Variance-method bound for general (n, k, m, lambda), three cases split at lambda = 1/2.
BoundReport variance_lower_general(const ProblemParams& params);
/// The constant K with M^{2m} >= K |F|^{2/k} / n^{2m-1}, per case.
Real variance_lower_general_constant(const ProblemParams& params);

/// Upper bound on sigma^2 of an M-bounded evaluation-distinct sequence; exact rational.
BoundReport variance_upper_sequence(const ProblemParams& params, const Integer& bound_m);

/// Upper bound on the variance of e^m over the family for the all-ones sequence.
BoundReport allones_variance_bound(std::int64_t n, std::int64_t m, const Rational& lambda);

/// Second moment of |F| lattice points packed in a k-ball:
/// k Gamma(k/2+1)^{2/k} / (pi (k+2)) * count^{2/k + 1}.
Real ball_packing_second_moment(std::int64_t k, const Integer& count);

/// Sample-and-repair bound C_{lambda,k} m 4^{h(lambda) n / k}; needs lambda < 1/2.
BoundReport prob_upper(const ProblemParams& params);
/// C_{lambda,k} = (4^{h tau} / tau)^{1/k}.
Real prob_upper_constant(const Rational& lambda, std::int64_t k);

/// m * 4^{n/k}; exact whenever k divides 2n.
BoundReport prob_upper_full(std::int64_t n, std::int64_t m, std::int64_t k);

struct ConstantsRow {
  std::int64_t m = 1;
  Real c_m;               ///< 2^{1-1/m} ((m-1)!)^{1/m} / 3^{1/(2m)}
  Real c_1m1;             ///< (m!)^{1/m} / (3(4m^2+1))^{1/(2m)}, as displayed next to C_m
  Real c_1m1_from_theorem;  ///< K^{1/(2m)} of variance_lower_general at k = lambda = 1
};

std::vector<ConstantsRow> constants_table(std::int64_t m_max);

/// The bounds emitted by the `bounds` CLI subcommand for one parameter set.
std::vector<BoundReport> standard_reports(const ProblemParams& params, const std::optional<Integer>& bound_m);

/// CSV with header name,n,k,m,lambda,side,asymptotic,value,value_log2.
std::string to_csv(const std::vector<BoundReport>& reports, bool header = true);

}  // namespace evd::bounds
