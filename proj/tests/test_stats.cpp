#include <doctest.h>

#include "evd/error.hpp"
#include "evd/stats.hpp"
#include "oracles.hpp"

#include <bit>
#include <cmath>

using namespace evd;
using namespace evd::stats;

namespace {

struct NaiveMoments {
  std::vector<Rational> mu;
  Rational sigma2;
  std::uint64_t count = 0;
};

/// Mean and summed variance by explicit bitmask enumeration.
NaiveMoments naive_moments(const Sequence& seq, const Rational& lambda, int min_size) {
  const auto& p = seq.params();
  const int n = static_cast<int>(p.n());
  const auto cap = size_cap(p.n(), lambda);
  const auto k = static_cast<std::size_t>(p.k());
  std::vector<Rational> s1(k, 0), s2(k, 0);
  NaiveMoments out;
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << n); ++mask) {
    const int size = std::popcount(mask);
    if (size < min_size || size > cap) continue;
    const auto v = oracle::naive_eval(seq, mask, static_cast<int>(p.m()));
    for (std::size_t c = 0; c < k; ++c) {
      s1[c] += Rational(v[c]);
      s2[c] += Rational(v[c] * v[c]);
    }
    ++out.count;
  }
  out.sigma2 = 0;
  for (std::size_t c = 0; c < k; ++c) {
    const Rational mu = s1[c] / out.count;
    out.mu.push_back(mu);
    out.sigma2 += s2[c] / out.count - mu * mu;
  }
  return out;
}

Sequence ones(std::int64_t n, std::int64_t m) {
  std::vector<long long> v(static_cast<std::size_t>(n), 1);
  return make_sequence(ProblemParams(n, 1, m, Rational(1)), v);
}

}  // namespace

TEST_CASE("exact moments examples") {
  const std::vector<long long> v{1, 2, 3};
  const auto seq = make_sequence(ProblemParams(3, 1, 1, Rational(1)), v);
  const auto r = exact_moments(seq, Rational(1), 0);
  CHECK(r.mu[0] == 3);
  CHECK(r.sigma2 == Rational(7, 2));
  CHECK(r.family_count == 8);

  const std::vector<long long> zeros{0, 0, 0, 0};
  const auto z = exact_moments(make_sequence(ProblemParams(4, 1, 2, Rational(1)), zeros), Rational(1), 0);
  CHECK(z.mu[0] == 0);
  CHECK(z.sigma2 == 0);

  CHECK_THROWS_AS(exact_moments(seq, Rational(1, 3), 2), Error);
  StatsOptions tight;
  tight.max_subsets = 7;
  CHECK_THROWS_AS(exact_moments(seq, Rational(1), 0, tight), Error);
}

TEST_CASE("exact moments agree with the naive oracle") {
  std::mt19937_64 rng(11);
  const Rational lambdas[] = {Rational(3, 10), Rational(1, 2), Rational(1)};
  for (int trial = 0; trial < 60; ++trial) {
    const ProblemParams p(1 + trial % 9, 1 + trial % 2, 1 + trial % 3, Rational(1));
    const auto seq = oracle::random_sequence(rng, p, 50);
    const Rational lambda = lambdas[trial % 3];
    const int min_size = trial % 4;
    if (min_size > size_cap(p.n(), lambda)) continue;
    const auto expected = naive_moments(seq, lambda, min_size);
    StatsOptions options;
    options.threads = 1 + trial % 3;
    const auto got = exact_moments(seq, lambda, min_size, options);
    CHECK(got.mu == expected.mu);
    CHECK(got.sigma2 == expected.sigma2);
    CHECK(got.family_count == expected.count);
  }
}

TEST_CASE("mean over the power set is e^m([1,n]) / 2^m") {
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 30; ++trial) {
    const ProblemParams p(1 + trial % 10, 1, 1 + trial % 3, Rational(1));
    const auto seq = oracle::random_sequence(rng, p, 1000);
    const auto full = oracle::naive_eval(seq, (std::uint64_t{1} << p.n()) - 1, static_cast<int>(p.m()));
    CHECK(exact_moments(seq, Rational(1), 0).mu[0] == Rational(full[0], pow2(static_cast<std::uint64_t>(p.m()))));
  }
}

TEST_CASE("coefficient identity") {
  const std::vector<long long> v{1, 2, 3};
  const auto r = coefficient_identity(make_sequence(ProblemParams(3, 1, 1, Rational(1)), v));
  CHECK(r.lhs == 28);
  CHECK(r.rhs == 28);
  REQUIRE(r.shapes.size() == 2);
  CHECK(r.shapes[0].coefficient == 0);
  CHECK(r.shapes[1].pattern_sum == 14);
  CHECK(r.shapes[1].coefficient == 2);

  std::mt19937_64 rng(5);
  for (int n = 1; n <= 8; ++n)
    for (int m = 1; m <= 3; ++m)
      for (int trial = 0; trial < 5; ++trial) {
        const ProblemParams p(n, 1 + trial % 2, m, Rational(1));
        const auto seq = oracle::random_sequence(rng, p, 100);
        const auto report = coefficient_identity(seq);
        const auto naive = naive_moments(seq, Rational(1), 0);
        CHECK(report.lhs == naive.sigma2 * naive.count);
        CHECK(report.shapes[0].coefficient == 0);
        // C_1 = 2^{n-2m} C(2m-2, m-1)
        const Rational c1 = Rational(binomial(2 * m - 2, m - 1)) *
                            (n >= 2 * m ? Rational(pow2(n - 2 * m)) : Rational(Integer(1), pow2(2 * m - n)));
        CHECK(report.shapes[1].coefficient == c1);
      }
}

TEST_CASE("pattern sums match brute force") {
  // Direct loops for m = 2.
  std::mt19937_64 rng(8);
  const ProblemParams p(6, 1, 2, Rational(1));
  const auto seq = oracle::random_sequence(rng, p, 100);
  const auto r = coefficient_identity(seq);
  Integer t1 = 0;  // one squared index and two linear ones, all distinct
  Integer t2 = 0;  // two squared indices
  for (int a = 0; a < 6; ++a)
    for (int b = 0; b < 6; ++b)
      for (int c = b + 1; c < 6; ++c)
        if (a != b && a != c) t1 += seq[a][0] * seq[a][0] * seq[b][0] * seq[c][0];
  for (int a = 0; a < 6; ++a)
    for (int b = a + 1; b < 6; ++b) t2 += seq[a][0] * seq[a][0] * seq[b][0] * seq[b][0];
  CHECK(r.shapes[1].pattern_sum == t1);
  CHECK(r.shapes[2].pattern_sum == t2);
  CHECK(r.shapes[1].multiplicity == 2);
  CHECK(r.shapes[2].multiplicity == 1);
}

TEST_CASE("coefficient identity needs the full power set") {
  const std::vector<long long> v{1, 2, 3};
  CHECK_THROWS_AS(coefficient_identity(make_sequence(ProblemParams(3, 1, 1, Rational(1, 2)), v)), Error);
}

TEST_CASE("all-ones closed forms") {
  auto a = allones_exact(4, 1, Rational(1));
  CHECK(a.mu[0] == 2);
  CHECK(a.sigma2 == 1);
  CHECK(allones_exact(4, 2, Rational(1, 2)).mu[0] == Rational(6, 11));
  const Rational grid[] = {Rational(1, 10), Rational(3, 10), Rational(1, 2), Rational(7, 10), Rational(1)};
  for (std::int64_t n = 1; n <= 12; ++n)
    for (std::int64_t m = 1; m <= 3; ++m)
      for (const auto& l : grid) {
        const auto closed = allones_exact(n, m, l);
        const auto walked = exact_moments(ones(n, m), l, 0);
        CHECK(closed.mu == walked.mu);
        CHECK(closed.sigma2 == walked.sigma2);
        CHECK(closed.family_count == walked.family_count);
      }
}

TEST_CASE("bound comparison") {
  for (std::int64_t n : {8, 40, 200}) {
    const auto full = bound_comparison(n, 1, Rational(1));
    CHECK(full.sigma2 == Rational(n, 4));
    CHECK(full.bound == Real(n));
    const auto half = bound_comparison(n, 1, Rational(1, 2));
    CHECK(half.bound == Real(n) / 4);
    CHECK(half.ratio > 0);
  }
  const auto low = bound_comparison(400, 1, Rational(3, 10));
  CHECK(low.ratio <= Real("1.25"));
  const auto row = comparison_row(low);
  CHECK(to_csv_line(row).rfind("bound_comparison,400,1,1,3/10,", 0) == 0);
}

TEST_CASE("Monte Carlo matches the closed form") {
  const auto seq = ones(100, 2);
  const auto exact = allones_exact(100, 2, Rational(1, 2));
  const auto mc = montecarlo_moments(seq, Rational(1, 2), 100000, 2024);
  const Real diff = boost::multiprecision::abs(to_real(mc.mu[0]) - to_real(exact.mu[0]));
  CHECK(diff <= 5 * mc.stderr_mu[0]);
  CHECK(mc.family_count == exact.family_count);
}

TEST_CASE("Monte Carlo determinism and degenerate sample sizes") {
  std::mt19937_64 rng(2);
  const ProblemParams p(12, 2, 2, Rational(1));
  const auto seq = oracle::random_sequence(rng, p, 100);
  const auto a = montecarlo_moments(seq, Rational(1, 2), 5000, 9, 0, 1);
  const auto b = montecarlo_moments(seq, Rational(1, 2), 5000, 9, 0, 4);
  CHECK(a.mu == b.mu);
  CHECK(a.sigma2 == b.sigma2);
  CHECK(to_csv_line(moment_row("montecarlo", 12, 2, 2, Rational(1, 2), a)) ==
        to_csv_line(moment_row("montecarlo", 12, 2, 2, Rational(1, 2), b)));
  const auto two = montecarlo_moments(ones(5, 1), Rational(1, 5), 2, 1);
  CHECK(two.sigma2 >= 0);
  CHECK(two.samples == 2);
  CHECK_THROWS_AS(montecarlo_moments(seq, Rational(1), 1, 1), Error);
}

TEST_CASE("Monte Carlo error shrinks like one over root samples") {
  std::mt19937_64 rng(4);
  const ProblemParams p(14, 1, 2, Rational(1));
  const auto seq = oracle::random_sequence(rng, p, 100);
  const Real mu = to_real(exact_moments(seq, Rational(1), 0).mu[0]);
  Real small = 0;
  Real large = 0;
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    small += boost::multiprecision::abs(to_real(montecarlo_moments(seq, Rational(1), 100, seed).mu[0]) - mu);
    large += boost::multiprecision::abs(to_real(montecarlo_moments(seq, Rational(1), 6400, seed).mu[0]) - mu);
  }
  // sqrt(6400 / 100) = 8; allow a wide margin.
  CHECK(small / large > 3);
  CHECK(small / large < 24);
}
