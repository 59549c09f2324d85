#include <doctest.h>

#include "evd/bounds.hpp"
#include "evd/error.hpp"

#include <boost/math/special_functions/gamma.hpp>

#include <cmath>

using namespace evd;
using namespace evd::bounds;

namespace {

bool near(const Real& a, const Real& b, const char* rel = "1e-40") {
  return boost::multiprecision::abs(a - b) <= Real(rel) * boost::multiprecision::abs(b);
}

ProblemParams pp(std::int64_t n, std::int64_t k, std::int64_t m, const char* lambda) {
  return ProblemParams(n, k, m, parse_rational(lambda));
}

}  // namespace

TEST_CASE("binary entropy") {
  CHECK(binary_entropy(Rational(1, 2)) == 1);
  CHECK(binary_entropy(Rational(0)) == 0);
  CHECK(binary_entropy(Rational(1)) == 0);
  CHECK(binary_entropy(parse_rational("0.11")) < Real(1) / 2);
  // h(1/4) = 2 - (3/4) log2 3
  CHECK(near(binary_entropy(Rational(1, 4)), Real(2) - Real(3) / 4 * log2(Real(3))));
  CHECK(near(binary_entropy(Rational(3, 10)), binary_entropy(Rational(7, 10))));
  CHECK_THROWS_AS(binary_entropy(Rational(3, 2)), Error);
  CHECK_THROWS_AS(binary_entropy(Rational(-1, 2)), Error);
}

TEST_CASE("pigeonhole lower bound") {
  for (std::int64_t n = 1; n <= 20; ++n) {
    auto r = pigeonhole_lower(pp(n, 1, 1, "1"));
    REQUIRE(r.exact);
    CHECK(*r.exact == Rational(pow2(static_cast<std::uint64_t>(n)) - 1, Integer(n)));
    CHECK(r.asymptotic);
    CHECK(r.side == Side::Lower);
  }
  auto two = pigeonhole_lower(pp(10, 1, 2, "1"));
  CHECK(near(two.value, boost::multiprecision::sqrt(Real(2 * 1013)) / 10));
  try {
    pigeonhole_lower(pp(3, 1, 2, "1/3"));
    FAIL("expected DegenerateFamily");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::DegenerateFamily);
  }
}

TEST_CASE("variance lower bound, k = lambda = 1") {
  auto r = variance_lower_small(4, 1);
  CHECK(near(r.value, Real(8) / boost::multiprecision::sqrt(Real(3))));
  CHECK(to_string(r.value, 6) == "4.6188");
  for (std::int64_t n = 1; n <= 30; ++n) {
    auto v = variance_lower_small(n, 1);
    CHECK(near(v.value, boost::multiprecision::pow(Real(2), n) /
                            (boost::multiprecision::sqrt(Real(3)) * boost::multiprecision::sqrt(Real(n)))));
  }
  CHECK_THROWS_AS(variance_lower_small(2, 3), Error);
}

TEST_CASE("variance/pigeonhole ratio grows with n") {
  Real previous = 0;
  for (std::int64_t n = 4; n <= 64; ++n) {
    const Real ratio = variance_lower_small(n, 1).value / pigeonhole_lower(pp(n, 1, 1, "1")).value;
    const Real expected = boost::multiprecision::sqrt(Real(n)) /
                          (boost::multiprecision::sqrt(Real(3)) * (1 - boost::multiprecision::pow(Real(2), -n)));
    CHECK(near(ratio, expected));
    CHECK(ratio > previous);
    previous = ratio;
  }
}

TEST_CASE("gamma closed form matches the special function") {
  for (std::int64_t k = 1; k <= 12; ++k) {
    const Real expected = boost::math::tgamma(Real(k) / 2 + 1);
    CHECK(near(gamma_half_plus_one(k), expected, "1e-60"));
  }
}

TEST_CASE("general variance lower bound") {
  // lambda = k = m = 1: K = Gamma(3/2)^2 / (5 pi 3) = 1/60.
  const Real k111 = variance_lower_general_constant(pp(10, 1, 1, "1"));
  CHECK(near(k111, Real(1) / 60));
  const auto table = constants_table(1);
  CHECK(near(boost::multiprecision::sqrt(k111), table[0].c_1m1 / 2));
  auto r = variance_lower_general(pp(10, 1, 1, "1"));
  CHECK(near(r.value, Real(1024) / boost::multiprecision::sqrt(Real(600))));

  // Case boundary: lambda = 1/2 and lambda just below it use different formulas.
  const Real at_half = variance_lower_general_constant(pp(20, 1, 2, "1/2"));
  const Real below = variance_lower_general_constant(pp(20, 1, 2, "4999999/10000000"));
  CHECK(boost::multiprecision::abs(at_half - below) > Real("1e-3") * at_half);

  // Independent double-precision evaluation for k = 2, m = 1, lambda = 1/4, n = 40.
  auto smoke = variance_lower_general(pp(40, 2, 1, "1/4"));
  double family = 0;
  for (int i = 0; i <= 10; ++i) family += std::exp(std::lgamma(41.0) - std::lgamma(i + 1.0) - std::lgamma(41.0 - i));
  const double constant = 1.0 / (2.0 * (0.25 + 0.0625) * M_PI * 4.0);
  const double expected = std::sqrt(constant) * std::sqrt(family) / std::sqrt(40.0);
  CHECK(std::abs(smoke.value.convert_to<double>() / expected - 1) < 1e-9);
  CHECK(smoke.value > 0);
}

TEST_CASE("variance upper bound for M-bounded sequences") {
  // lambda < 1/2: 2k(l^{2m-1} + l^{2m}) n^{2m-1} M^{2m} / ((m-1)!)^2
  auto low = variance_upper_sequence(pp(10, 2, 2, "1/4"), Integer(3));
  const Rational l(1, 4);
  CHECK(*low.exact == Rational(2 * 2) * (l * l * l + l * l * l * l) * Rational(1000 * 81));
  auto one = variance_upper_sequence(pp(7, 1, 1, "1"), Integer(5));
  CHECK(*one.exact == 5 * 7 * 25);
  auto half = variance_upper_sequence(pp(6, 1, 1, "1/2"), Integer(1));
  // k(8 l + 8 l^2 + 1) n / 4 = (4 + 2 + 1) * 6 / 4
  CHECK(*half.exact == Rational(42, 4));
  for (std::int64_t m = 1; m <= 3; ++m) {
    auto a = variance_upper_sequence(pp(9, 1, m, "2/3"), Integer(4));
    auto b = variance_upper_sequence(pp(9, 1, m, "2/3"), Integer(8));
    CHECK(*b.exact == *a.exact * Rational(pow2(static_cast<std::uint64_t>(2 * m))));
  }
  CHECK_THROWS_AS(variance_upper_sequence(pp(9, 1, 1, "1"), Integer(0)), Error);
}

TEST_CASE("all-ones variance bound cases") {
  auto low = allones_variance_bound(16, 2, Rational(1, 4));
  CHECK(near(low.value, Real(4 * 16)));
  CHECK(*allones_variance_bound(40, 1, Rational(1, 2)).exact == 10);
  CHECK(*allones_variance_bound(40, 1, Rational(1)).exact == 40);
  CHECK(*allones_variance_bound(10, 2, Rational(1)).exact == Rational(1000, 4));
}

TEST_CASE("probabilistic upper bound") {
  CHECK(tau_from_entropy(Real(1) / 2) == 1);
  CHECK_THROWS_AS(prob_upper(pp(10, 1, 1, "1/2")), Error);
  try {
    prob_upper(pp(10, 1, 1, "3/4"));
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::HypothesisViolated);
  }

  auto r = prob_upper(pp(20, 1, 2, "3/10"));
  REQUIRE(r.tau);
  CHECK(*r.tau == 1);
  CHECK_FALSE(r.asymptotic);
  const Real h = binary_entropy(Rational(3, 10));
  CHECK(near(r.value, boost::multiprecision::pow(Real(4), h) * 2 * boost::multiprecision::pow(Real(4), h * 20)));

  // tau minimises 4^{h t}/t over positive integers.
  for (int num = 1; num < 50; ++num) {
    const Rational lambda(num, 100);
    const Real hl = binary_entropy(lambda);
    const auto tau = tau_from_entropy(hl);
    CHECK(tau >= 1);
    CHECK(overshoot_cost(hl, tau) <= overshoot_cost(hl, tau + 1));
    if (tau > 1) CHECK(overshoot_cost(hl, tau) <= overshoot_cost(hl, tau - 1));
  }

  // Large k drives the exponential factor to 1.
  auto wide = prob_upper(pp(20, 1000000, 1, "1/5"));
  const Real exp_factor = wide.value / prob_upper_constant(Rational(1, 5), 1000000);
  CHECK(boost::multiprecision::abs(exp_factor - 1) < Real("1e-4"));
}

TEST_CASE("full-range probabilistic bound") {
  CHECK(*prob_upper_full(4, 1, 1).exact == 256);
  CHECK(*prob_upper_full(4, 3, 2).exact == 48);
  CHECK(*prob_upper_full(0, 1, 1).exact == 1);
  auto cube = prob_upper_full(1, 1, 3);
  CHECK_FALSE(cube.exact);
  CHECK(near(cube.value, boost::multiprecision::cbrt(Real(4))));
}

TEST_CASE("constants table") {
  const auto rows = constants_table(10);
  REQUIRE(rows.size() == 10);
  CHECK(near(rows[0].c_m, 1 / boost::multiprecision::sqrt(Real(3)), "1e-60"));
  CHECK(near(rows[0].c_1m1, 1 / boost::multiprecision::sqrt(Real(15)), "1e-60"));
  for (const auto& row : rows) {
    CHECK(row.c_1m1 < row.c_m);
    CHECK(row.c_1m1_from_theorem < row.c_1m1);
    CHECK(row.c_1m1 > 0);
  }
}

TEST_CASE("bounds are positive on a parameter grid") {
  const char* lambdas[] = {"1/10", "3/10", "1/2", "7/10", "1"};
  for (std::int64_t n = 2; n <= 40; n += 7)
    for (std::int64_t k = 1; k <= 3; ++k)
      for (std::int64_t m = 1; m <= 3; ++m)
        for (const char* l : lambdas) {
          auto p = pp(n, k, m, l);
          for (const auto& r : standard_reports(p, Integer(5))) CHECK(r.value > 0);
        }
}

TEST_CASE("bounds CSV") {
  auto csv = to_csv(standard_reports(pp(10, 1, 1, "1"), std::nullopt));
  CHECK(csv.rfind("name,n,k,m,lambda,side,asymptotic,value,value_log2\n", 0) == 0);
  CHECK(csv.find("pigeonhole_lower,10,1,1,1,lower,true,102.3,") != std::string::npos);
  CHECK(csv.find("variance_lower_small,10,1,1,1,lower,true,") != std::string::npos);
  CHECK(csv.find("prob_upper_full,10,1,1,1,upper,false,1048576,20") != std::string::npos);
}
