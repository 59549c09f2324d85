#include <doctest.h>

#include "evd/bounds.hpp"
#include "evd/construct.hpp"
#include "evd/error.hpp"
#include "evd/verify.hpp"
#include "oracles.hpp"

#include <cmath>

using namespace evd;

namespace {

ErrorKind kind_of(auto&& call) {
  try {
    call();
  } catch (const Error& e) {
    return e.kind();
  }
  FAIL("expected an error");
  return ErrorKind::InvalidArgument;
}

/// Floor by truncating division of numerator by denominator (entries here are positive).
Integer floor_oracle(const Rational& q) {
  return Integer(boost::multiprecision::numerator(q) / boost::multiprecision::denominator(q));
}

}  // namespace

TEST_CASE("explicit real construction") {
  const auto one = construct_real(1, 2, Rational(1, 3));
  CHECK(one.size() == 1);
  CHECK(verify_distinct(one, VerifyMode::RealSpacing).passed());

  const auto seq = construct_real(10, 2, Rational(1, 2));
  CHECK(seq[0][0] == Rational(9765625, 1024) - 1);
  CHECK(seq[9][0] == Rational(9765625, 1024) - 512);
  for (std::size_t i = 1; i < seq.size(); ++i) CHECK(seq[i][0] < seq[i - 1][0]);

  CHECK(kind_of([] { construct_real(5, 1, Rational(1, 2)); }) == ErrorKind::HypothesisViolated);
  CHECK(kind_of([] { construct_real(5, 2, Rational(0)); }) == ErrorKind::DomainError);
}

TEST_CASE("explicit integer construction") {
  const auto seq = construct_integer(10, 2, Rational(1, 2));
  // floor((5/2)^10) = 9536, and a_i subtracts 2^{i-1} from it.
  CHECK(floor(rational_pow(Rational(5, 2), 10)) == 9536);
  CHECK(seq[0][0] == 9535);
  CHECK(seq[9][0] == 9024);
  REQUIRE(seq.bound());
  CHECK(*seq.bound() == 9535);
  CHECK(kind_of([] { construct_integer(5, 1, Rational(1, 2)); }) == ErrorKind::HypothesisViolated);

  // floor((2+e)^n - 2^{i-1}) == floor((2+e)^n) - 2^{i-1}
  for (const char* eps : {"1/2", "1/3", "2/7", "1"}) {
    const Rational e = parse_rational(eps);
    for (std::int64_t n = 1; n <= 24; ++n) {
      const auto real = construct_real(n, 2, e);
      const auto integer = construct_integer(n, 2, e);
      for (std::size_t i = 0; i < integer.size(); ++i) CHECK(integer[i][0] == floor_oracle(real[i][0]));
    }
  }
}

TEST_CASE("explicit construction scale approaches log2(2 + eps)") {
  const double target = std::log2(2.5);
  double previous = 1e9;
  for (std::int64_t n : {10, 20, 40, 80, 160}) {
    const auto seq = construct_integer(n, 2, Rational(1, 2));
    const double rate = log2(*seq.bound()).convert_to<double>() / static_cast<double>(n);
    const double gap = std::abs(rate - target);
    CHECK(gap <= previous);
    previous = gap;
  }
  CHECK(previous < 1e-3);
}

TEST_CASE("explicit constructions verify at desk scale") {
  for (std::int64_t n = 8; n <= 14; ++n) {
    const auto seq = construct_integer(n, 2, Rational(1, 2));
    CHECK(verify_distinct(seq).passed());
    if (n <= 11) CHECK(oracle::naive_distinct(seq));
  }
  for (std::int64_t n = 8; n <= 12; ++n)
    CHECK(verify_distinct(construct_real(n, 2, Rational(1, 2)), VerifyMode::RealSpacing).passed());
}

TEST_CASE("probabilistic construction at the sampling bound") {
  const ProblemParams p(20, 1, 2, Rational(3, 10));
  const auto report = bounds::prob_upper(p);
  ConstructionRecipe recipe;
  recipe.bound = floor(report.value);
  recipe.max_retries = 1;
  const auto tau = static_cast<std::size_t>(*report.tau);
  int clean = 0;
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    recipe.seed = seed;
    const auto result = construct_probabilistic(p, recipe);
    CHECK(verify_distinct(result.sequence).passed());
    CHECK(result.log.removals() <= tau);
    clean += result.log.attempts.size() == 1;
    for (const auto& e : result.sequence.elements()) {
      CHECK(e[0] >= 1);
      CHECK(e[0] <= recipe.bound);
    }
  }
  CHECK(clean == 5);
}

TEST_CASE("probabilistic repair agrees with the naive oracle") {
  // Small M forces collisions, so the removal path is exercised.
  int repaired = 0;
  for (std::uint64_t seed = 0; seed < 30; ++seed) {
    const ProblemParams p(6, 1 + seed % 2, 1 + seed % 2, Rational(seed % 3 == 0 ? 1 : 1, seed % 3 == 0 ? 1 : 2));
    ConstructionRecipe recipe;
    recipe.bound = 30;
    recipe.seed = seed;
    recipe.overshoot = 4;
    recipe.max_retries = 50;
    try {
      const auto result = construct_probabilistic(p, recipe);
      CHECK(oracle::naive_distinct(result.sequence));
      CHECK(result.log.attempts.back().accepted);
      for (const auto& a : result.log.attempts) CHECK(a.removed.size() <= 4);
      repaired += !result.log.attempts.back().removed.empty();
    } catch (const Error& e) {
      CHECK(e.kind() == ErrorKind::RetriesExhausted);
    }
  }
  CHECK(repaired > 0);
}

TEST_CASE("probabilistic construction fails when M is too small") {
  ConstructionRecipe recipe;
  recipe.bound = 1;
  recipe.max_retries = 5;
  CHECK(kind_of([&] { construct_probabilistic(ProblemParams(2, 1, 1, Rational(1)), recipe); }) ==
        ErrorKind::RetriesExhausted);
  recipe.bound = 1;
  CHECK(kind_of([&] { construct_probabilistic(ProblemParams(4, 1, 2, Rational(1)), recipe); }) ==
        ErrorKind::HypothesisViolated);
  recipe.kind = ConstructionKind::ExplicitInteger;
  CHECK(kind_of([&] { construct_probabilistic(ProblemParams(4, 1, 1, Rational(1)), recipe); }) ==
        ErrorKind::InvalidArgument);
}

TEST_CASE("probabilistic construction is deterministic") {
  const ProblemParams p(10, 2, 1, Rational(1, 2));
  ConstructionRecipe recipe;
  recipe.bound = 200;
  recipe.seed = 77;
  recipe.overshoot = 3;
  const auto a = construct_probabilistic(p, recipe, 1);
  const auto b = construct_probabilistic(p, recipe, 4);
  CHECK(a.sequence == b.sequence);
  CHECK(a.log.to_json() == b.log.to_json());
  recipe.seed = 78;
  CHECK_FALSE(construct_probabilistic(p, recipe).sequence == a.sequence);
}

TEST_CASE("default overshoot") {
  CHECK(default_overshoot(Rational(3, 10)) == 1);
  CHECK(default_overshoot(Rational(1, 20)) > 1);
  CHECK(default_overshoot(Rational(1, 2)) == 1);
  CHECK(default_overshoot(Rational(1)) == 1);
  CHECK(parse_construction_kind("explicit-integer") == ConstructionKind::ExplicitInteger);
  CHECK(kind_of([] { parse_construction_kind("magic"); }) == ErrorKind::ParseError);
}
