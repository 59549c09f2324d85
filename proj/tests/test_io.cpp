#include <doctest.h>

#include "evd/error.hpp"
#include "evd/io.hpp"
#include "oracles.hpp"

#include <filesystem>

using namespace evd;

TEST_CASE("sequence document round trip") {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 40; ++trial) {
    const ProblemParams p(1 + trial % 6, 1 + trial % 3, 1 + trial % 2, Rational(1 + trial % 4, 4));
    auto seq = oracle::random_sequence(rng, p, 1000000);
    const auto text = to_json(seq);
    const auto back = parse_sequence_json(text).to_sequence();
    CHECK(back == seq);
    CHECK(to_json(back) == text);
  }
}

TEST_CASE("bound and rational entries survive the round trip") {
  const ProblemParams p(3, 1, 2, Rational(1));
  std::vector<Element<Rational>> e{{Rational(9765625, 1024) - 1}, {Rational(1, 3)}, {Rational(0)}};
  RationalSequence seq(p, e);
  const auto doc = parse_sequence_json(to_json(seq));
  CHECK_FALSE(doc.integral());
  CHECK(doc.to_rational_sequence() == seq);
  CHECK_THROWS_AS(doc.to_sequence(), Error);

  const std::vector<long long> big{1, 2, 4};
  auto bounded = make_sequence(ProblemParams(3, 1, 1, Rational(1)), big, Integer(4));
  const auto text = to_json(bounded);
  CHECK(text.find("\"bound\": \"4\"") != std::string::npos);
  CHECK(text.find("\"lambda\": \"1\"") != std::string::npos);
  CHECK(parse_sequence_json(text).to_sequence().bound() == Integer(4));
}

TEST_CASE("huge entries are carried as decimal strings") {
  const Integer huge = pow2(200) + 17;
  const ProblemParams p(1, 1, 1, Rational(1));
  Sequence seq(p, {Element<Integer>{huge}});
  const auto text = to_json(seq);
  CHECK(text.find(to_string(huge)) != std::string::npos);
  CHECK(parse_sequence_json(text).to_sequence()[0][0] == huge);
}

TEST_CASE("file round trip") {
  const auto path = std::filesystem::temp_directory_path() / "evd_io_roundtrip.json";
  const std::vector<long long> v{3, 5, 6, 7};
  auto seq = make_sequence(ProblemParams(4, 1, 1, Rational(1, 2)), v);
  write_sequence_file(path, seq);
  CHECK(read_sequence_file(path).to_sequence() == seq);
  std::filesystem::remove(path);
}

TEST_CASE("malformed documents are parse errors") {
  auto kind_of = [](const char* text) {
    try {
      parse_sequence_json(text);
    } catch (const Error& e) {
      return e.kind();
    }
    FAIL("expected an error");
    return ErrorKind::InvalidArgument;
  };
  CHECK(kind_of("{") == ErrorKind::ParseError);
  CHECK(kind_of(R"({"n":1,"k":1,"m":1,"elements":[["1"]]})") == ErrorKind::ParseError);
  CHECK(kind_of(R"({"n":1,"k":1,"m":1,"lambda":"1/0","elements":[["1"]]})") == ErrorKind::ParseError);
  CHECK(kind_of(R"({"n":1,"k":1,"m":1,"lambda":"1","elements":[["x"]]})") == ErrorKind::ParseError);
  CHECK(kind_of(R"({"n":2,"k":1,"m":1,"lambda":"1","elements":[["1"]]})") == ErrorKind::DimensionMismatch);
  CHECK(kind_of(R"({"n":1,"k":1,"m":1,"lambda":"1","bound":"3","elements":[["4"]]})") == ErrorKind::DomainError);
  CHECK(kind_of(R"({"n":1,"k":1,"m":1,"lambda":"1","elements":[["-1"]]})") == ErrorKind::DomainError);
}
