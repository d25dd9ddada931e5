#include <catch_amalgamated.hpp>

#include "qfree/correlator.hpp"
#include "qfree/io.hpp"
#include "support.hpp"

using namespace qfree;
using namespace qfree::testing;

namespace {

void check_round_trip(const ScalarSum& s, const Symbols& sym = {}) {
  auto j = io::to_json(s, sym);
  auto back = io::sum_from_json(nlohmann::json::parse(j.dump()));
  CHECK(back.sum == s);
  CHECK(io::to_json(back.sum, back.symbols) == j);
}

}  // namespace

TEST_CASE("rationals round-trip through strings") {
  CHECK(io::rational_to_string(Rational(-3, 4)) == "-3/4");
  CHECK(io::rational_to_string(Rational(5)) == "5");
  CHECK(io::rational_from_string("-3/4") == Rational(-3, 4));
  CHECK(io::rational_from_string("6/8") == Rational(3, 4));
  CHECK_THROWS_AS(io::rational_from_string("x"), std::invalid_argument);
}

TEST_CASE("correlators round-trip through JSON") {
  check_round_trip(ScalarSum::zero());
  check_round_trip(ScalarSum::one());
  check_round_trip(four_point_golden(), four_point_symbols());
  check_round_trip(four_point_limit_golden(), four_point_symbols());
  for (auto& p : balanced_patterns(6)) {
    auto w = OperatorWord::from_pattern(p);
    check_round_trip(finiteLambdaCorrelator(w, StateSpec::gaussian()));
    check_round_trip(limitCorrelator(w, StateSpec::gaussian()));
  }
}

TEST_CASE("random sums round-trip through JSON") {
  RandomMonomials gen(17);
  for (int i = 0; i < 200; ++i) check_round_trip(gen.sum());
}

TEST_CASE("JSON carries the schema version and symbol table") {
  auto j = io::to_json(four_point_golden(), four_point_symbols());
  CHECK(j["schemaVersion"] == kSchemaVersion);
  CHECK(j["symbols"]["times"] == nlohmann::json({"t1", "t2", "t2'", "t1'"}));
  CHECK(j["terms"].size() == 2);
  CHECK(j["terms"][0]["powLambda"] == -4);
  CHECK(j["terms"][0]["budgets"].size() == 2);

  j["schemaVersion"] = 99;
  CHECK_THROWS_AS(io::sum_from_json(j), std::invalid_argument);
}
