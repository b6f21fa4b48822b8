#include <doctest.h>

#include "seer/call_context.hpp"
#include "seer/error.hpp"

using namespace seer;

TEST_SUITE("call_context") {

TEST_CASE("default table") {
  const TimingTable t;
  CHECK(t.tau == 1.0);
  CHECK(duration(ContextSymbol::constructor, t) == 2.5);
  CHECK(duration(ContextSymbol::getter_setter, t) == 0.25);
  CHECK(duration(ContextSymbol::implementation, t) == 1.0);
  CHECK(duration(ContextSymbol::inheritance, t) == 1.2);
  CHECK(duration(ContextSymbol::general_processing, t) == 1.5);
  CHECK(duration(ContextSymbol::static_method, t) == 0.5);
  CHECK(duration(ContextSymbol::cloning, t) == 4.0);
  CHECK_NOTHROW(validate_table(t));
}

TEST_CASE("duration scales with tau") {
  TimingTable t;
  t.tau = 0.5;
  CHECK(duration(ContextSymbol::cloning, t) == 2.0);
  for (double tau : {0.1, 0.37, 3.0, 1e3}) {
    t.tau = tau;
    for (auto s : kAllContexts) CHECK(duration(s, t) == tau * duration(s, TimingTable{}));
  }
}

TEST_CASE("validation") {
  TimingTable t;
  t.multiplier(ContextSymbol::inheritance) = 0.9;
  try {
    validate_table(t);
    FAIL("accepted");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::ordering_violation);
    CHECK(e.subject() == "OMEGA,LAMBDA");
  }

  TimingTable scaled;
  for (auto& m : scaled.multipliers) m *= 3.0;
  CHECK_NOTHROW(validate_table(scaled));

  TimingTable zero;
  zero.multiplier(ContextSymbol::getter_setter) = 0.0;
  try {
    validate_table(zero);
    FAIL("accepted");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::nonpositive_value);
  }
  TimingTable neg_tau;
  neg_tau.tau = -1;
  CHECK_THROWS_AS(validate_table(neg_tau), Error);
}

TEST_CASE("aliases and glyphs") {
  for (auto s : kAllContexts) {
    CHECK(parse_context(ascii_alias(s)) == s);
    CHECK(parse_context(glyph(s)) == s);
  }
  CHECK(ascii_alias(ContextSymbol::static_method) == "T");
  CHECK(glyph(ContextSymbol::constructor) == "Σ");
  CHECK_THROWS_AS(parse_context("DELTA"), Error);
}

TEST_CASE("json form") {
  const auto j = nlohmann::json::parse(R"({"tau": 2.0, "multipliers": {"XI": 5.0}})");
  const TimingTable t = timing_from_json(j);
  CHECK(t.tau == 2.0);
  CHECK(duration(ContextSymbol::cloning, t) == 10.0);
  CHECK(timing_from_json(to_json(t)).multipliers == t.multipliers);
  CHECK_THROWS_AS(timing_from_json(nlohmann::json::parse(R"({"multipliers": {"PHI": 9.0}})")), Error);
  CHECK_THROWS_AS(timing_from_json(nlohmann::json::parse(R"({"multipliers": {"PSI": 1.0}})")), Error);
}

}  // TEST_SUITE
