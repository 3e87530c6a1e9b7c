#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "colprob/evaluator.hpp"
#include "colprob/oracle.hpp"
#include "colprob/parser.hpp"
#include "support/generators.hpp"

using namespace colprob;
using oracle::enumerate_prob;
using oracle::mc_estimate;

namespace {

const Model& paper() {
  static const Model m = load_model(COLPROB_MODELS_DIR "/paper.model");
  return m;
}

const Model& channel() {
  static const Model m = load_model(COLPROB_MODELS_DIR "/channel.model");
  return m;
}

ProbResult E(const char* text, const Model& m = paper()) { return enumerate_prob(parse_formula(text), m); }

ProbResult Q(Rational r) { return ProbResult::determined(std::move(r)); }

}  // namespace

TEST_CASE("enumerate_prob") {
  CHECK(E("6@d1 || 6@d2") == Q(Rational(11, 36)));
  CHECK(E("H@c & T@c") == Q(Rational(0)));
  CHECK(E("4@d | 5@d") == Q(Rational(1, 3)));
  CHECK(E("(6@d1 && 5@d2 | 6@d2 && 5@d1) given (6@d1 || 6@d2)") == Q(Rational(2, 11)));
  CHECK(E("0@T pgiven 0@R", channel()) == Q(Rational(9, 10)));
  CHECK(E("0@R", channel()) == Q(Rational(1, 2)));
  CHECK(E("alien && alien") == Q(Rational(1, 1000)));
  CHECK_FALSE(E("H@c | T@c1").is_determined());
  CHECK_FALSE(E("H@c given H@c1").is_determined());
  CHECK_THROWS_AS(E("H@c given H@c & T@c"), NullConditionError);
  CHECK_THROWS_AS(E("H@c && (H@c given H@c)"), NestedConditionalError);
}

TEST_CASE("any formula over one fair coin has probability 0, 1/2 or 1") {
  const Model m({ExperimentDecl::uniform("c", {"H", "T"})});
  testing::Gen g(3);
  for (int i = 0; i < 300; ++i) {
    const auto r = enumerate_prob(testing::random_event(g, m, 5), m);
    REQUIRE(r.is_determined());
    const Rational v = r.value();
    REQUIRE((v == Rational(0) || v == Rational(1, 2) || v == Rational(1)));
  }
}

TEST_CASE("state-space bound") {
  std::vector<ExperimentDecl> decls;
  for (int i = 0; i < 8; ++i)
    decls.push_back(ExperimentDecl::uniform("e" + std::to_string(i), {"0", "1", "2", "3", "4", "5", "6", "7", "8", "9"}));
  const Model big(decls);
  const Formula all = parse_formula("0@e0 && 0@e1 && 0@e2 && 0@e3 && 0@e4 && 0@e5 && 0@e6 && 0@e7");
  CHECK_THROWS_AS(enumerate_prob(all, big), oracle::StateSpaceError);
  CHECK(enumerate_prob(parse_formula("0@e0 && 0@e1"), big) == Q(Rational(1, 100)));
  CHECK_THROWS_AS(enumerate_prob(parse_formula("0@e0 && 0@e1"), big, 50), oracle::StateSpaceError);
}

TEST_CASE("mc_estimate") {
  SUBCASE("one third within 4 standard errors") {
    const auto est = mc_estimate(parse_formula("4@d | 5@d"), paper(), {100'000, 17});
    CHECK(est.samples == 100'000);
    CHECK(std::abs(est.estimate - 1.0 / 3.0) <= 4 * est.std_error);
    CHECK(est.std_error == doctest::Approx(std::sqrt(est.estimate * (1 - est.estimate) / 100'000)));
  }
  SUBCASE("H & H is exactly the frequency of H") {
    for (std::uint64_t n : {1u, 10u, 1000u}) {
      const auto hh = mc_estimate(parse_formula("H@c & H@c"), paper(), {n, 5});
      const auto h = mc_estimate(parse_formula("H@c"), paper(), {n, 5});
      CHECK(hh.estimate == h.estimate);
    }
  }
  SUBCASE("channel joint frequency near 9/20") {
    const auto est = mc_estimate(parse_formula("0@T && 0@R"), channel(), {20'000, 3});
    CHECK(std::abs(est.estimate - 0.45) <= 4 * est.std_error);
  }
  SUBCASE("conditionals count only trials meeting the condition") {
    const auto est = mc_estimate(parse_formula("0@T pgiven 0@R"), channel(), {20'000, 3});
    CHECK(est.trials < est.samples);
    CHECK(std::abs(est.estimate - 0.9) <= 4 * est.std_error);
  }
  SUBCASE("determinism") {
    const Formula f = parse_formula("6@d1 || 6@d2");
    const auto a = mc_estimate(f, paper(), {5000, 42}), b = mc_estimate(f, paper(), {5000, 42});
    CHECK(a.estimate == b.estimate);
    CHECK(a.std_error == b.std_error);
    CHECK(a.hits == b.hits);
    CHECK(mc_estimate(f, paper(), {5000, 43}).hits != a.hits);
  }
  SUBCASE("rejections") {
    CHECK_THROWS_AS(mc_estimate(parse_formula("H@c | T@c1"), paper(), {}), oracle::UndeterminedQueryError);
    CHECK_THROWS_AS(mc_estimate(parse_formula("H@c"), paper(), {0, 1}), Error);
  }
}

TEST_CASE("property: oracle agrees with the evaluator") {
  testing::Gen g(555);
  for (int i = 0; i < 1000; ++i) {
    const Model m = testing::random_model(g);
    const Formula f = testing::random_query(g, m);
    INFO(format_formula(f));
    bool null_eval = false, null_oracle = false;
    ProbResult a = ProbResult::undetermined(""), b = a;
    try { a = prob(f, m); } catch (const NullConditionError&) { null_eval = true; }
    try { b = enumerate_prob(f, m); } catch (const NullConditionError&) { null_oracle = true; }
    REQUIRE(null_eval == null_oracle);
    if (!null_eval) REQUIRE(a == b);
  }
}
