#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>

#include "colprob/model.hpp"
#include "support/generators.hpp"

using namespace colprob;

namespace {

bool mentions(const std::vector<ValidationIssue>& issues, const std::string& text) {
  return std::any_of(issues.begin(), issues.end(),
                     [&](const ValidationIssue& i) { return i.message.find(text) != std::string::npos; });
}

ExperimentDecl dependent(ExperimentId id, std::vector<Outcome> outcomes, std::vector<ExperimentId> parents) {
  ExperimentDecl d;
  d.id = std::move(id);
  d.outcomes = std::move(outcomes);
  d.parents = std::move(parents);
  return d;
}

Model channel(const Rational& prior0, const Rational& flip) {
  ExperimentDecl t = ExperimentDecl::weighted("T", {{"0", prior0}, {"1", Rational(1) - prior0}});
  ExperimentDecl r = dependent("R", {"0", "1"}, {"T"});
  r.cpt[{"0"}] = {{"0", Rational(1) - flip}, {"1", flip}};
  r.cpt[{"1"}] = {{"0", flip}, {"1", Rational(1) - flip}};
  return Model({t, r});
}

}  // namespace

TEST_CASE("validate_model") {
  SUBCASE("fair coin is valid") {
    CHECK(validate_model(Model({ExperimentDecl::uniform("c", {"H", "T"})})).empty());
  }
  SUBCASE("dice missing outcome 6 sums to 5/6") {
    std::vector<std::pair<Outcome, Rational>> w;
    for (int i = 1; i <= 5; ++i) w.emplace_back(std::to_string(i), Rational(1, 6));
    auto d = ExperimentDecl::weighted("d", w);
    d.outcomes.push_back("6");
    const auto issues = validate_model(Model({d}));
    REQUIRE(issues.size() == 1);
    CHECK(issues[0].message == "cpt row sums to 5/6");
    CHECK(issues[0].experiment == "d");
  }
  SUBCASE("two-node cycle") {
    auto r = dependent("R", {"0", "1"}, {"T"});
    auto t = dependent("T", {"0", "1"}, {"R"});
    for (const Outcome& o : {"0", "1"}) {
      r.cpt[{o}] = {{"0", Rational(1, 2)}, {"1", Rational(1, 2)}};
      t.cpt[{o}] = {{"0", Rational(1, 2)}, {"1", Rational(1, 2)}};
    }
    const auto issues = validate_model(Model({r, t}));
    REQUIRE(issues.size() == 1);
    CHECK(issues[0].message.rfind("cycle: ", 0) == 0);
    CHECK((issues[0].message == "cycle: R->T->R" || issues[0].message == "cycle: T->R->T"));
  }
  SUBCASE("duplicate id and unknown parent") {
    auto a = ExperimentDecl::uniform("a", {"x"});
    auto b = dependent("b", {"y"}, {"nope"});
    const auto issues = validate_model(Model({a, a, b}));
    CHECK(mentions(issues, "duplicate experiment id 'a'"));
    CHECK(mentions(issues, "unknown parent 'nope'"));
  }
  SUBCASE("negative weight and bad outcomes") {
    auto d = ExperimentDecl::weighted("d", {{"x", Rational(3, 2)}, {"y", Rational(-1, 2)}});
    CHECK(mentions(validate_model(Model({d})), "negative probability -1/2"));
    auto e = ExperimentDecl::uniform("e", {"x", "x"});
    CHECK(mentions(validate_model(Model({e})), "duplicate outcome 'x'"));
    CHECK(mentions(validate_model(Model({ExperimentDecl::uniform("f", {})})), "no outcomes"));
  }
  SUBCASE("missing cpt row") {
    auto m = channel(Rational(1, 2), Rational(1, 10));
    auto decls = m.experiments();
    decls[1].cpt.erase({"1"});
    CHECK(mentions(validate_model(Model(decls)), "cpt row [T=1] sums to 0"));
  }
  SUBCASE("require_valid throws with every issue") {
    auto d = ExperimentDecl::weighted("d", {{"x", Rational(1, 3)}});
    CHECK_THROWS_AS(require_valid(Model({d})), ModelError);
  }
}

TEST_CASE("ancestral_closure") {
  const Model m = channel(Rational(1, 2), Rational(1, 10));
  CHECK(ancestral_closure(m, {"R"}) == std::set<ExperimentId>{"R", "T"});
  CHECK(ancestral_closure(m, {"T"}) == std::set<ExperimentId>{"T"});

  auto a = dependent("A", {"0"}, {"B"});
  auto b = dependent("B", {"0"}, {"C"});
  a.cpt[{"0"}] = {{"0", 1}};
  b.cpt[{"0"}] = {{"0", 1}};
  const Model chain({a, b, ExperimentDecl::uniform("C", {"0"})});
  CHECK(ancestral_closure(chain, {"A"}) == std::set<ExperimentId>{"A", "B", "C"});
  CHECK_THROWS_AS(ancestral_closure(chain, {"Z"}), UnknownExperimentError);
}

TEST_CASE("joint_point_prob") {
  const Model coins({ExperimentDecl::uniform("c1", {"H", "T"}), ExperimentDecl::uniform("c2", {"H", "T"}),
                     ExperimentDecl::uniform("c", {"H", "T"}),
                     ExperimentDecl::uniform("d", {"1", "2", "3", "4", "5", "6"})});
  CHECK(joint_point_prob(coins, {{"c1", "H"}, {"c2", "H"}}) == Rational(1, 4));
  CHECK(joint_point_prob(coins, {{"c", "H"}, {"d", "6"}}) == Rational(1, 12));
  CHECK(joint_point_prob(coins, {}) == Rational(1));

  const Model ch = channel(Rational(1, 2), Rational(1, 10));
  // 1/2 (prior of T=0) times 9/10 (R=0 given T=0)
  CHECK(joint_point_prob(ch, {{"T", "0"}, {"R", "0"}}) == Rational(9, 20));
  CHECK_THROWS_AS(joint_point_prob(ch, {{"R", "0"}}), Error);
  CHECK_THROWS_AS(joint_point_prob(ch, {{"T", "7"}}), UnknownAtomError);
}

TEST_CASE("property: joint probabilities over a closed domain sum to 1") {
  testing::Gen g(7);
  for (int i = 0; i < 200; ++i) {
    const Model m = testing::random_model(g);
    REQUIRE(validate_model(m).empty());
    const auto domain = ancestral_closure(m, testing::random_support(g, m));
    Rational total = 0;
    for_each_assignment(m, domain, [&](const Assignment& a) { total += joint_point_prob(m, a); });
    REQUIRE(total == Rational(1));
  }
}

TEST_CASE("property: joint_point_prob ignores construction order") {
  testing::Gen g(8);
  for (int i = 0; i < 100; ++i) {
    const Model m = testing::random_model(g);
    const auto domain = ancestral_closure(m, testing::random_support(g, m));
    std::vector<std::pair<ExperimentId, Outcome>> items;
    for (const auto& id : domain) items.emplace_back(id, g.pick(m.at(id).outcomes));
    Assignment forward(items.begin(), items.end());
    Assignment backward(items.rbegin(), items.rend());
    REQUIRE(joint_point_prob(m, forward) == joint_point_prob(m, backward));
  }
}

TEST_CASE("topological order puts parents first") {
  const Model m = channel(Rational(1, 2), Rational(1, 10));
  CHECK(topological_order(m, {"R", "T"}) == std::vector<ExperimentId>{"T", "R"});
}
