#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <sstream>

#include "colprob/app.hpp"
#include "colprob/parser.hpp"

using namespace colprob;
using namespace colprob::cli;

namespace {

const std::string kModels = COLPROB_MODELS_DIR;

const Model& paper() {
  static const Model m = load_model(kModels + "/paper.model");
  return m;
}

const Model& channel() {
  static const Model m = load_model(kModels + "/channel.model");
  return m;
}

struct Run {
  int code;
  std::string out, err;
};

Run invoke(std::vector<std::string> args, const std::string& input = "") {
  args.insert(args.begin(), "colprob");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::istringstream in(input);
  std::ostringstream out, err;
  const int code = run_cli(static_cast<int>(argv.size()), argv.data(), in, out, err);
  return {code, out.str(), err.str()};
}

}  // namespace

TEST_CASE("evaluate_query") {
  SUBCASE("determined") {
    const auto q = evaluate_query(paper(), "4@d | 5@d", {});
    CHECK(q.status == "determined");
    CHECK(to_text(q) == "1/3 (≈0.3333)\n");
    CHECK(exit_code(q) == kExitDetermined);
  }
  SUBCASE("undetermined") {
    const auto q = evaluate_query(paper(), "H@c1 | T@c2", {});
    CHECK(q.status == "undetermined");
    CHECK_FALSE(q.value);
    CHECK(exit_code(q) == kExitUndetermined);
    CHECK(to_text(q).rfind("undetermined: ", 0) == 0);
  }
  SUBCASE("conditional on the channel") {
    const auto q = evaluate_query(channel(), "0@T pgiven 0@R", {});
    CHECK(q.value == Rational(9, 10));
    CHECK(exit_code(q) == kExitDetermined);
  }
  SUBCASE("errors never throw") {
    for (const char* text : {"H@", "7@d", "~(H@c given H@c)", "H@c given H@c & T@c", ""}) {
      const auto q = evaluate_query(paper(), text, {});
      CHECK(q.status == "error");
      CHECK(q.reason);
      CHECK(exit_code(q) == kExitError);
    }
  }
  SUBCASE("oracle and mc sections") {
    EvalOptions o;
    o.oracle = true;
    o.mc_samples = 2000;
    o.seed = 9;
    const auto q = evaluate_query(paper(), "6@d1 || 6@d2", o);
    REQUIRE(q.oracle);
    CHECK(q.oracle->agrees);
    REQUIRE(q.mc);
    CHECK(q.mc->samples == 2000);
    CHECK(q.mc->seed == 9);
    const auto u = evaluate_query(paper(), "H@c1 | T@c2", o);
    REQUIRE(u.oracle);
    CHECK(u.oracle->agrees);
    CHECK_FALSE(u.mc);
  }
}

TEST_CASE("to_json") {
  const auto q = evaluate_query(paper(), "4@d | 5@d", {});
  CHECK(to_json(q) ==
        R"({"query":"4@d | 5@d","status":"determined","value":"1/3","decimal":"0.3333","reason":null,)"
        R"("derivation":null,"oracle":null,"mc":null})");
  const auto u = evaluate_query(paper(), "H@c1 | T@c2", {});
  const std::string j = to_json(u);
  CHECK(j.find(R"("status":"undetermined","value":null,"decimal":null,"reason":")") != std::string::npos);

  EvalOptions o;
  o.explain = true;
  o.oracle = true;
  o.mc_samples = 100;
  const std::string a = to_json(evaluate_query(paper(), "H@c || 6@d", o));
  CHECK(a == to_json(evaluate_query(paper(), "H@c || 6@d", o)));
  const auto keys = {"\"query\"", "\"status\"", "\"value\"", "\"decimal\"", "\"reason\"", "\"derivation\"",
                     "\"oracle\"", "\"mc\""};
  std::size_t at = 0;
  for (const char* k : keys) {
    const auto pos = a.find(k, at);
    REQUIRE(pos != std::string::npos);
    at = pos;
  }
  CHECK(a.find(R"("mc":{"estimate":)") != std::string::npos);
  CHECK(a.find(R"("stderr":)") != std::string::npos);
}

TEST_CASE("repl") {
  std::istringstream in(":space (3@d | 4@d) & 4@d\n"
                        ":explain 6@d1 || 6@d2\n"
                        "4@d | 5@d\n"
                        "H@\n"
                        ":nope\n"
                        ":quit\n"
                        "alien\n");
  std::ostringstream out;
  CHECK(run_repl(paper(), in, out) == 0);
  const std::string s = out.str();
  CHECK(s.find("{ {d=4} }\n4@d\n") != std::string::npos);
  const auto explain_end = s.find("11/36 (≈0.3056)\n");
  CHECK(explain_end != std::string::npos);
  CHECK(s.find("R4  6@d1 || 6@d2 = 11/36") != std::string::npos);
  CHECK(s.find("1/3 (≈0.3333)\n") != std::string::npos);
  CHECK(s.find("error: ") != std::string::npos);
  CHECK(s.find("unknown command ':nope'") != std::string::npos);
  CHECK(s.find("1/1000") == std::string::npos);  // nothing read after :quit

  std::istringstream bayes_in(":bayes parallel [0@T, 1@T] 0@R\n:bayes additive [0@T, 1@T] 0@R\n");
  std::ostringstream bayes_out;
  CHECK(run_repl(channel(), bayes_in, bayes_out) == 0);
  CHECK(bayes_out.str().find("p(0@T pgiven 0@R) = 9/10\n") != std::string::npos);
  CHECK(bayes_out.str().find("error: support mismatch {T} vs {R}") != std::string::npos);

  std::istringstream eof("4@d\n");
  std::ostringstream eof_out;
  CHECK(run_repl(paper(), eof, eof_out) == 0);
}

TEST_CASE("run_cli") {
  SUBCASE("eval exit codes") {
    auto r = invoke({"eval", "--model", kModels + "/dice.model", "--query", "4@d | 5@d"});
    CHECK(r.code == 0);
    CHECK(r.out == "1/3 (≈0.3333)\n");
    CHECK(invoke({"eval", "--model", kModels + "/paper.model", "--query", "H@c1 | T@c2"}).code == 2);
    CHECK(invoke({"eval", "--model", kModels + "/paper.model", "--query", "H@"}).code == 1);
    CHECK(invoke({"eval", "--model", kModels + "/missing.model", "--query", "H@c"}).code == 1);
    CHECK(invoke({"eval", "--model", kModels + "/paper.model"}).code == 1);
    CHECK(invoke({}).code == 1);
  }
  SUBCASE("eval on the channel") {
    auto r = invoke({"eval", "--model", kModels + "/channel.model", "--query", "0@T pgiven 0@R"});
    CHECK(r.code == 0);
    CHECK(r.out.rfind("9/10", 0) == 0);
  }
  SUBCASE("bayes") {
    auto ok = invoke({"bayes", "--model", kModels + "/channel.model", "--variant", "parallel", "--cell", "0@T", "--cell",
                   "1@T", "--evidence", "0@R"});
    CHECK(ok.code == 0);
    CHECK(ok.out.find("p(0@T pgiven 0@R) = 9/10") != std::string::npos);
    CHECK(ok.out.find("p(1@T pgiven 0@R) = 1/10") != std::string::npos);
    auto bad = invoke({"bayes", "--model", kModels + "/channel.model", "--variant", "additive", "--cell", "0@T",
                    "--cell", "1@T", "--evidence", "0@R"});
    CHECK(bad.code == 1);
    CHECK(bad.err.find("support mismatch {T} vs {R}") != std::string::npos);
    auto coin = invoke({"bayes", "--model", kModels + "/coins.model", "--variant", "additive", "--cell", "H@c",
                     "--cell", "T@c", "--evidence", "H@c"});
    CHECK(coin.code == 0);
    CHECK(coin.out.find("p(H@c given H@c) = 1 ") != std::string::npos);
    CHECK(coin.out.find("p(T@c given H@c) = 0 ") != std::string::npos);
  }
  SUBCASE("check and repl") {
    auto c = invoke({"check", "--model", kModels + "/channel.model"});
    CHECK(c.code == 0);
    CHECK(c.out.rfind("ok: 2 experiments", 0) == 0);
    auto r = invoke({"repl", "--model", kModels + "/paper.model"}, "4@d | 5@d\n:quit\n");
    CHECK(r.code == 0);
    CHECK(r.out == "1/3 (≈0.3333)\n");
  }
}
