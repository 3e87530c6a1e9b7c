#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "colprob/bayes.hpp"
#include "colprob/evaluator.hpp"
#include "colprob/model.hpp"
#include "colprob/oracle.hpp"

namespace colprob::cli {

inline constexpr int kExitDetermined = 0;
inline constexpr int kExitError = 1;
inline constexpr int kExitUndetermined = 2;

struct OracleCheck {
  std::optional<ProbResult> result;  // empty if the oracle itself failed
  std::string error;
  bool agrees = false;
};

/// Everything reported for one query. `status` is "determined",
/// "undetermined" or "error"; `value` is set iff status is "determined".
struct QueryOutput {
  std::string query;
  std::string status;
  std::optional<Rational> value;
  std::optional<std::string> reason;
  std::optional<Derivation> derivation;
  std::optional<OracleCheck> oracle;
  std::optional<oracle::McEstimate> mc;
  std::vector<std::string> warnings;
};

struct EvalOptions {
  std::string model_path;
  std::string query;
  bool explain = false;
  bool oracle = false;
  bool json = false;
  std::optional<std::uint64_t> mc_samples;
  std::uint64_t seed = 1;
};

struct BayesOptions {
  std::string model_path;
  std::vector<std::string> cells;
  std::string evidence;
  BayesVariant variant = BayesVariant::kParallel;
  bool json = false;
};

/// Evaluates one query. Never throws; failures land in status/reason.
QueryOutput evaluate_query(const Model& model, const std::string& query, const EvalOptions& opts);

/// Single-line JSON with keys in a fixed order:
/// query, status, value, decimal, reason, derivation, oracle, mc.
std::string to_json(const QueryOutput& q);

/// "1/3 (≈0.3333)" or "undetermined: <reason>" plus optional sections.
std::string to_text(const QueryOutput& q);

int exit_code(const QueryOutput& q);

int run_eval(const EvalOptions& opts, std::ostream& out, std::ostream& err);
int run_bayes(const BayesOptions& opts, std::ostream& out, std::ostream& err);
int run_check(const std::string& model_path, std::ostream& out, std::ostream& err);

/// Reads commands until `:quit` or end of input. Errors are reported inline
/// and never end the loop.
int run_repl(const Model& model, std::istream& in, std::ostream& out, bool prompt = false);

/// Entry point behind the `colprob` executable.
int run_cli(int argc, const char* const* argv, std::istream& in, std::ostream& out, std::ostream& err,
            bool interactive = false);

}  // namespace colprob::cli
