#include "colprob/app.hpp"

#include <cstdio>
#include <iomanip>
#include <istream>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "colprob/parser.hpp"
#include "colprob/semantics.hpp"

namespace colprob::cli {

using Json = nlohmann::ordered_json;

namespace {

Json derivation_json(const Derivation& d) {
  Json j;
  j["rule"] = rule_label(d.rule);
  j["formula"] = d.formula;
  j["status"] = d.result.is_determined() ? "determined" : "undetermined";
  j["value"] = d.result.is_determined() ? Json(d.result.value().to_string()) : Json(nullptr);
  j["note"] = d.note;
  j["children"] = Json::array();
  for (const auto& c : d.children) j["children"].push_back(derivation_json(c));
  return j;
}

std::string result_text(const ProbResult& r) {
  if (!r.is_determined()) return "undetermined (" + r.reason() + ")";
  return r.value().to_string() + " (≈" + r.value().to_decimal() + ")";
}

std::string format_double(double v, int precision) {
  std::ostringstream os;
  os << std::fixed << std::setprecision(precision) << v;
  return os.str();
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

}  // namespace

QueryOutput evaluate_query(const Model& model, const std::string& query, const EvalOptions& opts) {
  QueryOutput q;
  q.query = query;
  try {
    const Formula f = parse_formula(query);
    const ProbResult r = prob(f, model);
    if (r.is_determined()) {
      q.status = "determined";
      q.value = r.value();
    } else {
      q.status = "undetermined";
      q.reason = r.reason();
    }
    if (!f.is_conditional()) q.warnings = denote(f, model).warnings;
    if (opts.explain) q.derivation = prob_explain(f, model).derivation;
    if (opts.oracle) {
      OracleCheck check;
      try {
        check.result = oracle::enumerate_prob(f, model);
        check.agrees = *check.result == r;
      } catch (const Error& e) {
        check.error = e.what();
      }
      q.oracle = std::move(check);
    }
    if (opts.mc_samples && r.is_determined())
      q.mc = oracle::mc_estimate(f, model, oracle::SampleConfig{*opts.mc_samples, opts.seed});
  } catch (const Error& e) {
    q.status = "error";
    q.value.reset();
    q.reason = e.what();
  } catch (const std::exception& e) {
    q.status = "error";
    q.value.reset();
    q.reason = std::string("internal error: ") + e.what();
  }
  return q;
}

std::string to_json(const QueryOutput& q) {
  Json j;
  j["query"] = q.query;
  j["status"] = q.status;
  j["value"] = q.value ? Json(q.value->to_string()) : Json(nullptr);
  j["decimal"] = q.value ? Json(q.value->to_decimal()) : Json(nullptr);
  j["reason"] = q.reason ? Json(*q.reason) : Json(nullptr);
  j["derivation"] = q.derivation ? derivation_json(*q.derivation) : Json(nullptr);
  if (q.oracle) {
    Json o;
    o["status"] = !q.oracle->result ? "error" : q.oracle->result->is_determined() ? "determined" : "undetermined";
    o["value"] = q.oracle->result && q.oracle->result->is_determined() ? Json(q.oracle->result->value().to_string())
                                                                       : Json(nullptr);
    o["agrees"] = q.oracle->agrees;
    j["oracle"] = o;
  } else {
    j["oracle"] = nullptr;
  }
  if (q.mc) {
    Json m;
    m["estimate"] = q.mc->estimate;
    m["stderr"] = q.mc->std_error;
    m["samples"] = q.mc->samples;
    m["seed"] = q.mc->seed;
    j["mc"] = m;
  } else {
    j["mc"] = nullptr;
  }
  return j.dump();
}

std::string to_text(const QueryOutput& q) {
  std::string out;
  if (q.status == "determined") {
    out = q.value->to_string() + " (≈" + q.value->to_decimal() + ")\n";
  } else if (q.status == "undetermined") {
    out = "undetermined: " + q.reason.value_or("") + "\n";
  } else {
    out = "error: " + q.reason.value_or("") + "\n";
  }
  for (const auto& w : q.warnings) out += "warning: " + w + "\n";
  if (q.derivation) out += render_derivation(*q.derivation);
  if (q.oracle) {
    if (!q.oracle->result) {
      out += "oracle: error (" + q.oracle->error + ")\n";
    } else {
      out += "oracle: " + result_text(*q.oracle->result) + (q.oracle->agrees ? " (agrees)" : " (DISAGREES)") + "\n";
    }
  }
  if (q.mc)
    out += "mc: " + format_double(q.mc->estimate, 4) + " ± " + format_double(q.mc->std_error, 4) +
           " (n=" + std::to_string(q.mc->samples) + ", seed=" + std::to_string(q.mc->seed) + ")\n";
  return out;
}

int exit_code(const QueryOutput& q) {
  if (q.status == "error") return kExitError;
  if (q.oracle && !q.oracle->agrees) return kExitError;
  return q.status == "determined" ? kExitDetermined : kExitUndetermined;
}

int run_eval(const EvalOptions& opts, std::ostream& out, std::ostream& err) {
  Model model;
  try {
    model = load_model(opts.model_path);
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kExitError;
  }
  const QueryOutput q = evaluate_query(model, opts.query, opts);
  if (opts.json) {
    out << to_json(q) << "\n";
    if (q.status == "error") err << "error: " << q.reason.value_or("") << "\n";
  } else if (q.status == "error") {
    err << "error: " << q.reason.value_or("") << "\n";
  } else {
    out << to_text(q);
  }
  if (q.oracle && !q.oracle->agrees) err << "error: evaluator and enumeration oracle disagree\n";
  return exit_code(q);
}

namespace {

std::string conditional_text(const std::string& cell, const std::string& evidence, BayesVariant v) {
  try {
    const Formula e = parse_formula(cell), f = parse_formula(evidence);
    return format_formula(v == BayesVariant::kAdditive ? Formula::given_add(e, f) : Formula::given_par(e, f));
  } catch (const ParseError&) {
    return "(" + cell + ") " + (v == BayesVariant::kAdditive ? "given" : "pgiven") + " (" + evidence + ")";
  }
}

struct BayesRun {
  std::optional<PartitionReport> partition;
  std::optional<BayesResult> result;
  std::string error;
};

BayesRun bayes_run(const Model& model, const std::vector<std::string>& cell_texts, const std::string& evidence_text,
                   BayesVariant variant) {
  BayesRun run;
  try {
    std::vector<Formula> cells;
    for (const auto& c : cell_texts) cells.push_back(parse_formula(c));
    const Formula evidence = parse_formula(evidence_text);
    run.partition = check_partition(cells, model, variant);
    if (!run.partition->disjoint()) {
      run.error = "not a partition";
      return run;
    }
    run.result = bayes(variant, cells, evidence, model);
  } catch (const Error& e) {
    run.error = e.what();
  }
  return run;
}

std::string partition_text(const PartitionReport& p) {
  std::string s = "partition: ";
  s += p.disjoint() ? "disjoint" : "NOT disjoint";
  s += ", ";
  s += p.exhaustive ? "exhaustive" : "not exhaustive";
  s += " (sum p = " + p.total.to_string() + ")\n";
  for (const auto& v : p.violations) s += "  violation: " + v + "\n";
  return s;
}

}  // namespace

int run_bayes(const BayesOptions& opts, std::ostream& out, std::ostream& err) {
  Model model;
  try {
    model = load_model(opts.model_path);
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kExitError;
  }
  const BayesRun run = bayes_run(model, opts.cells, opts.evidence, opts.variant);

  if (opts.json) {
    Json j;
    j["variant"] = variant_name(opts.variant);
    j["evidence"] = opts.evidence;
    j["status"] = run.result ? "ok" : "error";
    j["reason"] = run.result ? Json(nullptr) : Json(run.error);
    if (run.partition) {
      Json p;
      p["disjoint"] = run.partition->disjoint();
      p["exhaustive"] = run.partition->exhaustive;
      p["total"] = run.partition->total.to_string();
      p["violations"] = run.partition->violations;
      j["partition"] = p;
    } else {
      j["partition"] = nullptr;
    }
    j["posteriors"] = Json::array();
    if (run.result) {
      for (std::size_t i = 0; i < opts.cells.size(); ++i) {
        QueryOutput q;
        q.query = conditional_text(opts.cells[i], opts.evidence, opts.variant);
        q.status = "determined";
        q.value = run.result->posteriors[i];
        j["posteriors"].push_back(Json::parse(to_json(q)));
      }
    }
    out << j.dump() << "\n";
  } else {
    if (run.partition) out << partition_text(*run.partition);
    if (run.result)
      for (std::size_t i = 0; i < opts.cells.size(); ++i)
        out << "p(" << conditional_text(opts.cells[i], opts.evidence, opts.variant) << ") = "
            << run.result->posteriors[i].to_string() << " (≈" << run.result->posteriors[i].to_decimal() << ")\n";
  }
  if (!run.result) {
    err << "error: " << run.error << "\n";
    return kExitError;
  }
  return kExitDetermined;
}

int run_check(const std::string& model_path, std::ostream& out, std::ostream& err) {
  try {
    const Model model = load_model(model_path);
    out << "ok: " << model.experiments().size() << " experiment"
        << (model.experiments().size() == 1 ? "" : "s") << "\n";
    for (const auto& d : model.experiments()) {
      out << "  " << (d.predicate ? "predicate " : "experiment ") << d.id << " : " << d.outcomes.size()
          << " outcome" << (d.outcomes.size() == 1 ? "" : "s");
      if (!d.parents.empty()) {
        out << ", depends";
        for (std::size_t i = 0; i < d.parents.size(); ++i) out << (i ? ", " : " ") << d.parents[i];
      }
      out << "\n";
    }
    return kExitDetermined;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kExitError;
  }
}

namespace {

const char* kReplHelp =
    "  <formula>                          probability of the formula\n"
    "  :space <formula>                   event space and set normal form\n"
    "  :explain <formula>                 derivation tree\n"
    "  :bayes <additive|parallel> [c1, c2, ...] <evidence>\n"
    "  :help                              this text\n"
    "  :quit                              leave\n";

void repl_space(const Model& model, const std::string& text, std::ostream& out) {
  const Formula f = parse_formula(text);
  const Denotation d = denote(f, model);
  if (!d.determined()) {
    out << "undetermined: " << d.reason() << "\n";
    return;
  }
  out << format_space(d.space()) << "\n";
  if (d.space().empty())
    out << "(empty space: no set normal form)\n";
  else
    out << format_formula(to_set_normal_form(d.space())) << "\n";
  for (const auto& w : d.warnings) out << "warning: " << w << "\n";
}

void repl_bayes(const Model& model, const std::string& args, std::ostream& out) {
  std::istringstream is(args);
  std::string variant_text;
  is >> variant_text;
  BayesVariant variant;
  if (variant_text == "additive") {
    variant = BayesVariant::kAdditive;
  } else if (variant_text == "parallel") {
    variant = BayesVariant::kParallel;
  } else {
    out << "error: expected 'additive' or 'parallel', got '" << variant_text << "'\n";
    return;
  }
  std::string rest;
  std::getline(is, rest, '\0');
  const auto open = rest.find('['), close = rest.find(']');
  if (open == std::string::npos || close == std::string::npos || close < open) {
    out << "error: usage: :bayes <additive|parallel> [cell, cell, ...] <evidence>\n";
    return;
  }
  std::vector<std::string> cells;
  std::istringstream cs(rest.substr(open + 1, close - open - 1));
  for (std::string c; std::getline(cs, c, ',');) cells.push_back(trim(c));
  const std::string evidence = trim(rest.substr(close + 1));
  const BayesRun run = bayes_run(model, cells, evidence, variant);
  if (run.partition) out << partition_text(*run.partition);
  if (!run.result) {
    out << "error: " << run.error << "\n";
    return;
  }
  for (std::size_t i = 0; i < cells.size(); ++i)
    out << "p(" << conditional_text(cells[i], evidence, variant) << ") = " << run.result->posteriors[i].to_string()
        << "\n";
}

}  // namespace

int run_repl(const Model& model, std::istream& in, std::ostream& out, bool prompt) {
  std::string line;
  while (true) {
    if (prompt) out << "colprob> " << std::flush;
    if (!std::getline(in, line)) break;
    line = trim(line);
    if (line.empty() || line[0] == '#') continue;
    try {
      if (line[0] != ':') {
        out << to_text(evaluate_query(model, line, EvalOptions{}));
        continue;
      }
      const auto sp = line.find_first_of(" \t");
      const std::string cmd = line.substr(0, sp);
      const std::string arg = sp == std::string::npos ? "" : trim(line.substr(sp));
      if (cmd == ":quit" || cmd == ":q") return 0;
      if (cmd == ":help") {
        out << kReplHelp;
      } else if (cmd == ":space") {
        repl_space(model, arg, out);
      } else if (cmd == ":explain") {
        EvalOptions opts;
        opts.explain = true;
        const QueryOutput q = evaluate_query(model, arg, opts);
        if (q.derivation) out << render_derivation(*q.derivation);
        out << to_text(QueryOutput{q.query, q.status, q.value, q.reason, {}, {}, {}, q.warnings});
      } else if (cmd == ":bayes") {
        repl_bayes(model, arg, out);
      } else {
        out << "error: unknown command '" << cmd << "' (try :help)\n";
      }
    } catch (const std::exception& e) {
      out << "error: " << e.what() << "\n";
    }
  }
  return 0;
}

int run_cli(int argc, const char* const* argv, std::istream& in, std::ostream& out, std::ostream& err,
            bool interactive) {
  CLI::App app{"Exact probabilities for event formulas over declared experiments", "colprob"};
  app.require_subcommand(1);

  EvalOptions eval;
  std::uint64_t mc_samples = 0;
  auto* eval_cmd = app.add_subcommand("eval", "Evaluate one query");
  eval_cmd->add_option("--model", eval.model_path, "Model file")->required();
  eval_cmd->add_option("--query", eval.query, "Event formula")->required();
  eval_cmd->add_flag("--explain", eval.explain, "Print the derivation tree");
  eval_cmd->add_flag("--oracle", eval.oracle, "Cross-check with brute-force enumeration");
  auto* mc_opt = eval_cmd->add_option("--mc-samples", mc_samples, "Monte Carlo cross-check sample count")
                     ->check(CLI::PositiveNumber);
  eval_cmd->add_option("--seed", eval.seed, "Monte Carlo seed");
  eval_cmd->add_flag("--json", eval.json, "Emit one JSON object");

  BayesOptions bayes_opts;
  std::string variant = "parallel";
  auto* bayes_cmd = app.add_subcommand("bayes", "Posteriors over a partition");
  bayes_cmd->add_option("--model", bayes_opts.model_path, "Model file")->required();
  bayes_cmd->add_option("--variant", variant, "additive or parallel")
      ->check(CLI::IsMember({"additive", "parallel"}));
  bayes_cmd->add_option("--cell", bayes_opts.cells, "Partition cell (repeat)")->required();
  bayes_cmd->add_option("--evidence", bayes_opts.evidence, "Evidence formula")->required();
  bayes_cmd->add_flag("--json", bayes_opts.json, "Emit one JSON object");

  std::string repl_model;
  auto* repl_cmd = app.add_subcommand("repl", "Interactive session");
  repl_cmd->add_option("--model", repl_model, "Model file")->required();

  std::string check_model;
  auto* check_cmd = app.add_subcommand("check", "Validate a model file");
  check_cmd->add_option("--model", check_model, "Model file")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e, out, err);
    return rc == 0 ? 0 : kExitError;
  }

  if (*eval_cmd) {
    if (*mc_opt) eval.mc_samples = mc_samples;
    return run_eval(eval, out, err);
  }
  if (*bayes_cmd) {
    bayes_opts.variant = variant == "additive" ? BayesVariant::kAdditive : BayesVariant::kParallel;
    return run_bayes(bayes_opts, out, err);
  }
  if (*repl_cmd) {
    try {
      const Model model = load_model(repl_model);
      return run_repl(model, in, out, interactive);
    } catch (const Error& e) {
      err << "error: " << e.what() << "\n";
      return kExitError;
    }
  }
  if (*check_cmd) return run_check(check_model, out, err);
  return kExitError;
}

}  // namespace colprob::cli
