#include "colprob/bayes.hpp"

#include "colprob/evaluator.hpp"
#include "colprob/parser.hpp"

namespace colprob {

const char* variant_name(BayesVariant v) { return v == BayesVariant::kAdditive ? "additive" : "parallel"; }

namespace {

Rational determined_or_throw(const ProbResult& r, BayesError::Kind kind, const Formula& f) {
  if (!r.is_determined())
    throw BayesError(kind, "'" + format_formula(f) + "' is undetermined: " + r.reason());
  return r.value();
}

Formula conjunction(BayesVariant v, const Formula& a, const Formula& b) {
  return v == BayesVariant::kAdditive ? Formula::choice_and(a, b) : Formula::par_and(a, b);
}

}  // namespace

PartitionReport check_partition(const std::vector<Formula>& cells, const Model& model, BayesVariant variant) {
  PartitionReport report;
  std::vector<Rational> priors;
  for (const auto& c : cells)
    priors.push_back(determined_or_throw(prob(c, model), BayesError::Kind::kUndeterminedCell, c));

  if (variant == BayesVariant::kAdditive) {
    for (std::size_t i = 1; i < cells.size(); ++i)
      if (cells[i].support() != cells[0].support())
        throw BayesError(BayesError::Kind::kSupportMismatch,
                         "support mismatch " + format_id_set(cells[0].support()) + " vs " +
                             format_id_set(cells[i].support()) + " (cells 1," + std::to_string(i + 1) + ")");
  }

  if (cells.size() < 2) report.violations.push_back("a partition needs at least 2 cells");
  for (std::size_t i = 0; i < cells.size(); ++i) {
    for (std::size_t j = i + 1; j < cells.size(); ++j) {
      const Formula both = conjunction(variant, cells[i], cells[j]);
      const Rational overlap = determined_or_throw(prob(both, model), BayesError::Kind::kUndeterminedCell, both);
      if (!overlap.is_zero())
        report.violations.push_back("cells " + std::to_string(i + 1) + "," + std::to_string(j + 1) +
                                    " not disjoint (p = " + overlap.to_string() + ")");
    }
  }
  for (const auto& p : priors) report.total += p;
  report.exhaustive = report.total == Rational(1);
  return report;
}

BayesResult bayes(BayesVariant variant, const std::vector<Formula>& cells, const Formula& evidence,
                  const Model& model) {
  BayesResult out;
  out.partition = check_partition(cells, model, variant);
  if (!out.partition.disjoint()) {
    std::string msg = "not a partition:";
    for (const auto& v : out.partition.violations) msg += " " + v + ";";
    msg.pop_back();
    throw BayesError(BayesError::Kind::kNotPartition, msg);
  }

  determined_or_throw(prob(evidence, model), BayesError::Kind::kUndeterminedEvidence, evidence);
  if (variant == BayesVariant::kAdditive && evidence.support() != cells[0].support())
    throw BayesError(BayesError::Kind::kSupportMismatch,
                     "support mismatch " + format_id_set(cells[0].support()) + " vs " +
                         format_id_set(evidence.support()) +
                         ": the additive rule needs cells and evidence from one experiment; use the parallel variant");

  Rational denominator = 0;
  for (const auto& c : cells) {
    const Rational joint = prob(conjunction(variant, c, evidence), model).value();
    const Rational prior = prob(c, model).value();
    Rational prior_likelihood = 0;
    if (!prior.is_zero()) {
      const ProbResult likelihood = variant == BayesVariant::kAdditive ? cond_additive(evidence, c, model)
                                                                       : cond_parallel(evidence, c, model);
      prior_likelihood = prior * likelihood.value();
    }
    if (joint != prior_likelihood)
      throw std::logic_error("Bayes forms disagree for cell '" + format_formula(c) + "': " + joint.to_string() +
                             " vs " + prior_likelihood.to_string());
    out.joint_terms.push_back(joint);
    out.prior_likelihood_terms.push_back(prior_likelihood);
    denominator += joint;
  }
  if (denominator.is_zero())
    throw BayesError(BayesError::Kind::kZeroEvidence,
                     "evidence '" + format_formula(evidence) + "' has probability 0 on every cell");
  for (const auto& j : out.joint_terms) out.posteriors.push_back(j / denominator);
  return out;
}

BayesResult bayes_additive(const std::vector<Formula>& cells, const Formula& evidence, const Model& model) {
  return bayes(BayesVariant::kAdditive, cells, evidence, model);
}

BayesResult bayes_parallel(const std::vector<Formula>& cells, const Formula& evidence, const Model& model) {
  return bayes(BayesVariant::kParallel, cells, evidence, model);
}

}  // namespace colprob
