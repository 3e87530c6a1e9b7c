#pragma once

#include <string>
#include <vector>

#include "colprob/formula.hpp"
#include "colprob/model.hpp"
#include "colprob/rational.hpp"

namespace colprob {

/// Which conjunction the Bayes rule is read over: `&` within one experiment
/// (additive) or `&&` across experiments (parallel).
enum class BayesVariant { kAdditive, kParallel };

const char* variant_name(BayesVariant v);

struct BayesError : Error {
  enum class Kind { kUndeterminedCell, kSupportMismatch, kNotPartition, kUndeterminedEvidence, kZeroEvidence };
  BayesError(Kind k, const std::string& msg) : Error(msg), kind(k) {}
  Kind kind;
};

struct PartitionReport {
  std::vector<std::string> violations;  // empty iff the cells are pairwise disjoint
  Rational total;                       // sum of p(cell_i)
  bool exhaustive = false;              // total == 1; reported, never required

  bool disjoint() const { return violations.empty(); }
};

/// Checks pairwise disjointness: p(cell_i & cell_j) == 0 (additive) or
/// p(cell_i && cell_j) == 0 (parallel). Throws BayesError if a cell is
/// undetermined or, for the additive variant, the cells' supports differ.
PartitionReport check_partition(const std::vector<Formula>& cells, const Model& model, BayesVariant variant);

struct BayesResult {
  PartitionReport partition;
  std::vector<Rational> posteriors;
  /// p(cell_i & F) or p(cell_i && F): the joint-form numerators.
  std::vector<Rational> joint_terms;
  /// p(cell_i) p(F given cell_i) or p(cell_i) p(F pgiven cell_i); 0 when
  /// p(cell_i) = 0. Equal to joint_terms term by term.
  std::vector<Rational> prior_likelihood_terms;
};

/// posterior_i = p(cell_i & F) / sum_j p(cell_j & F). Evidence must share the
/// cells' support.
BayesResult bayes_additive(const std::vector<Formula>& cells, const Formula& evidence, const Model& model);

/// posterior_i = p(cell_i && F) / sum_j p(cell_j && F).
BayesResult bayes_parallel(const std::vector<Formula>& cells, const Formula& evidence, const Model& model);

BayesResult bayes(BayesVariant variant, const std::vector<Formula>& cells, const Formula& evidence,
                  const Model& model);

}  // namespace colprob
