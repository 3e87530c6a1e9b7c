#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "colprob/errors.hpp"
#include "colprob/rational.hpp"

namespace colprob {

using ExperimentId = std::string;
using Outcome = std::string;

/// An outcome of one experiment, e.g. `6@d`.
struct Atom {
  ExperimentId experiment;
  Outcome outcome;

  friend bool operator==(const Atom&, const Atom&) = default;
  friend auto operator<=>(const Atom&, const Atom&) = default;
};

/// A (partial) assignment of outcomes to experiments. Ordered by experiment
/// id, so two assignments with the same content compare equal regardless of
/// how they were built.
using Assignment = std::map<ExperimentId, Outcome>;

inline constexpr const char* kPredicateTrue = "true";
inline constexpr const char* kPredicateFalse = "false";

struct ExperimentDecl {
  /// Parent outcomes, listed in the order of `parents`. Empty for
  /// parentless experiments.
  using ParentKey = std::vector<Outcome>;
  using Row = std::map<Outcome, Rational>;

  ExperimentId id;
  std::vector<Outcome> outcomes;
  std::vector<ExperimentId> parents;
  std::map<ParentKey, Row> cpt;
  bool predicate = false;
  int line = 0;  // source line when read from a model file

  static ExperimentDecl uniform(ExperimentId id, std::vector<Outcome> outcomes);
  static ExperimentDecl weighted(ExperimentId id,
                                 const std::vector<std::pair<Outcome, Rational>>& weights);
  /// A true/false experiment with p(true) = p_true.
  static ExperimentDecl make_predicate(ExperimentId id, const Rational& p_true);

  bool has_outcome(const Outcome& o) const;

  /// cpt(outcome | parent outcomes); a missing entry reads as 0.
  Rational prob(const Outcome& outcome, const ParentKey& parent_outcomes) const;
};

/// A set of declared experiments. Immutable once built; lookups go through an
/// index keyed by id (the first declaration wins if ids repeat, which
/// validate_model reports).
class Model {
 public:
  Model() = default;
  explicit Model(std::vector<ExperimentDecl> decls);

  const std::vector<ExperimentDecl>& experiments() const { return decls_; }
  const ExperimentDecl* find(const ExperimentId& id) const;
  /// Throws UnknownExperimentError.
  const ExperimentDecl& at(const ExperimentId& id) const;

  /// Throws UnknownAtomError if the experiment or outcome is not declared.
  void check_atom(const Atom& atom) const;

 private:
  std::vector<ExperimentDecl> decls_;
  std::map<ExperimentId, std::size_t> index_;
};

/// Every violated invariant; empty means the model is valid.
std::vector<ValidationIssue> validate_model(const Model& model);

/// Throws ModelError when validate_model reports anything.
void require_valid(const Model& model);

/// Smallest superset of `support` closed under the parent relation.
std::set<ExperimentId> ancestral_closure(const Model& model, const std::set<ExperimentId>& support);

/// The experiments of `ids` ordered so that parents precede children.
std::vector<ExperimentId> topological_order(const Model& model, const std::set<ExperimentId>& ids);

/// Product over the assignment's experiments of cpt(outcome | parents).
/// The assignment's domain must be ancestrally closed.
Rational joint_point_prob(const Model& model, const Assignment& assignment);

/// Number of full assignments over `ids`, saturating at UINT64_MAX.
std::uint64_t joint_size(const Model& model, const std::set<ExperimentId>& ids);

/// Calls `fn` once per full assignment over `ids`, in lexicographic order of
/// declared outcome indices.
void for_each_assignment(const Model& model, const std::set<ExperimentId>& ids,
                         const std::function<void(const Assignment&)>& fn);

std::string format_id_set(const std::set<ExperimentId>& ids);

}  // namespace colprob
