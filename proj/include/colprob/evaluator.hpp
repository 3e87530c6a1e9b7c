#pragma once

#include <string>
#include <variant>
#include <vector>

#include "colprob/formula.hpp"
#include "colprob/model.hpp"
#include "colprob/rational.hpp"
#include "colprob/semantics.hpp"

namespace colprob {

/// Exact probability in [0, 1], or an undetermined verdict with a reason.
class ProbResult {
 public:
  static ProbResult determined(Rational value) { return ProbResult(std::move(value)); }
  static ProbResult undetermined(std::string reason) { return ProbResult(Undetermined{std::move(reason)}); }

  bool is_determined() const { return std::holds_alternative<Rational>(value_); }
  const Rational& value() const { return std::get<Rational>(value_); }
  const std::string& reason() const { return std::get<Undetermined>(value_).reason; }

  /// Same rational, or both undetermined. Reasons are not compared.
  friend bool operator==(const ProbResult& a, const ProbResult& b);

  std::string to_string() const;

 private:
  explicit ProbResult(Rational r) : value_(std::move(r)) {}
  explicit ProbResult(Undetermined u) : value_(std::move(u)) {}

  std::variant<Rational, Undetermined> value_;
};

/// Probability of the event space's points, marginalizing over any ancestors
/// of its support the space does not mention.
Rational space_prob(const EventSpace& s, const Model& model);

/// p(f). A `given`/`pgiven` root dispatches to cond_additive/cond_parallel;
/// anything else is denoted, lifted to its ancestral closure, and summed.
/// Throws UnknownAtomError, NestedConditionalError, NullConditionError.
ProbResult prob(const Formula& f, const Model& model);

/// p(e & f) / p(f). Undetermined unless supp(e) == supp(f).
ProbResult cond_additive(const Formula& e, const Formula& f, const Model& model);

/// p(e && f) / p(f).
ProbResult cond_parallel(const Formula& e, const Formula& f, const Model& model);

/// True when no experiment is an ancestor-or-self of both supports, i.e. the
/// two events are independent under the model.
bool independent(const std::set<ExperimentId>& a, const std::set<ExperimentId>& b, const Model& model);

enum class Rule {
  kR1,  // p(~E) = 1 - p(E)
  kR2,  // p(E | F) = p(E) + p(F) - p(E & F)
  kR3,  // p(E & F) = p(F) p(E given F)
  kR4,  // p(E || F) = 1 - p(~E && ~F)
  kR5,  // p(E && F) = p(F) p(E pgiven F)
  kR6,  // p(E) = p(E*)
  kR7,  // sum over mutually exclusive points
  kR8,  // single point as a conjunction of atoms
  kCpt,
  kEnumeration,
};

const char* rule_label(Rule r);

struct Derivation {
  Rule rule;
  std::string formula;
  ProbResult result;
  std::string note;
  std::vector<Derivation> children;
};

struct Explained {
  ProbResult result;
  Derivation derivation;
};

/// Same value as prob(f), computed by applying the rewrite rules top-down and
/// falling back to event-space enumeration where a rule's side condition fails.
Explained prob_explain(const Formula& f, const Model& model);

/// Indented tree, one node per line: "R4  6@d1 || 6@d2 = 11/36  [note]".
std::string render_derivation(const Derivation& d);

}  // namespace colprob
