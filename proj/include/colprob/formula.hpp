#pragma once

#include <memory>
#include <set>
#include <string>

#include "colprob/model.hpp"

namespace colprob {

enum class FormulaKind {
  kAtom,
  kNot,         // ~
  kChoiceAnd,   // &
  kChoiceOr,    // |
  kParAnd,      // &&
  kParOr,       // ||
  kGivenAdd,    // given   (additive conditional)
  kGivenPar,    // pgiven  (parallel conditional)
};

/// Immutable event-formula tree. Copies share subtrees.
class Formula {
 public:
  static Formula atom(Atom a);
  static Formula atom(ExperimentId experiment, Outcome outcome);
  static Formula negation(Formula f);
  static Formula binary(FormulaKind kind, Formula lhs, Formula rhs);

  static Formula choice_and(Formula a, Formula b) { return binary(FormulaKind::kChoiceAnd, std::move(a), std::move(b)); }
  static Formula choice_or(Formula a, Formula b) { return binary(FormulaKind::kChoiceOr, std::move(a), std::move(b)); }
  static Formula par_and(Formula a, Formula b) { return binary(FormulaKind::kParAnd, std::move(a), std::move(b)); }
  static Formula par_or(Formula a, Formula b) { return binary(FormulaKind::kParOr, std::move(a), std::move(b)); }
  static Formula given_add(Formula event, Formula condition) { return binary(FormulaKind::kGivenAdd, std::move(event), std::move(condition)); }
  static Formula given_par(Formula event, Formula condition) { return binary(FormulaKind::kGivenPar, std::move(event), std::move(condition)); }

  FormulaKind kind() const { return node_->kind; }
  bool is_binary() const { return node_->kind != FormulaKind::kAtom && node_->kind != FormulaKind::kNot; }
  bool is_conditional() const {
    return node_->kind == FormulaKind::kGivenAdd || node_->kind == FormulaKind::kGivenPar;
  }

  const Atom& atom() const { return node_->atom; }
  /// Operand of ~, or left operand (the event, for conditionals).
  const Formula& lhs() const { return *node_->lhs; }
  /// Right operand (the condition, for conditionals).
  const Formula& rhs() const { return *node_->rhs; }

  /// Structural equality.
  friend bool operator==(const Formula& a, const Formula& b);

  /// Experiments mentioned anywhere in the formula. Equals the support of its
  /// event space whenever that is defined.
  std::set<ExperimentId> support() const;

  bool contains_conditional() const;
  int depth() const;

 private:
  struct Node {
    FormulaKind kind;
    Atom atom;
    std::shared_ptr<const Formula> lhs;
    std::shared_ptr<const Formula> rhs;
  };
  explicit Formula(std::shared_ptr<const Node> n) : node_(std::move(n)) {}

  std::shared_ptr<const Node> node_;
};

const char* operator_symbol(FormulaKind kind);

}  // namespace colprob
