#include "colprob/formula.hpp"

#include <algorithm>

namespace colprob {

Formula Formula::atom(Atom a) {
  return Formula(std::make_shared<const Node>(Node{FormulaKind::kAtom, std::move(a), nullptr, nullptr}));
}

Formula Formula::atom(ExperimentId experiment, Outcome outcome) {
  return atom(Atom{std::move(experiment), std::move(outcome)});
}

Formula Formula::negation(Formula f) {
  return Formula(std::make_shared<const Node>(
      Node{FormulaKind::kNot, {}, std::make_shared<const Formula>(std::move(f)), nullptr}));
}

Formula Formula::binary(FormulaKind kind, Formula lhs, Formula rhs) {
  return Formula(std::make_shared<const Node>(Node{kind, {},
                                                   std::make_shared<const Formula>(std::move(lhs)),
                                                   std::make_shared<const Formula>(std::move(rhs))}));
}

bool operator==(const Formula& a, const Formula& b) {
  if (a.node_ == b.node_) return true;
  if (a.kind() != b.kind()) return false;
  switch (a.kind()) {
    case FormulaKind::kAtom:
      return a.atom() == b.atom();
    case FormulaKind::kNot:
      return a.lhs() == b.lhs();
    default:
      return a.lhs() == b.lhs() && a.rhs() == b.rhs();
  }
}

std::set<ExperimentId> Formula::support() const {
  std::set<ExperimentId> out;
  auto collect = [&out](const Formula& f, auto&& self) -> void {
    switch (f.kind()) {
      case FormulaKind::kAtom:
        out.insert(f.atom().experiment);
        return;
      case FormulaKind::kNot:
        self(f.lhs(), self);
        return;
      default:
        self(f.lhs(), self);
        self(f.rhs(), self);
    }
  };
  collect(*this, collect);
  return out;
}

bool Formula::contains_conditional() const {
  switch (kind()) {
    case FormulaKind::kAtom:
      return false;
    case FormulaKind::kNot:
      return lhs().contains_conditional();
    case FormulaKind::kGivenAdd:
    case FormulaKind::kGivenPar:
      return true;
    default:
      return lhs().contains_conditional() || rhs().contains_conditional();
  }
}

int Formula::depth() const {
  switch (kind()) {
    case FormulaKind::kAtom:
      return 0;
    case FormulaKind::kNot:
      return 1 + lhs().depth();
    default:
      return 1 + std::max(lhs().depth(), rhs().depth());
  }
}

const char* operator_symbol(FormulaKind kind) {
  switch (kind) {
    case FormulaKind::kAtom: return "";
    case FormulaKind::kNot: return "~";
    case FormulaKind::kChoiceAnd: return "&";
    case FormulaKind::kChoiceOr: return "|";
    case FormulaKind::kParAnd: return "&&";
    case FormulaKind::kParOr: return "||";
    case FormulaKind::kGivenAdd: return "given";
    case FormulaKind::kGivenPar: return "pgiven";
  }
  return "";
}

}  // namespace colprob
