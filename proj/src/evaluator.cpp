#include "colprob/evaluator.hpp"

#include <algorithm>

#include "colprob/parser.hpp"

namespace colprob {

bool operator==(const ProbResult& a, const ProbResult& b) {
  if (a.is_determined() != b.is_determined()) return false;
  return !a.is_determined() || a.value() == b.value();
}

std::string ProbResult::to_string() const {
  return is_determined() ? value().to_string() : "undetermined (" + reason() + ")";
}

namespace {

void check_query(const Formula& f, const Model& model) {
  check_atoms(f, model);
  if (f.is_conditional()) {
    if (f.lhs().contains_conditional() || f.rhs().contains_conditional())
      throw NestedConditionalError("conditionals may not nest; 'given'/'pgiven' only at the root of a query");
  } else if (f.contains_conditional()) {
    throw NestedConditionalError("'given'/'pgiven' is only allowed at the root of a query");
  }
}

[[noreturn]] void null_condition(const Formula& f) {
  throw NullConditionError("conditioning on null event: p(" + format_formula(f) + ") = 0");
}

ProbResult cond_additive_checked(const Formula& e, const Formula& f, const Model& model) {
  Denotation de = denote(e, model);
  if (!de.determined()) return ProbResult::undetermined(de.reason());
  Denotation df = denote(f, model);
  if (!df.determined()) return ProbResult::undetermined(df.reason());
  if (de.space().support != df.space().support)
    return ProbResult::undetermined("additive conditional 'given' across distinct supports " +
                                    format_id_set(de.space().support) + "," +
                                    format_id_set(df.space().support));
  const Rational pf = space_prob(df.space(), model);
  if (pf.is_zero()) null_condition(f);
  EventSpace both{df.space().support, {}};
  std::set_intersection(de.space().points.begin(), de.space().points.end(), df.space().points.begin(),
                        df.space().points.end(), std::inserter(both.points, both.points.end()));
  return ProbResult::determined(space_prob(both, model) / pf);
}

ProbResult cond_parallel_checked(const Formula& e, const Formula& f, const Model& model) {
  Denotation de = denote(e, model);
  if (!de.determined()) return ProbResult::undetermined(de.reason());
  Denotation df = denote(f, model);
  if (!df.determined()) return ProbResult::undetermined(df.reason());
  const Rational pf = space_prob(df.space(), model);
  if (pf.is_zero()) null_condition(f);
  return ProbResult::determined(space_prob(cartesian_conj(de.space(), df.space()), model) / pf);
}

}  // namespace

Rational space_prob(const EventSpace& s, const Model& model) {
  const auto closure = ancestral_closure(model, s.support);
  Rational total = 0;
  if (closure == s.support) {
    for (const auto& p : s.points) total += joint_point_prob(model, p);
    return total;
  }
  for (const auto& p : lift(s, closure, model).points) total += joint_point_prob(model, p);
  return total;
}

ProbResult prob(const Formula& f, const Model& model) {
  check_query(f, model);
  if (f.kind() == FormulaKind::kGivenAdd) return cond_additive_checked(f.lhs(), f.rhs(), model);
  if (f.kind() == FormulaKind::kGivenPar) return cond_parallel_checked(f.lhs(), f.rhs(), model);
  Denotation d = denote(f, model);
  if (!d.determined()) return ProbResult::undetermined(d.reason());
  return ProbResult::determined(space_prob(d.space(), model));
}

ProbResult cond_additive(const Formula& e, const Formula& f, const Model& model) {
  return prob(Formula::given_add(e, f), model);
}

ProbResult cond_parallel(const Formula& e, const Formula& f, const Model& model) {
  return prob(Formula::given_par(e, f), model);
}

bool independent(const std::set<ExperimentId>& a, const std::set<ExperimentId>& b, const Model& model) {
  const auto ca = ancestral_closure(model, a);
  const auto cb = ancestral_closure(model, b);
  return std::none_of(ca.begin(), ca.end(), [&](const ExperimentId& id) { return cb.count(id) > 0; });
}

const char* rule_label(Rule r) {
  switch (r) {
    case Rule::kR1: return "R1";
    case Rule::kR2: return "R2";
    case Rule::kR3: return "R3";
    case Rule::kR4: return "R4";
    case Rule::kR5: return "R5";
    case Rule::kR6: return "R6";
    case Rule::kR7: return "R7";
    case Rule::kR8: return "R8";
    case Rule::kCpt: return "cpt";
    case Rule::kEnumeration: return "enumeration";
  }
  return "?";
}

namespace {

class Explainer {
 public:
  explicit Explainer(const Model& model) : model_(model) {}

  Derivation explain(const Formula& f) {
    switch (f.kind()) {
      case FormulaKind::kAtom: return atom(f);
      case FormulaKind::kNot: return negation(f);
      case FormulaKind::kChoiceOr: return choice_or(f);
      case FormulaKind::kChoiceAnd: return choice_and(f);
      case FormulaKind::kParOr: return par_or(f);
      case FormulaKind::kParAnd: return par_and(f);
      case FormulaKind::kGivenAdd: return given_add(f);
      case FormulaKind::kGivenPar: return given_par(f);
    }
    throw std::logic_error("unhandled formula kind");
  }

 private:
  static Derivation node(Rule rule, const Formula& f, ProbResult result, std::string note,
                         std::vector<Derivation> children = {}) {
    return Derivation{rule, format_formula(f), std::move(result), std::move(note), std::move(children)};
  }

  // The first undetermined child, if any.
  static const Derivation* undetermined_child(const std::vector<Derivation>& children) {
    for (const auto& c : children)
      if (!c.result.is_determined()) return &c;
    return nullptr;
  }

  static ProbResult propagate(const Derivation& c) { return ProbResult::undetermined(c.result.reason()); }

  Derivation atom(const Formula& f) {
    const ExperimentDecl& d = model_.at(f.atom().experiment);
    if (d.parents.empty())
      return node(Rule::kCpt, f, ProbResult::determined(d.prob(f.atom().outcome, {})), "declared distribution");
    const EventSpace s{{d.id}, {Point{{d.id, f.atom().outcome}}}};
    return node(Rule::kEnumeration, f, ProbResult::determined(space_prob(s, model_)),
                "marginalized over ancestors " + format_id_set(ancestral_closure(model_, {d.id})));
  }

  Derivation negation(const Formula& f) {
    std::vector<Derivation> kids{explain(f.lhs())};
    if (const auto* u = undetermined_child(kids)) return node(Rule::kR1, f, propagate(*u), "1 - p(E)", std::move(kids));
    const Rational& pe = kids[0].result.value();
    return node(Rule::kR1, f, ProbResult::determined(Rational(1) - pe), "1 - " + pe.to_string(), std::move(kids));
  }

  Derivation choice_or(const Formula& f) {
    const auto sa = f.lhs().support(), sb = f.rhs().support();
    if (sa != sb)
      return node(Rule::kR2, f,
                  ProbResult::undetermined("choice-or '|' across distinct supports " + format_id_set(sa) + "," +
                                           format_id_set(sb)),
                  "operands not outcomes of a single experiment");
    std::vector<Derivation> kids{explain(f.lhs()), explain(f.rhs()), explain(Formula::choice_and(f.lhs(), f.rhs()))};
    if (const auto* u = undetermined_child(kids)) return node(Rule::kR2, f, propagate(*u), "p(E) + p(F) - p(E & F)", std::move(kids));
    const Rational &pe = kids[0].result.value(), &pf = kids[1].result.value(), &pef = kids[2].result.value();
    return node(Rule::kR2, f, ProbResult::determined(pe + pf - pef),
                pe.to_string() + " + " + pf.to_string() + " - " + pef.to_string(), std::move(kids));
  }

  Derivation choice_and(const Formula& f) {
    const auto sa = f.lhs().support(), sb = f.rhs().support();
    if (sa != sb)
      return node(Rule::kR3, f,
                  ProbResult::undetermined("choice-and '&' across distinct supports " + format_id_set(sa) + "," +
                                           format_id_set(sb)),
                  "operands not outcomes of a single experiment");
    std::vector<Derivation> kids{explain(f.rhs())};
    if (const auto* u = undetermined_child(kids)) return node(Rule::kR3, f, propagate(*u), "p(F) p(E given F)", std::move(kids));
    const Rational pf = kids[0].result.value();
    if (pf.is_zero()) return enumerate(f, "p(F) = 0, conditional unavailable");
    const Formula cond = Formula::given_add(f.lhs(), f.rhs());
    ProbResult c = prob(cond, model_);
    kids.push_back(node(Rule::kEnumeration, cond, c, "p(E & F) / p(F) over the event space"));
    if (!c.is_determined()) return node(Rule::kR3, f, c, "p(F) p(E given F)", std::move(kids));
    return node(Rule::kR3, f, ProbResult::determined(pf * c.value()),
                pf.to_string() + " * " + c.value().to_string(), std::move(kids));
  }

  Derivation par_or(const Formula& f) {
    const Formula rest = Formula::par_and(Formula::negation(f.lhs()), Formula::negation(f.rhs()));
    std::vector<Derivation> kids{explain(rest)};
    if (const auto* u = undetermined_child(kids)) return node(Rule::kR4, f, propagate(*u), "1 - p(~E && ~F)", std::move(kids));
    const Rational& pr = kids[0].result.value();
    return node(Rule::kR4, f, ProbResult::determined(Rational(1) - pr),
                "1 - p(" + format_formula(rest) + ") = 1 - " + pr.to_string(), std::move(kids));
  }

  Derivation par_and(const Formula& f) {
    if (independent(f.lhs().support(), f.rhs().support(), model_)) {
      std::vector<Derivation> kids{explain(f.lhs()), explain(f.rhs())};
      if (const auto* u = undetermined_child(kids))
        return node(Rule::kR5, f, propagate(*u), "independence: p(E) p(F)", std::move(kids));
      const Rational &pe = kids[0].result.value(), &pf = kids[1].result.value();
      return node(Rule::kR5, f, ProbResult::determined(pe * pf),
                  "independence: " + pe.to_string() + " * " + pf.to_string(), std::move(kids));
    }
    std::vector<Derivation> kids{explain(f.rhs())};
    if (const auto* u = undetermined_child(kids)) return node(Rule::kR5, f, propagate(*u), "p(F) p(E pgiven F)", std::move(kids));
    const Rational pf = kids[0].result.value();
    if (pf.is_zero()) return enumerate(f, "p(F) = 0, conditional unavailable");
    const Formula cond = Formula::given_par(f.lhs(), f.rhs());
    ProbResult c = prob(cond, model_);
    kids.push_back(node(Rule::kEnumeration, cond, c, "p(E && F) / p(F) over the joint space"));
    if (!c.is_determined()) return node(Rule::kR5, f, c, "p(F) p(E pgiven F)", std::move(kids));
    return node(Rule::kR5, f, ProbResult::determined(pf * c.value()),
                pf.to_string() + " * " + c.value().to_string(), std::move(kids));
  }

  Derivation given_add(const Formula& f) {
    std::vector<Derivation> kids{explain(f.lhs()), explain(f.rhs())};
    if (const auto* u = undetermined_child(kids))
      return node(Rule::kR3, f, propagate(*u), "p(E & F) / p(F)", std::move(kids));
    const auto sa = f.lhs().support(), sb = f.rhs().support();
    if (sa != sb)
      return node(Rule::kR3, f,
                  ProbResult::undetermined("additive conditional 'given' across distinct supports " +
                                           format_id_set(sa) + "," + format_id_set(sb)),
                  "operands not outcomes of a single experiment", std::move(kids));
    const Rational pf = kids[1].result.value();
    if (pf.is_zero()) null_condition(f.rhs());
    kids.push_back(explain(Formula::choice_and(f.lhs(), f.rhs())));
    if (!kids.back().result.is_determined()) return node(Rule::kR3, f, propagate(kids.back()), "p(E & F) / p(F)", std::move(kids));
    const Rational pef = kids.back().result.value();
    return node(Rule::kR3, f, ProbResult::determined(pef / pf),
                "p(E & F) / p(F) = " + pef.to_string() + " / " + pf.to_string(), std::move(kids));
  }

  Derivation given_par(const Formula& f) {
    std::vector<Derivation> kids{explain(f.lhs()), explain(f.rhs())};
    if (const auto* u = undetermined_child(kids))
      return node(Rule::kR5, f, propagate(*u), "p(E && F) / p(F)", std::move(kids));
    const Rational pf = kids[1].result.value();
    if (pf.is_zero()) null_condition(f.rhs());
    kids.push_back(explain(Formula::par_and(f.lhs(), f.rhs())));
    const Rational pef = kids.back().result.value();
    return node(Rule::kR5, f, ProbResult::determined(pef / pf),
                "p(E && F) / p(F) = " + pef.to_string() + " / " + pf.to_string(), std::move(kids));
  }

  // Rules 6-8: denote, then sum the points.
  Derivation enumerate(const Formula& f, const std::string& why) {
    Denotation d = denote(f, model_);
    if (!d.determined()) return node(Rule::kR6, f, ProbResult::undetermined(d.reason()), why);
    std::vector<Derivation> points;
    Rational total = 0;
    for (const auto& p : d.space().points) {
      const EventSpace single{d.space().support, {p}};
      const Rational pp = space_prob(single, model_);
      total += pp;
      points.push_back(node(Rule::kR8, to_set_normal_form(single), ProbResult::determined(pp), "single point"));
    }
    std::vector<Derivation> kids;
    kids.push_back(Derivation{Rule::kR7, format_space(d.space()), ProbResult::determined(total),
                              std::to_string(d.space().points.size()) + " mutually exclusive points",
                              std::move(points)});
    return node(Rule::kR6, f, ProbResult::determined(total), why + "; p(E) = p(E*)", std::move(kids));
  }

  const Model& model_;
};

void render_into(const Derivation& d, int indent, std::string& out) {
  out += std::string(static_cast<std::size_t>(indent) * 2, ' ');
  out += rule_label(d.rule);
  out += "  ";
  out += d.formula;
  out += " = ";
  out += d.result.is_determined() ? d.result.value().to_string() : "undetermined (" + d.result.reason() + ")";
  if (!d.note.empty()) out += "  [" + d.note + "]";
  out += '\n';
  for (const auto& c : d.children) render_into(c, indent + 1, out);
}

}  // namespace

Explained prob_explain(const Formula& f, const Model& model) {
  check_query(f, model);
  Explainer ex(model);
  Derivation d = ex.explain(f);
  ProbResult r = d.result;
  return Explained{std::move(r), std::move(d)};
}

std::string render_derivation(const Derivation& d) {
  std::string out;
  render_into(d, 0, out);
  return out;
}

}  // namespace colprob
