#include "colprob/semantics.hpp"

#include <algorithm>
#include <iterator>
#include <optional>
#include <stdexcept>

namespace colprob {

namespace {

Denotation undetermined_choice(FormulaKind kind, const EventSpace& a, const EventSpace& b) {
  const char* name = kind == FormulaKind::kChoiceOr ? "choice-or '|'" : "choice-and '&'";
  return Undetermined{std::string(name) + " across distinct supports " + format_id_set(a.support) +
                      "," + format_id_set(b.support)};
}

Denotation join(Denotation d, const Denotation& other) {
  d.warnings.insert(d.warnings.end(), other.warnings.begin(), other.warnings.end());
  return d;
}

Denotation denote_rec(const Formula& f, const Model& model) {
  switch (f.kind()) {
    case FormulaKind::kAtom: {
      model.check_atom(f.atom());
      return EventSpace{{f.atom().experiment}, {Point{{f.atom().experiment, f.atom().outcome}}}};
    }
    case FormulaKind::kNot: {
      Denotation e = denote_rec(f.lhs(), model);
      if (!e.determined()) return e;
      return join(complement(e.space(), model), e);
    }
    case FormulaKind::kGivenAdd:
    case FormulaKind::kGivenPar:
      throw NestedConditionalError("conditional '" + std::string(operator_symbol(f.kind())) +
                                   "' is only allowed at the root of a query");
    default:
      break;
  }

  Denotation l = denote_rec(f.lhs(), model);
  if (!l.determined()) return l;
  Denotation r = denote_rec(f.rhs(), model);
  if (!r.determined()) return r;
  const EventSpace& a = l.space();
  const EventSpace& b = r.space();

  auto finish = [&](EventSpace s) {
    Denotation d = join(join(Denotation(std::move(s)), l), r);
    return d;
  };

  switch (f.kind()) {
    case FormulaKind::kChoiceOr:
    case FormulaKind::kChoiceAnd: {
      if (a.support != b.support) return undetermined_choice(f.kind(), a, b);
      EventSpace s{a.support, {}};
      if (f.kind() == FormulaKind::kChoiceOr) {
        std::set_union(a.points.begin(), a.points.end(), b.points.begin(), b.points.end(),
                       std::inserter(s.points, s.points.end()));
      } else {
        std::set_intersection(a.points.begin(), a.points.end(), b.points.begin(), b.points.end(),
                              std::inserter(s.points, s.points.end()));
      }
      return finish(std::move(s));
    }
    case FormulaKind::kParAnd:
    case FormulaKind::kParOr: {
      std::set<ExperimentId> shared;
      for (const auto& id : a.support)
        if (b.support.count(id) && !model.at(id).predicate) shared.insert(id);
      Denotation d = [&]() -> Denotation {
        if (f.kind() == FormulaKind::kParAnd) return finish(cartesian_conj(a, b));
        // (E && F) | (~E && F) | (E && ~F); all three share one support.
        const EventSpace not_a = complement(a, model);
        const EventSpace not_b = complement(b, model);
        EventSpace s = cartesian_conj(a, b);
        for (const auto& p : cartesian_conj(not_a, b).points) s.points.insert(p);
        for (const auto& p : cartesian_conj(a, not_b).points) s.points.insert(p);
        return finish(std::move(s));
      }();
      if (!shared.empty())
        d.warnings.push_back(std::string("'") + operator_symbol(f.kind()) +
                             "' within a single experiment " + format_id_set(shared) +
                             ": conflicting outcomes drop, identical ones collapse");
      return d;
    }
    default:
      break;
  }
  throw std::logic_error("unhandled formula kind");
}

}  // namespace

void check_atoms(const Formula& f, const Model& model) {
  switch (f.kind()) {
    case FormulaKind::kAtom:
      model.check_atom(f.atom());
      return;
    case FormulaKind::kNot:
      check_atoms(f.lhs(), model);
      return;
    default:
      check_atoms(f.lhs(), model);
      check_atoms(f.rhs(), model);
  }
}

Denotation denote(const Formula& f, const Model& model) {
  check_atoms(f, model);
  return denote_rec(f, model);
}

EventSpace cartesian_conj(const EventSpace& s, const EventSpace& t) {
  EventSpace out;
  out.support = s.support;
  out.support.insert(t.support.begin(), t.support.end());
  std::vector<ExperimentId> shared;
  std::set_intersection(s.support.begin(), s.support.end(), t.support.begin(), t.support.end(),
                        std::back_inserter(shared));
  for (const auto& p : s.points) {
    for (const auto& q : t.points) {
      const bool agree = std::all_of(shared.begin(), shared.end(),
                                     [&](const ExperimentId& id) { return p.at(id) == q.at(id); });
      if (!agree) continue;
      Point merged = p;
      merged.insert(q.begin(), q.end());
      out.points.insert(std::move(merged));
    }
  }
  return out;
}

EventSpace full_space(const std::set<ExperimentId>& support, const Model& model) {
  EventSpace out{support, {}};
  for_each_assignment(model, support, [&](const Assignment& a) { out.points.insert(a); });
  return out;
}

EventSpace complement(const EventSpace& s, const Model& model) {
  EventSpace u = full_space(s.support, model);
  EventSpace out{s.support, {}};
  std::set_difference(u.points.begin(), u.points.end(), s.points.begin(), s.points.end(),
                      std::inserter(out.points, out.points.end()));
  return out;
}

EventSpace lift(const EventSpace& s, const std::set<ExperimentId>& target, const Model& model) {
  if (!std::includes(target.begin(), target.end(), s.support.begin(), s.support.end()))
    throw std::invalid_argument("lift target " + format_id_set(target) + " does not contain support " +
                                format_id_set(s.support));
  std::set<ExperimentId> missing;
  std::set_difference(target.begin(), target.end(), s.support.begin(), s.support.end(),
                      std::inserter(missing, missing.end()));
  if (missing.empty()) return s;
  return cartesian_conj(s, full_space(missing, model));
}

Formula to_set_normal_form(const EventSpace& s) {
  if (s.points.empty()) throw EmptySpaceError("the empty event space has no set normal form");
  if (s.support.empty()) throw EmptySpaceError("a space over no experiments has no set normal form");
  std::optional<Formula> result;
  for (const auto& point : s.points) {
    std::optional<Formula> conj;
    for (const auto& [id, outcome] : point) {
      Formula a = Formula::atom(id, outcome);
      conj = conj ? Formula::par_and(std::move(*conj), std::move(a)) : std::move(a);
    }
    result = result ? Formula::choice_or(std::move(*result), std::move(*conj)) : std::move(*conj);
  }
  return *result;
}

std::string format_space(const EventSpace& s) {
  std::string out = "{ ";
  bool first_point = true;
  for (const auto& p : s.points) {
    if (!first_point) out += ", ";
    first_point = false;
    out += "{";
    bool first = true;
    for (const auto& [id, o] : p) {
      if (!first) out += ", ";
      first = false;
      out += id + "=" + o;
    }
    out += "}";
  }
  if (!s.points.empty()) out += " ";
  return out + "}";
}

}  // namespace colprob
