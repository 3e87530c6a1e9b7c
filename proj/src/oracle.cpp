#include "colprob/oracle.hpp"

#include <cmath>
#include <optional>
#include <random>

namespace colprob::oracle {

namespace {

void collect_experiments(const Formula& f, std::set<ExperimentId>& out) {
  if (f.kind() == FormulaKind::kAtom) {
    out.insert(f.atom().experiment);
  } else {
    collect_experiments(f.lhs(), out);
    if (f.kind() != FormulaKind::kNot) collect_experiments(f.rhs(), out);
  }
}

std::set<ExperimentId> experiments_of(const Formula& f) {
  std::set<ExperimentId> out;
  collect_experiments(f, out);
  return out;
}

void check_atoms_declared(const Formula& f, const Model& model) {
  if (f.kind() == FormulaKind::kAtom) {
    const auto* d = model.find(f.atom().experiment);
    if (d == nullptr) throw UnknownAtomError("unknown experiment '" + f.atom().experiment + "'");
    if (!d->has_outcome(f.atom().outcome))
      throw UnknownAtomError("experiment '" + f.atom().experiment + "' has no outcome '" + f.atom().outcome + "'");
    return;
  }
  check_atoms_declared(f.lhs(), model);
  if (f.kind() != FormulaKind::kNot) check_atoms_declared(f.rhs(), model);
}

bool has_conditional(const Formula& f) {
  switch (f.kind()) {
    case FormulaKind::kAtom: return false;
    case FormulaKind::kNot: return has_conditional(f.lhs());
    case FormulaKind::kGivenAdd:
    case FormulaKind::kGivenPar: return true;
    default: return has_conditional(f.lhs()) || has_conditional(f.rhs());
  }
}

// Support condition for choice connectives; truth values cannot see it.
std::optional<std::string> undetermined_reason(const Formula& f) {
  switch (f.kind()) {
    case FormulaKind::kAtom: return std::nullopt;
    case FormulaKind::kNot: return undetermined_reason(f.lhs());
    default: break;
  }
  if (auto r = undetermined_reason(f.lhs())) return r;
  if (auto r = undetermined_reason(f.rhs())) return r;
  if (f.kind() == FormulaKind::kChoiceAnd || f.kind() == FormulaKind::kChoiceOr ||
      f.kind() == FormulaKind::kGivenAdd) {
    const auto a = experiments_of(f.lhs()), b = experiments_of(f.rhs());
    if (a != b)
      return std::string("'") + operator_symbol(f.kind()) + "' over different experiments " +
             format_id_set(a) + "," + format_id_set(b);
  }
  return std::nullopt;
}

bool holds(const Formula& f, const Assignment& a) {
  switch (f.kind()) {
    case FormulaKind::kAtom: return a.at(f.atom().experiment) == f.atom().outcome;
    case FormulaKind::kNot: return !holds(f.lhs(), a);
    case FormulaKind::kChoiceAnd:
    case FormulaKind::kParAnd: return holds(f.lhs(), a) && holds(f.rhs(), a);
    case FormulaKind::kChoiceOr:
    case FormulaKind::kParOr: return holds(f.lhs(), a) || holds(f.rhs(), a);
    default: throw std::logic_error("conditional has no truth value");
  }
}

// Splits a query into (event, condition); condition is empty for plain events.
struct Query {
  Formula event;
  std::optional<Formula> condition;
};

Query prepare(const Formula& f, const Model& model) {
  check_atoms_declared(f, model);
  if (f.kind() == FormulaKind::kGivenAdd || f.kind() == FormulaKind::kGivenPar) {
    if (has_conditional(f.lhs()) || has_conditional(f.rhs()))
      throw NestedConditionalError("conditionals may not nest");
    return {f.lhs(), f.rhs()};
  }
  if (has_conditional(f)) throw NestedConditionalError("'given'/'pgiven' is only allowed at the root of a query");
  return {f, std::nullopt};
}

}  // namespace

ProbResult enumerate_prob(const Formula& f, const Model& model, std::uint64_t max_assignments) {
  const Query q = prepare(f, model);
  if (auto r = undetermined_reason(f)) return ProbResult::undetermined(*r);

  const auto domain = ancestral_closure(model, experiments_of(f));
  if (joint_size(model, domain) > max_assignments)
    throw StateSpaceError("joint space over " + format_id_set(domain) + " exceeds " +
                          std::to_string(max_assignments) + " assignments");

  Rational event = 0, condition = 0;
  for_each_assignment(model, domain, [&](const Assignment& a) {
    if (q.condition && !holds(*q.condition, a)) return;
    const Rational p = joint_point_prob(model, a);
    condition += p;
    if (holds(q.event, a)) event += p;
  });
  if (!q.condition) return ProbResult::determined(event);
  if (condition.is_zero()) throw NullConditionError("conditioning on null event: p(condition) = 0");
  return ProbResult::determined(event / condition);
}

namespace {

struct Sampler {
  struct Node {
    const ExperimentDecl* decl;
    std::vector<const ExperimentDecl*> parents;
    // Cumulative probabilities per parent-outcome row, over decl->outcomes.
    std::map<ExperimentDecl::ParentKey, std::vector<double>> cumulative;
  };

  Sampler(const Model& model, const std::set<ExperimentId>& domain) {
    for (const auto& id : topological_order(model, domain)) {
      Node n{&model.at(id), {}, {}};
      for (const auto& p : n.decl->parents) n.parents.push_back(&model.at(p));
      for (const auto& [key, row] : n.decl->cpt) {
        std::vector<double> cum;
        double acc = 0;
        for (const auto& o : n.decl->outcomes) {
          auto it = row.find(o);
          acc += it == row.end() ? 0.0 : it->second.to_double();
          cum.push_back(acc);
        }
        n.cumulative.emplace(key, std::move(cum));
      }
      nodes.push_back(std::move(n));
    }
  }

  // Uniform in [0, 1) from the top 53 bits; independent of the standard
  // library's distribution implementations.
  static double uniform(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

  void draw(std::mt19937_64& rng, Assignment& out) {
    ExperimentDecl::ParentKey key;
    for (const auto& n : nodes) {
      key.clear();
      for (const auto* p : n.parents) key.push_back(out.at(p->id));
      const auto& cum = n.cumulative.at(key);
      const double u = uniform(rng) * cum.back();
      std::size_t i = 0;
      while (i + 1 < cum.size() && !(u < cum[i])) ++i;
      out[n.decl->id] = n.decl->outcomes[i];
    }
  }

  std::vector<Node> nodes;
};

}  // namespace

McEstimate mc_estimate(const Formula& f, const Model& model, const SampleConfig& cfg) {
  if (cfg.sample_count == 0) throw Error("sample_count must be at least 1");
  const Query q = prepare(f, model);
  if (auto r = undetermined_reason(f)) throw UndeterminedQueryError("cannot sample an undetermined formula: " + *r);

  Sampler sampler(model, ancestral_closure(model, experiments_of(f)));
  std::mt19937_64 rng(cfg.seed);
  McEstimate est;
  est.samples = cfg.sample_count;
  est.seed = cfg.seed;
  Assignment a;
  for (std::uint64_t i = 0; i < cfg.sample_count; ++i) {
    sampler.draw(rng, a);
    if (q.condition && !holds(*q.condition, a)) continue;
    ++est.trials;
    if (holds(q.event, a)) ++est.hits;
  }
  if (est.trials == 0) throw NullConditionError("no sample satisfied the conditioning event");
  const double n = static_cast<double>(est.trials);
  est.estimate = static_cast<double>(est.hits) / n;
  est.std_error = std::sqrt(est.estimate * (1.0 - est.estimate) / n);
  return est;
}

}  // namespace colprob::oracle
