#include "colprob/model.hpp"

#include <algorithm>
#include <limits>
#include <sstream>

namespace colprob {

ModelError::ModelError(std::vector<ValidationIssue> is)
    : Error([&] {
        std::ostringstream os;
        os << "invalid model:";
        for (const auto& i : is) {
          os << "\n  ";
          if (i.line > 0) os << "line " << i.line << ": ";
          if (!i.experiment.empty()) os << "experiment " << i.experiment << ": ";
          os << i.message;
        }
        return os.str();
      }()),
      issues(std::move(is)) {}

ExperimentDecl ExperimentDecl::uniform(ExperimentId id, std::vector<Outcome> outcomes) {
  ExperimentDecl d;
  d.id = std::move(id);
  d.outcomes = std::move(outcomes);
  if (!d.outcomes.empty()) {
    const Rational w(1, static_cast<std::int64_t>(d.outcomes.size()));
    auto& row = d.cpt[{}];
    for (const auto& o : d.outcomes) row[o] = w;
  }
  return d;
}

ExperimentDecl ExperimentDecl::weighted(ExperimentId id,
                                        const std::vector<std::pair<Outcome, Rational>>& weights) {
  ExperimentDecl d;
  d.id = std::move(id);
  auto& row = d.cpt[{}];
  for (const auto& [o, w] : weights) {
    d.outcomes.push_back(o);
    row[o] = w;
  }
  return d;
}

ExperimentDecl ExperimentDecl::make_predicate(ExperimentId id, const Rational& p_true) {
  ExperimentDecl d = weighted(std::move(id), {{kPredicateTrue, p_true},
                                              {kPredicateFalse, Rational(1) - p_true}});
  d.predicate = true;
  return d;
}

bool ExperimentDecl::has_outcome(const Outcome& o) const {
  return std::find(outcomes.begin(), outcomes.end(), o) != outcomes.end();
}

Rational ExperimentDecl::prob(const Outcome& outcome, const ParentKey& parent_outcomes) const {
  auto row = cpt.find(parent_outcomes);
  if (row == cpt.end()) return 0;
  auto it = row->second.find(outcome);
  return it == row->second.end() ? Rational(0) : it->second;
}

Model::Model(std::vector<ExperimentDecl> decls) : decls_(std::move(decls)) {
  for (std::size_t i = 0; i < decls_.size(); ++i) index_.emplace(decls_[i].id, i);
}

const ExperimentDecl* Model::find(const ExperimentId& id) const {
  auto it = index_.find(id);
  return it == index_.end() ? nullptr : &decls_[it->second];
}

const ExperimentDecl& Model::at(const ExperimentId& id) const {
  if (const auto* d = find(id)) return *d;
  throw UnknownExperimentError("unknown experiment '" + id + "'");
}

void Model::check_atom(const Atom& atom) const {
  const auto* d = find(atom.experiment);
  if (d == nullptr)
    throw UnknownAtomError("unknown experiment '" + atom.experiment + "' in atom " +
                           atom.outcome + "@" + atom.experiment);
  if (!d->has_outcome(atom.outcome))
    throw UnknownAtomError("experiment '" + atom.experiment + "' has no outcome '" +
                           atom.outcome + "'");
}

namespace {

void enumerate_parent_keys(const Model& model, const ExperimentDecl& d, std::size_t i,
                           ExperimentDecl::ParentKey& key,
                           const std::function<void(const ExperimentDecl::ParentKey&)>& fn) {
  if (i == d.parents.size()) {
    fn(key);
    return;
  }
  for (const auto& o : model.at(d.parents[i]).outcomes) {
    key.push_back(o);
    enumerate_parent_keys(model, d, i + 1, key, fn);
    key.pop_back();
  }
}

std::string render_key(const ExperimentDecl& d, const ExperimentDecl::ParentKey& key) {
  std::string s = "[";
  for (std::size_t i = 0; i < key.size() && i < d.parents.size(); ++i) {
    if (i) s += ", ";
    s += d.parents[i] + "=" + key[i];
  }
  return s + "]";
}

}  // namespace

std::vector<ValidationIssue> validate_model(const Model& model) {
  std::vector<ValidationIssue> issues;
  auto report = [&](const ExperimentDecl& d, std::string msg) {
    issues.push_back({d.id, std::move(msg), d.line});
  };

  std::set<ExperimentId> seen;
  std::set<ExperimentId> structurally_ok;
  for (const auto& d : model.experiments()) {
    if (!seen.insert(d.id).second) {
      report(d, "duplicate experiment id '" + d.id + "'");
      continue;
    }
    bool ok = true;
    if (d.outcomes.empty()) {
      report(d, "no outcomes declared");
      ok = false;
    }
    std::set<Outcome> outs;
    for (const auto& o : d.outcomes)
      if (!outs.insert(o).second) {
        report(d, "duplicate outcome '" + o + "'");
        ok = false;
      }
    std::set<ExperimentId> ps;
    for (const auto& p : d.parents) {
      if (!ps.insert(p).second) {
        report(d, "parent '" + p + "' listed twice");
        ok = false;
      }
      if (model.find(p) == nullptr) {
        report(d, "unknown parent '" + p + "'");
        ok = false;
      }
    }
    if (ok) structurally_ok.insert(d.id);
  }

  // Cycles, reported once each as "cycle: A->B->A".
  std::set<std::set<ExperimentId>> cycles_seen;
  std::map<ExperimentId, int> state;  // 0 new, 1 on stack, 2 done
  std::vector<ExperimentId> stack;
  std::function<void(const ExperimentId&)> dfs = [&](const ExperimentId& id) {
    state[id] = 1;
    stack.push_back(id);
    for (const auto& p : model.at(id).parents) {
      if (model.find(p) == nullptr) continue;
      if (state[p] == 1) {
        auto from = std::find(stack.begin(), stack.end(), p);
        std::set<ExperimentId> members(from, stack.end());
        if (cycles_seen.insert(members).second) {
          std::string path = "cycle: ";
          for (auto it = from; it != stack.end(); ++it) path += *it + "->";
          path += p;
          report(model.at(p), path);
        }
      } else if (state[p] == 0) {
        dfs(p);
      }
    }
    stack.pop_back();
    state[id] = 2;
  };
  for (const auto& d : model.experiments())
    if (state[d.id] == 0) dfs(d.id);

  for (const auto& d : model.experiments()) {
    if (!structurally_ok.count(d.id) || model.find(d.id) != &d) continue;
    bool parents_ok = std::all_of(d.parents.begin(), d.parents.end(),
                                  [&](const auto& p) { return structurally_ok.count(p) > 0; });
    for (const auto& [key, row] : d.cpt) {
      if (key.size() != d.parents.size()) {
        report(d, "cpt row " + render_key(d, key) + " does not assign every parent");
        continue;
      }
      for (std::size_t i = 0; i < key.size() && parents_ok; ++i)
        if (!model.at(d.parents[i]).has_outcome(key[i]))
          report(d, "cpt row " + render_key(d, key) + ": parent '" + d.parents[i] +
                        "' has no outcome '" + key[i] + "'");
      for (const auto& [o, w] : row) {
        if (!d.has_outcome(o)) report(d, "cpt entry for undeclared outcome '" + o + "'");
        if (w < Rational(0)) report(d, "negative probability " + w.to_string() + " for '" + o + "'");
      }
    }
    if (!parents_ok) continue;
    ExperimentDecl::ParentKey key;
    enumerate_parent_keys(model, d, 0, key, [&](const ExperimentDecl::ParentKey& k) {
      Rational sum = 0;
      auto row = d.cpt.find(k);
      if (row != d.cpt.end())
        for (const auto& [o, w] : row->second)
          if (d.has_outcome(o)) sum += w;
      if (sum != Rational(1)) {
        std::string where = d.parents.empty() ? "" : " " + render_key(d, k);
        report(d, "cpt row" + where + " sums to " + sum.to_string());
      }
    });
  }
  return issues;
}

void require_valid(const Model& model) {
  auto issues = validate_model(model);
  if (!issues.empty()) throw ModelError(std::move(issues));
}

std::set<ExperimentId> ancestral_closure(const Model& model, const std::set<ExperimentId>& support) {
  std::set<ExperimentId> closure;
  std::vector<ExperimentId> todo(support.begin(), support.end());
  while (!todo.empty()) {
    ExperimentId id = std::move(todo.back());
    todo.pop_back();
    const auto& d = model.at(id);
    if (!closure.insert(id).second) continue;
    for (const auto& p : d.parents)
      if (!closure.count(p)) todo.push_back(p);
  }
  return closure;
}

std::vector<ExperimentId> topological_order(const Model& model, const std::set<ExperimentId>& ids) {
  std::vector<ExperimentId> order;
  std::set<ExperimentId> placed;
  std::function<void(const ExperimentId&)> visit = [&](const ExperimentId& id) {
    if (placed.count(id)) return;
    placed.insert(id);
    for (const auto& p : model.at(id).parents)
      if (ids.count(p)) visit(p);
    order.push_back(id);
  };
  for (const auto& id : ids) visit(id);
  return order;
}

Rational joint_point_prob(const Model& model, const Assignment& assignment) {
  Rational p = 1;
  ExperimentDecl::ParentKey key;
  for (const auto& [id, outcome] : assignment) {
    const auto& d = model.at(id);
    if (!d.has_outcome(outcome)) throw UnknownAtomError("experiment '" + id + "' has no outcome '" + outcome + "'");
    key.clear();
    for (const auto& parent : d.parents) {
      auto it = assignment.find(parent);
      if (it == assignment.end())
        throw Error("assignment is not ancestrally closed: '" + id + "' needs parent '" + parent + "'");
      key.push_back(it->second);
    }
    p *= d.prob(outcome, key);
    if (p.is_zero()) return p;
  }
  return p;
}

std::uint64_t joint_size(const Model& model, const std::set<ExperimentId>& ids) {
  std::uint64_t n = 1;
  constexpr auto kMax = std::numeric_limits<std::uint64_t>::max();
  for (const auto& id : ids) {
    const std::uint64_t k = model.at(id).outcomes.size();
    if (k != 0 && n > kMax / k) return kMax;
    n *= k;
  }
  return n;
}

void for_each_assignment(const Model& model, const std::set<ExperimentId>& ids,
                         const std::function<void(const Assignment&)>& fn) {
  std::vector<const ExperimentDecl*> decls;
  for (const auto& id : ids) decls.push_back(&model.at(id));
  Assignment a;
  std::function<void(std::size_t)> rec = [&](std::size_t i) {
    if (i == decls.size()) {
      fn(a);
      return;
    }
    for (const auto& o : decls[i]->outcomes) {
      a[decls[i]->id] = o;
      rec(i + 1);
    }
    a.erase(decls[i]->id);
  };
  rec(0);
}

std::string format_id_set(const std::set<ExperimentId>& ids) {
  std::string s = "{";
  bool first = true;
  for (const auto& id : ids) {
    if (!first) s += ",";
    s += id;
    first = false;
  }
  return s + "}";
}

}  // namespace colprob
