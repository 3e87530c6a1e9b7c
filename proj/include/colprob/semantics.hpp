#pragma once

#include <set>
#include <string>
#include <variant>
#include <vector>

#include "colprob/formula.hpp"
#include "colprob/model.hpp"

namespace colprob {

/// One outcome per experiment of the owning space's support.
using Point = Assignment;

/// A set of mutually exclusive points over a fixed support. Every point
/// assigns exactly the experiments in `support`.
struct EventSpace {
  std::set<ExperimentId> support;
  std::set<Point> points;

  bool empty() const { return points.empty(); }
  friend bool operator==(const EventSpace&, const EventSpace&) = default;
};

struct Undetermined {
  std::string reason;
};

/// Value of a formula under the event-space mapping: a space, or a verdict
/// that no probability is determined.
class Denotation {
 public:
  Denotation(EventSpace s) : value_(std::move(s)) {}      // NOLINT
  Denotation(Undetermined u) : value_(std::move(u)) {}    // NOLINT

  bool determined() const { return std::holds_alternative<EventSpace>(value_); }
  const EventSpace& space() const { return std::get<EventSpace>(value_); }
  const std::string& reason() const { return std::get<Undetermined>(value_).reason; }

  /// Non-fatal notes, e.g. `&&` applied within one experiment.
  std::vector<std::string> warnings;

 private:
  std::variant<EventSpace, Undetermined> value_;
};

struct EmptySpaceError : Error {
  using Error::Error;
};

/// Event space of `f`. `&`, `|` need equal operand supports (otherwise
/// Undetermined), `~` complements within the operand's support, `&&` is the
/// Cartesian conjunction and `||` expands to (E&&F) | (~E&&F) | (E&&~F).
/// Throws UnknownAtomError and NestedConditionalError.
Denotation denote(const Formula& f, const Model& model);

/// Throws UnknownAtomError for the first atom the model does not declare.
void check_atoms(const Formula& f, const Model& model);

/// Merges every pair of points that agree on shared experiments. Pairs that
/// disagree are dropped; identical shared atoms collapse.
EventSpace cartesian_conj(const EventSpace& s, const EventSpace& t);

/// All points over `support`: the universe the complement is taken in.
EventSpace full_space(const std::set<ExperimentId>& support, const Model& model);

EventSpace complement(const EventSpace& s, const Model& model);

/// Extends each point by every combination of outcomes of target − supp(s).
/// Throws std::invalid_argument if target does not contain supp(s).
EventSpace lift(const EventSpace& s, const std::set<ExperimentId>& target, const Model& model);

/// `(A && B && ...) | (C && D && ...) | ...` with one disjunct per point, in
/// point order. Throws EmptySpaceError for an empty space.
Formula to_set_normal_form(const EventSpace& s);

/// "{ {c1=H, c2=T}, {c1=T, c2=H} }"
std::string format_space(const EventSpace& s);

}  // namespace colprob
