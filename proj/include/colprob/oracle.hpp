#pragma once

#include <cstdint>

#include "colprob/evaluator.hpp"
#include "colprob/formula.hpp"
#include "colprob/model.hpp"

// Reference implementations used to cross-check the evaluator. They read a
// formula as a truth condition on full joint assignments and never build
// event spaces.

namespace colprob::oracle {

inline constexpr std::uint64_t kMaxAssignments = 10'000'000;

struct StateSpaceError : Error {
  using Error::Error;
};

/// Raised by mc_estimate for formulas with no determined probability.
struct UndeterminedQueryError : Error {
  using Error::Error;
};

/// Exact probability by summing joint_point_prob over every full assignment
/// of the ancestral closure that satisfies `f`. Undetermined exactly when a
/// `&`, `|` or `given` joins operands over different experiments.
ProbResult enumerate_prob(const Formula& f, const Model& model, std::uint64_t max_assignments = kMaxAssignments);

struct SampleConfig {
  std::uint64_t sample_count = 10'000;
  std::uint64_t seed = 1;
};

struct McEstimate {
  double estimate = 0;
  double std_error = 0;  // binomial standard error of `estimate`
  std::uint64_t samples = 0;
  std::uint64_t seed = 0;
  std::uint64_t hits = 0;
  /// Samples the estimate is a frequency over: all of them, or those
  /// satisfying the condition of a `given`/`pgiven` query.
  std::uint64_t trials = 0;
};

/// Frequency of `f` over sampled joint outcomes, parents drawn before
/// children. Bit-for-bit reproducible for a fixed seed.
McEstimate mc_estimate(const Formula& f, const Model& model, const SampleConfig& cfg);

}  // namespace colprob::oracle
