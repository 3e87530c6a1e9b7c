#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace colprob {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// One violated model invariant. `line` is 0 when the model was not read
/// from a file.
struct ValidationIssue {
  std::string experiment;
  std::string message;
  int line = 0;
};

struct ModelError : Error {
  explicit ModelError(std::vector<ValidationIssue> issues);
  std::vector<ValidationIssue> issues;
};

struct UnknownExperimentError : Error {
  using Error::Error;
};

/// An atom names an undeclared experiment or an outcome the experiment lacks.
struct UnknownAtomError : Error {
  using Error::Error;
};

/// `given`/`pgiven` below the root of a query.
struct NestedConditionalError : Error {
  using Error::Error;
};

/// Conditioning event has probability zero.
struct NullConditionError : Error {
  using Error::Error;
};

struct ParseError : Error {
  ParseError(int line, int column, std::string message, std::string expected = {});
  int line;
  int column;
  std::string message;
  std::string expected;
};

}  // namespace colprob
