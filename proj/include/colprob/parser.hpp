#pragma once

#include <string>
#include <string_view>

#include "colprob/formula.hpp"
#include "colprob/model.hpp"

namespace colprob {

/// Parses an event formula. Precedence, tightest first: `~`; `&` and `&&`;
/// `|` and `||`; `given` and `pgiven` (non-associative). Binary operators
/// associate to the left. A bare lowercase identifier `a` is `true@a`.
/// Throws ParseError.
Formula parse_formula(std::string_view text);

/// Renders with the fewest parentheses that parse back to the same tree.
std::string format_formula(const Formula& f);

/// Parses and validates a model file. Throws ParseError on syntax errors and
/// ModelError (with line numbers) when the declarations are inconsistent.
Model parse_model(std::string_view text);

/// Reads and parses a model file from disk. Throws Error if unreadable.
Model load_model(const std::string& path);

/// True for identifiers usable as experiment ids and outcome names.
bool is_identifier(std::string_view s);

}  // namespace colprob
