#pragma once

#include <stdexcept>
#include <string>

namespace pathzva {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Malformed model: empty successor list on a non-terminal state, bad weights,
/// probabilities not summing to one.
struct ModelError : Error {
  using Error::Error;
};

/// Invalid user-facing configuration (parameters, budgets, measure choices).
struct ConfigError : Error {
  using Error::Error;
};

/// A state or step budget was exhausted; usually an infinite relevant set or a
/// non-absorbing chain.
struct BudgetExceeded : Error {
  using Error::Error;
};

/// An iterative linear solve failed to reach its tolerance.
struct ConvergenceError : Error {
  using Error::Error;
};

/// The forward exploration exhausted its queue without meeting a goal state.
struct GoalUnreachable : Error {
  using Error::Error;
};

}  // namespace pathzva
