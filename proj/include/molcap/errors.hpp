#pragma once

#include <stdexcept>
#include <string>

namespace molcap {

/// Argument outside the mathematical domain of an operation (x ∉ [0, M], p ∉ [0, 1], ...).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Input distribution for which the receptor chain is reducible (all mass at zero concentration).
class DegenerateInputError : public std::runtime_error {
 public:
  DegenerateInputError()
      : std::runtime_error("degenerate input: chain absorbs into all-unbound") {}
};

/// A linear-algebra step could not reach the required residual.
class NumericalRankError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Every optimizer start failed to meet its convergence tolerance.
class ConvergenceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Inverse problem without a stable solution (leading coefficient too small, divergent integral, ...).
class IllPosedError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace molcap
