#pragma once

#include <stdexcept>
#include <string>

namespace semcom {

// Index outside the scenario's MD / BS / subchannel ranges.
class IndexError : public std::out_of_range {
 public:
  using std::out_of_range::out_of_range;
};

// A caller broke an operation's precondition (wrong b vector, j = 0 for a
// backhaul rate, malformed LP dimensions, ...).
class ContractError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

// Argument outside the mathematical domain of a model function.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// The requested accuracy cannot be met by any extraction ratio.
class InfeasibleAccuracyError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// GESTR requested for a decision that transmits nothing.
class DegenerateInstanceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Invalid scenario / generation / sweep configuration.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Internal solver failure (e.g. Dinkelbach iteration cap exceeded).
class SolverError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace semcom
