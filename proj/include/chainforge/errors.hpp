#pragma once

#include <stdexcept>
#include <string>

namespace chainforge {

// Base class for everything this library throws on purpose.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Bad construction input: foreign letters, malformed spec files, out-of-range
// parameters. Maps to CLI exit code 2.
struct ConfigError : Error {
  using Error::Error;
};

// A request that is well-formed but outside the supported fragment
// (e.g. cross-family intersections of pattern ideals).
struct UnsupportedError : Error {
  using Error::Error;
};

// A bounded search that the theory says must succeed ran out of budget.
// Carries the budget actually tried so reports can show it.
struct SearchBudgetError : Error {
  int budget;
  SearchBudgetError(const std::string& what, int tried)
      : Error(what), budget(tried) {}
};

}  // namespace chainforge
