#pragma once

#include <stdexcept>
#include <string>

namespace orthocycle {

// Error taxonomy shared by the library and the CLI exit-code mapping:
// usage/config problems -> 2, exceeded caps -> 3, broken internal invariants -> 4.
// Mathematical domain violations (pole inputs, singular matrices, ...) use
// std::domain_error and are treated as usage errors at the CLI boundary.

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct ResourceError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct InvariantBreach : std::logic_error {
  using std::logic_error::logic_error;
};

}  // namespace orthocycle
