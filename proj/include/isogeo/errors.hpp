#pragma once

#include <stdexcept>
#include <string>

namespace isogeo {

// Bad arguments from a caller; the CLI maps this to exit code 2.
struct UsageError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// Point outside the domain of a defining function.
struct DomainError : std::domain_error {
  using std::domain_error::domain_error;
};

// Gradient vanishes: the point sits on a focal (singular) level.
struct SingularLevel : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct NumericalFailure : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct NoWitness : std::runtime_error {
  using std::runtime_error::runtime_error;
};

} // namespace isogeo
