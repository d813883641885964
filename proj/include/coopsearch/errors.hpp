#pragma once

#include <stdexcept>
#include <string>

namespace coopsearch {

// Malformed input: non-normalized tables, bad grid dimensions, unknown config keys.
struct ValidationError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// Input is well-formed but outside the region where a formula is defined.
struct DomainError : std::domain_error {
  using std::domain_error::domain_error;
};

// A bracketing root search found no sign change.
struct NoRootError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// A simulated measurement has zero probability under the likelihood model.
struct InconsistencyError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace coopsearch
