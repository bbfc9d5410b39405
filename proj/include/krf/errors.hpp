// Error taxonomy: configuration errors (bad inputs, schema), domain errors
// (out-of-range evaluation, positivity violations), numerical errors
// (non-convergence, stiffness).  CLI maps these to exit codes.
#pragma once

#include <stdexcept>
#include <string>

namespace krf {

struct ConfigError : std::runtime_error {
  explicit ConfigError(const std::string& msg) : std::runtime_error(msg) {}
};

struct DomainError : std::runtime_error {
  explicit DomainError(const std::string& msg) : std::runtime_error(msg) {}
};

struct NumericalError : std::runtime_error {
  explicit NumericalError(const std::string& msg) : std::runtime_error(msg) {}
};

// Time step underflow in the explicit stepper; carries a state dump string.
struct StiffnessError : NumericalError {
  explicit StiffnessError(const std::string& msg) : NumericalError(msg) {}
};

}  // namespace krf
