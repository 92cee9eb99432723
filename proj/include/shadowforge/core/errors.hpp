#pragma once

#include <stdexcept>
#include <string>

namespace shadowforge {

/// Precondition violations on operation inputs.
struct InvalidInput : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

/// A metered query would exceed the remaining budget. Nothing was debited.
struct BudgetExhausted : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Backend generation failed after retries; message names the failing request.
struct GenerationError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct CheckpointError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Unknown architecture id.
struct RegistryError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// A metric has an empty denominator (e.g. no eligible examples for ASR).
struct DegenerateReport : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace shadowforge
