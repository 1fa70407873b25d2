#pragma once

#include <stdexcept>
#include <string>

namespace fg {

// Precondition violated by caller-supplied data (bad N, zero vector, ...).
class DomainError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// A numerical procedure failed to reach its acceptance criterion.
class SolverError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Experiment configuration could not be parsed or validated.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace fg
