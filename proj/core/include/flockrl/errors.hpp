#pragma once

#include <stdexcept>
#include <string>

namespace flockrl {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Non-finite agent or leader state handed to a kinematic update.
class InvalidStateError : public Error {
 public:
  using Error::Error;
};

// A numeric parameter outside its admissible range.
class ParameterError : public Error {
 public:
  using Error::Error;
};

// Ψ_cc too small to invert when extracting a greedy control.
class DegenerateCriticError : public Error {
 public:
  using Error::Error;
};

// Non-finite regressor or target fed to the least-squares estimator.
class EstimationError : public Error {
 public:
  using Error::Error;
};

// Malformed inputs to a pure control law (mismatched lengths, etc).
class InputError : public Error {
 public:
  using Error::Error;
};

// Scenario or rule-base configuration that fails validation.
class ConfigError : public Error {
 public:
  using Error::Error;
};

// A file that cannot be opened, read or written.
class FileError : public Error {
 public:
  using Error::Error;
};

}  // namespace flockrl
