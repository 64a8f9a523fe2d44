#pragma once

#include <stdexcept>
#include <string>

namespace ado3d {

/// Base class for failures of the numerical pipeline (eigen-solve, mode
/// evaluation, inversion). Argument validation uses std::invalid_argument.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class NumericalSingularity : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

class SpectralFailure : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

class DegenerateMode : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

class PoleProximity : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

class NormalizationFailure : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

class AssemblyError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

class InversionFailure : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

/// Rejected run or Monte Carlo configuration.
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace ado3d
