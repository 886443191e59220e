#pragma once

#include <stdexcept>
#include <string>

namespace thermofid {

/// Invalid input: out-of-domain parameter, malformed grid, unsupported regime.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// A model could not produce ln Z at a point. Sweeps record these as missing cells.
class EvaluationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class QuadratureError : public EvaluationError {
 public:
  using EvaluationError::EvaluationError;
};

class CutoffError : public EvaluationError {
 public:
  using EvaluationError::EvaluationError;
};

class EigensolverError : public EvaluationError {
 public:
  using EvaluationError::EvaluationError;
};

class NegativeEigenvalue : public EvaluationError {
 public:
  using EvaluationError::EvaluationError;
};

/// Finite-difference step below the noise floor of ln Z.
class StepTooSmall : public EvaluationError {
 public:
  using EvaluationError::EvaluationError;
};

class SolverError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class EmptyLine : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class InsufficientSizes : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

}  // namespace thermofid
