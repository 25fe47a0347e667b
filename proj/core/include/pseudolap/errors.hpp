#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace pseudolap {

// Root of the library's exception hierarchy. Every error thrown by the core
// is either an InputError (bad model, bad configuration, violated
// precondition) or a NumericalError (an algorithm failed to converge or lost
// track of a quantity it was following).
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class InputError : public Error {
 public:
  using Error::Error;
};

class NumericalError : public Error {
 public:
  using Error::Error;
};

// --- input / precondition errors -------------------------------------------

class DomainError : public InputError {
 public:
  using InputError::InputError;
};

class PoleError : public InputError {
 public:
  using InputError::InputError;
};

class InvalidTopology : public InputError {
 public:
  using InputError::InputError;
};

class TruncationBelowBase : public InputError {
 public:
  // `cusps` holds 1-based cusp numbers with a_i <= b_i.
  TruncationBelowBase(const std::string& what, std::vector<std::size_t> cusps)
      : InputError(what), offending_cusps_(std::move(cusps)) {}
  const std::vector<std::size_t>& offending_cusps() const { return offending_cusps_; }

 private:
  std::vector<std::size_t> offending_cusps_;
};

class ResolutionError : public InputError {
 public:
  using InputError::InputError;
};

class GridError : public InputError {
 public:
  using InputError::InputError;
};

class InvalidMixing : public InputError {
 public:
  using InputError::InputError;
};

class StructureViolation : public InputError {
 public:
  using InputError::InputError;
};

class NotAPole : public InputError {
 public:
  using InputError::InputError;
};

class AtPole : public InputError {
 public:
  using InputError::InputError;
};

class NotInEigenspace : public InputError {
 public:
  using InputError::InputError;
};

class MissingSystole : public InputError {
 public:
  using InputError::InputError;
};

class ModelFormatError : public InputError {
 public:
  using InputError::InputError;
};

// --- numerical failures -------------------------------------------------------

class DegenerateNullspace : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

class PhaseTrackingLost : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

class BranchJump : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

class ConvergenceError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

class QuadratureError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

}  // namespace pseudolap
