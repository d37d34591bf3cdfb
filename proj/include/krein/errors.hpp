#pragma once

#include <stdexcept>
#include <string>

namespace krein {

/// Base class for failures of a numerical stage (solver, eigensolve, guard).
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Input field violates an analytic hypothesis (e.g. nonzero mean for ∂⁻¹).
class NonIntegrableInput : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

class GridMismatch : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

/// Parameters outside the window where a ground state exists.
class ExistenceWindowError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

class ConvergenceFailure : public NumericalError {
 public:
  ConvergenceFailure(const std::string& what, double last_residual)
      : NumericalError(what), last_residual_(last_residual) {}
  double last_residual() const noexcept { return last_residual_; }

 private:
  double last_residual_;
};

/// ⟨∂⁻¹ψ₀, kernel⟩ too large for L⁻¹ to be applied on the kernel complement.
class FredholmViolation : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

/// The index formula and the directly computed spectrum disagree.
class TheoryViolation : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

}  // namespace krein
