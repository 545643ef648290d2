#pragma once

#include <complex>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace rdoa {

/// Raised when an input violates a precondition (bad angle, bad dimension, ...).
class DomainError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// An iterative numerical routine did not converge.
class NumericError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Polynomial rooting ran out of iterations. Carries the best root estimates.
class RootFindingError : public NumericError {
 public:
  RootFindingError(const std::string& what, std::vector<std::complex<double>> partial)
      : NumericError(what), partial_roots(std::move(partial)) {}

  std::vector<std::complex<double>> partial_roots;
};

struct EstimationDiagnostics {
  std::optional<double> phase;
  int pi_iterations = 0;
  bool pi_converged = true;
  std::vector<double> candidate_angles;
  std::optional<std::complex<double>> nearest_root;
};

/// A DOA estimator could not produce an angle for this data block.
class EstimationFailure : public std::runtime_error {
 public:
  EstimationFailure(const std::string& what, EstimationDiagnostics diag)
      : std::runtime_error(what), diagnostics(std::move(diag)) {}

  EstimationDiagnostics diagnostics;
};

}  // namespace rdoa
