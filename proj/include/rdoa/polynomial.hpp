#pragma once

#include "rdoa/array_model.hpp"

#include <span>
#include <vector>

namespace rdoa {

struct PolynomialRoots {
  std::vector<Complex> coefficients;  // ascending powers, trimmed
  std::vector<Complex> roots;         // one per degree
};

struct RootFinderOptions {
  /// Degrees above this use Aberth-Ehrlich instead of companion eigenvalues.
  int companion_max_degree = 64;
  int max_iterations = 500;
  double trim_tolerance = 1e-12;
};

/// All complex roots of sum_k c_k z^k. Leading (highest power) coefficients
/// below trim_tolerance * max|c| are dropped first.
PolynomialRoots polynomial_roots(std::span<const Complex> coefficients,
                                 const RootFinderOptions& options = {});

Complex evaluate_polynomial(std::span<const Complex> coefficients, Complex z);

/// |f(z)| / (max|c_k| * max(1, |z|)^degree). For |z| <= 1 this is the plain
/// residual against the largest coefficient; outside the unit circle it is the
/// same measure taken on the reversed polynomial at 1/z.
double relative_root_residual(std::span<const Complex> coefficients, Complex z);

}  // namespace rdoa
