#include "rdoa/polynomial.hpp"

#include "rdoa/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>

namespace rdoa {
namespace {

constexpr double kUnitRoundoff = std::numeric_limits<double>::epsilon() / 2.0;

struct NewtonStep {
  Complex ratio;  // p(z) / p'(z)
  bool at_noise_floor = false;
};

// Horner evaluation with a running rounding-error bound. Outside the unit
// circle the reversed polynomial is evaluated at 1/z so nothing overflows.
NewtonStep newton_ratio(std::span<const Complex> c, Complex z) {
  const int n = static_cast<int>(c.size()) - 1;
  if (std::abs(z) <= 1.0) {
    Complex p = c[n];
    Complex dp = 0.0;
    double bound = std::abs(c[n]);
    const double az = std::abs(z);
    for (int k = n - 1; k >= 0; --k) {
      dp = dp * z + p;
      p = p * z + c[k];
      bound = bound * az + std::abs(c[k]);
    }
    return {p / dp, std::abs(p) <= 4.0 * n * kUnitRoundoff * bound};
  }
  const Complex w = 1.0 / z;
  const double aw = std::abs(w);
  Complex q = c[0];
  Complex dq = 0.0;
  double bound = std::abs(c[0]);
  for (int k = 1; k <= n; ++k) {
    dq = dq * w + q;
    q = q * w + c[k];
    bound = bound * aw + std::abs(c[k]);
  }
  // p(z) = z^n q(1/z)  =>  p/p' = z q / (n q - w q').
  return {z * q / (static_cast<double>(n) * q - w * dq),
          std::abs(q) <= 4.0 * n * kUnitRoundoff * bound};
}

std::vector<Complex> aberth_ehrlich(std::span<const Complex> c, int max_iterations) {
  const int n = static_cast<int>(c.size()) - 1;
  const double radius = std::pow(std::abs(c[0]) / std::abs(c[n]), 1.0 / n);
  std::vector<Complex> z(n);
  for (int k = 0; k < n; ++k) z[k] = std::polar(radius, 2.0 * kPi * k / n + 0.7);

  std::vector<bool> done(n, false);
  for (int iter = 0; iter < max_iterations; ++iter) {
    bool all_done = true;
    for (int i = 0; i < n; ++i) {
      if (done[i]) continue;
      const NewtonStep step = newton_ratio(c, z[i]);
      if (step.at_noise_floor) {
        done[i] = true;
        continue;
      }
      Complex repulsion = 0.0;
      for (int j = 0; j < n; ++j) {
        if (j != i) repulsion += 1.0 / (z[i] - z[j]);
      }
      const Complex correction = step.ratio / (1.0 - step.ratio * repulsion);
      z[i] -= correction;
      if (std::abs(correction) <= 2.0 * kUnitRoundoff * std::abs(z[i])) {
        done[i] = true;
      } else {
        all_done = false;
      }
    }
    if (all_done) return z;
  }
  throw RootFindingError("Aberth-Ehrlich iteration did not converge", std::move(z));
}

// Parlett-Reinsch balancing with radix 2.
void balance(CMatrix& a) {
  constexpr double radix = 2.0;
  const auto n = a.rows();
  bool converged = false;
  while (!converged) {
    converged = true;
    for (Eigen::Index i = 0; i < n; ++i) {
      double col = 0.0;
      double row = 0.0;
      for (Eigen::Index j = 0; j < n; ++j) {
        if (j == i) continue;
        col += std::abs(a(j, i));
        row += std::abs(a(i, j));
      }
      if (col == 0.0 || row == 0.0) continue;
      const double total = col + row;
      double f = 1.0;
      double g = row / radix;
      while (col < g) {
        f *= radix;
        col *= radix * radix;
      }
      g = row * radix;
      while (col > g) {
        f /= radix;
        col /= radix * radix;
      }
      if ((col + row) / f < 0.95 * total) {
        converged = false;
        a.row(i) /= f;
        a.col(i) *= f;
      }
    }
  }
}

std::optional<std::vector<Complex>> companion_roots(std::span<const Complex> c) {
  const int n = static_cast<int>(c.size()) - 1;
  CMatrix companion = CMatrix::Zero(n, n);
  for (int i = 1; i < n; ++i) companion(i, i - 1) = 1.0;
  for (int i = 0; i < n; ++i) companion(i, n - 1) = -c[i] / c[n];
  balance(companion);

  Eigen::ComplexEigenSolver<CMatrix> solver(companion, false);
  if (solver.info() != Eigen::Success) return std::nullopt;
  std::vector<Complex> roots(solver.eigenvalues().data(), solver.eigenvalues().data() + n);

  // Two Newton steps on the original coefficients; keep a step only if it
  // lowers the residual.
  for (Complex& z : roots) {
    for (int pass = 0; pass < 2; ++pass) {
      const NewtonStep step = newton_ratio(c, z);
      if (step.at_noise_floor || !std::isfinite(std::abs(step.ratio))) break;
      const Complex candidate = z - step.ratio;
      if (relative_root_residual(c, candidate) < relative_root_residual(c, z)) {
        z = candidate;
      } else {
        break;
      }
    }
  }
  return roots;
}

}  // namespace

Complex evaluate_polynomial(std::span<const Complex> coefficients, Complex z) {
  Complex p = 0.0;
  for (auto it = coefficients.rbegin(); it != coefficients.rend(); ++it) p = p * z + *it;
  return p;
}

double relative_root_residual(std::span<const Complex> c, Complex z) {
  if (c.empty()) return 0.0;
  double scale = 0.0;
  for (const Complex& x : c) scale = std::max(scale, std::abs(x));
  const int n = static_cast<int>(c.size()) - 1;
  if (std::abs(z) <= 1.0) return std::abs(evaluate_polynomial(c, z)) / scale;
  const Complex w = 1.0 / z;
  Complex q = 0.0;
  for (int k = 0; k <= n; ++k) q = q * w + c[k];
  return std::abs(q) / scale;
}

PolynomialRoots polynomial_roots(std::span<const Complex> coefficients,
                                 const RootFinderOptions& options) {
  double scale = 0.0;
  bool finite = true;
  for (const Complex& x : coefficients) {
    finite = finite && std::isfinite(x.real()) && std::isfinite(x.imag());
    scale = std::max(scale, std::abs(x));
  }
  if (scale == 0.0 || !finite) {
    throw DomainError("polynomial_roots needs a nonzero, finite coefficient vector");
  }

  PolynomialRoots out;
  std::size_t top = coefficients.size();
  while (top > 0 && std::abs(coefficients[top - 1]) <= options.trim_tolerance * scale) --top;
  out.coefficients.assign(coefficients.begin(), coefficients.begin() + top);

  // Exact zeros at the bottom are roots at the origin.
  std::size_t low = 0;
  while (low + 1 < top && coefficients[low] == Complex(0.0)) ++low;
  out.roots.assign(low, Complex(0.0));
  const std::span<const Complex> reduced(out.coefficients.data() + low, top - low);
  const int degree = static_cast<int>(reduced.size()) - 1;
  if (degree <= 0) return out;

  std::vector<Complex> found;
  if (degree == 1) {
    found = {-reduced[0] / reduced[1]};
  } else if (degree <= options.companion_max_degree) {
    if (auto roots = companion_roots(reduced)) {
      found = std::move(*roots);
    } else {
      found = aberth_ehrlich(reduced, options.max_iterations);
    }
  } else {
    found = aberth_ehrlich(reduced, options.max_iterations);
  }
  out.roots.insert(out.roots.end(), found.begin(), found.end());
  return out;
}

}  // namespace rdoa
