#include "rdoa/estimators.hpp"

#include "rdoa/polynomial.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace rdoa {
namespace {

// Stacked row i maps to antenna index (i < N-1 ? i : i - N + 2).
int stacked_source_row(int i, int n) { return i < n - 1 ? i : i - n + 2; }

void require_stackable(int n) {
  if (n < 3) throw DomainError("subarray stacking needs N >= 3, got " + std::to_string(n));
}

// A near-signal start for the stacked covariance is the stacked steering
// vector [a_1..a_{N-1}; a_2..a_N], not a longer plain steering vector.
InitialVectorSpec stacked_init(const InitialVectorSpec& spec, int n) {
  if (const auto* near = std::get_if<init::NearSignal>(&spec)) {
    const CVector a = steering_vector(ArrayGeometry(n, near->spacing), near->theta_hint_deg);
    CVector v(2 * n - 2);
    for (int i = 0; i < 2 * n - 2; ++i) v(i) = a(stacked_source_row(i, n));
    return init::Custom{std::move(v)};
  }
  return spec;
}

PowerIterationResult checked_power_iterate(const HermitianMatrix& r, const InitialVectorSpec& init,
                                           const PiSettings& pi) {
  PowerIterationResult result = power_iterate(r, init, pi.epsilon, pi.max_iterations);
  if (!result.converged) {
    EstimationDiagnostics diag;
    diag.pi_iterations = result.iterations;
    diag.pi_converged = false;
    throw EstimationFailure("power iteration did not converge in " +
                                std::to_string(result.iterations) + " iterations",
                            std::move(diag));
  }
  return result;
}

DoaEstimate rotational_estimate(Method method, const CVector& stacked_u,
                                const ArrayGeometry& geometry, int pi_iterations) {
  DoaEstimate est;
  est.method = method;
  est.pi_iterations = pi_iterations;
  est.phase = rotational_phase(stacked_u);
  try {
    est.theta_deg = phase_to_angle(est.phase, geometry.spacing());
  } catch (EstimationFailure& failure) {
    failure.diagnostics.pi_iterations = pi_iterations;
    throw;
  }
  return est;
}

DoaEstimate rooting_estimate(Method method, const CMatrix& projector,
                             const ArrayGeometry& geometry, int pi_iterations) {
  const std::vector<Complex> coefficients = music_polynomial(projector);
  const PolynomialRoots roots = polynomial_roots(coefficients);

  DoaEstimate est;
  est.method = method;
  est.pi_iterations = pi_iterations;
  const double aperture = 2.0 * kPi * geometry.spacing();
  for (const Complex& z : roots.roots) {
    const double x = -std::arg(z) / aperture;
    if (std::abs(x) <= 1.0) est.candidate_angles.push_back(rad_to_deg(std::asin(x)));
  }

  const std::optional<Complex> chosen = select_music_root(roots.roots);
  if (!chosen) {
    EstimationDiagnostics diag;
    diag.pi_iterations = pi_iterations;
    diag.candidate_angles = est.candidate_angles;
    double best = std::numeric_limits<double>::infinity();
    for (const Complex& z : roots.roots) {
      if (std::abs(std::abs(z) - 1.0) < best) {
        best = std::abs(std::abs(z) - 1.0);
        diag.nearest_root = z;
      }
    }
    throw EstimationFailure("no polynomial root inside the unit circle", std::move(diag));
  }
  est.phase = -std::arg(*chosen);
  try {
    est.theta_deg = phase_to_angle(est.phase, geometry.spacing());
  } catch (EstimationFailure& failure) {
    failure.diagnostics.pi_iterations = pi_iterations;
    failure.diagnostics.candidate_angles = est.candidate_angles;
    failure.diagnostics.nearest_root = *chosen;
    throw;
  }
  return est;
}

void require_matching(const HermitianMatrix& r, const ArrayGeometry& geometry) {
  if (r.dim() != geometry.n_antennas()) {
    throw DomainError("covariance dimension does not match the array");
  }
}

}  // namespace

std::string_view to_string(Method method) {
  switch (method) {
    case Method::RpiRi: return "rpi-ri";
    case Method::RpiPr: return "rpi-pr";
    case Method::EspritFd: return "esprit";
    case Method::RootMusicFd: return "root-music";
  }
  return "unknown";
}

Method parse_method(std::string_view text) {
  for (Method m : {Method::RpiRi, Method::RpiPr, Method::EspritFd, Method::RootMusicFd}) {
    if (text == to_string(m)) return m;
  }
  throw DomainError("unknown method '" + std::string(text) + "'");
}

StackedData stack_subarrays(const SnapshotMatrix& snapshots) {
  const int n = snapshots.n_antennas();
  require_stackable(n);
  const CMatrix& y = snapshots.data();
  CMatrix stacked(2 * n - 2, y.cols());
  stacked.topRows(n - 1) = y.topRows(n - 1);
  stacked.bottomRows(n - 1) = y.bottomRows(n - 1);
  return StackedData(std::move(stacked));
}

HermitianMatrix stacked_covariance(const HermitianMatrix& r) {
  const int n = r.dim();
  require_stackable(n);
  const int m = 2 * n - 2;
  CMatrix out(m, m);
  for (int col = 0; col < m; ++col) {
    const int src_col = stacked_source_row(col, n);
    for (int row = 0; row < m; ++row) out(row, col) = r.data()(stacked_source_row(row, n), src_col);
  }
  return HermitianMatrix(std::move(out));
}

CMatrix noise_projector(const CVector& u) {
  const double uu = u.squaredNorm();
  if (!(uu > 0.0)) throw DomainError("cannot project out a zero vector");
  return CMatrix::Identity(u.size(), u.size()) - (u * u.adjoint()) / uu;
}

std::vector<Complex> music_polynomial(const CMatrix& projector) {
  const int n = static_cast<int>(projector.rows());
  if (n < 2 || projector.cols() != n) throw DomainError("projector must be square with N >= 2");
  std::vector<Complex> c(2 * n - 1, Complex(0.0));
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) c[j - i + n - 1] += projector(i, j);
  }
  return c;
}

double rotational_phase(const CVector& u) {
  if (u.size() < 4 || u.size() % 2 != 0) throw DomainError("stacked eigenvector needs an even length >= 4");
  const Eigen::Index half = u.size() / 2;
  const auto upper = u.head(half);
  const auto lower = u.tail(half);
  const Complex psi = upper.dot(lower) / upper.squaredNorm();
  return -std::arg(psi);
}

std::optional<Complex> select_music_root(const std::vector<Complex>& roots) {
  constexpr double kOnCircle = 1e-9;
  std::optional<Complex> best;
  for (const Complex& z : roots) {
    const double mod = std::abs(z);
    if (!(mod < 1.0 + kOnCircle)) continue;
    if (!best) {
      best = z;
      continue;
    }
    const double best_mod = std::min(std::abs(*best), 1.0);
    const double cand_mod = std::min(mod, 1.0);
    if (cand_mod > best_mod ||
        (cand_mod == best_mod && std::abs(std::arg(z)) < std::abs(std::arg(*best)))) {
      best = z;
    }
  }
  return best;
}

double phase_to_angle(double phase, double spacing) {
  const double x = phase / (2.0 * kPi * spacing);
  if (!(std::abs(x) <= 1.0)) {
    EstimationDiagnostics diag;
    diag.phase = phase;
    throw EstimationFailure("phase " + std::to_string(phase) + " maps outside arcsin's domain",
                            std::move(diag));
  }
  return rad_to_deg(std::asin(x));
}

DoaEstimate rpi_ri_from_covariance(const HermitianMatrix& r, const ArrayGeometry& geometry,
                                   const PiSettings& pi) {
  require_matching(r, geometry);
  const HermitianMatrix stacked = stacked_covariance(r);
  const PowerIterationResult result =
      checked_power_iterate(stacked, stacked_init(pi.init, r.dim()), pi);
  return rotational_estimate(Method::RpiRi, result.dominant_eigenvector, geometry,
                             result.iterations);
}

DoaEstimate esprit_fd_from_covariance(const HermitianMatrix& r, const ArrayGeometry& geometry) {
  require_matching(r, geometry);
  const EvdResult evd = hermitian_evd(stacked_covariance(r));
  return rotational_estimate(Method::EspritFd, evd.eigenvectors.col(0), geometry, 0);
}

DoaEstimate rpi_pr_from_covariance(const HermitianMatrix& r, const ArrayGeometry& geometry,
                                   const PiSettings& pi) {
  require_matching(r, geometry);
  const PowerIterationResult result = checked_power_iterate(r, pi.init, pi);
  return rooting_estimate(Method::RpiPr, noise_projector(result.dominant_eigenvector), geometry,
                          result.iterations);
}

DoaEstimate root_music_fd_from_covariance(const HermitianMatrix& r,
                                          const ArrayGeometry& geometry) {
  require_matching(r, geometry);
  const EvdResult evd = hermitian_evd(r);
  const auto minor = evd.eigenvectors.rightCols(r.dim() - 1);
  const CMatrix projector = minor * minor.adjoint();
  return rooting_estimate(Method::RootMusicFd, projector, geometry, 0);
}

DoaEstimate estimate_from_covariance(Method method, const HermitianMatrix& r,
                                     const ArrayGeometry& geometry, const PiSettings& pi) {
  switch (method) {
    case Method::RpiRi: return rpi_ri_from_covariance(r, geometry, pi);
    case Method::RpiPr: return rpi_pr_from_covariance(r, geometry, pi);
    case Method::EspritFd: return esprit_fd_from_covariance(r, geometry);
    case Method::RootMusicFd: return root_music_fd_from_covariance(r, geometry);
  }
  throw DomainError("unknown method");
}

DoaEstimate estimate(Method method, const SnapshotMatrix& snapshots, const ArrayGeometry& geometry,
                     const PiSettings& pi) {
  if (snapshots.n_antennas() != geometry.n_antennas()) {
    throw DomainError("snapshot rows do not match the array size");
  }
  if (method == Method::RpiRi || method == Method::EspritFd) {
    require_stackable(snapshots.n_antennas());
  }
  return estimate_from_covariance(method, sample_covariance(snapshots), geometry, pi);
}

DoaEstimate rpi_ri_estimate(const SnapshotMatrix& snapshots, const ArrayGeometry& geometry,
                            const InitialVectorSpec& init, double epsilon) {
  return estimate(Method::RpiRi, snapshots, geometry, PiSettings{init, epsilon});
}

DoaEstimate rpi_pr_estimate(const SnapshotMatrix& snapshots, const ArrayGeometry& geometry,
                            const InitialVectorSpec& init, double epsilon) {
  return estimate(Method::RpiPr, snapshots, geometry, PiSettings{init, epsilon});
}

DoaEstimate esprit_fd_estimate(const SnapshotMatrix& snapshots, const ArrayGeometry& geometry) {
  return estimate(Method::EspritFd, snapshots, geometry);
}

DoaEstimate root_music_fd_estimate(const SnapshotMatrix& snapshots,
                                   const ArrayGeometry& geometry) {
  return estimate(Method::RootMusicFd, snapshots, geometry);
}

}  // namespace rdoa
