#pragma once

#include "rdoa/errors.hpp"
#include "rdoa/power_iteration.hpp"

#include <string>
#include <string_view>
#include <vector>

namespace rdoa {

enum class Method { RpiRi, RpiPr, EspritFd, RootMusicFd };

std::string_view to_string(Method method);
/// Accepts "rpi-ri", "rpi-pr", "esprit", "root-music".
Method parse_method(std::string_view text);

struct DoaEstimate {
  double theta_deg = 0.0;
  Method method = Method::RpiPr;
  int pi_iterations = 0;                // 0 for the full-EVD baselines
  std::vector<double> candidate_angles; // every root's angle, rooting methods only
  double phase = 0.0;                   // estimated inter-element phase (rad)
};

/// Two maximally overlapping subarrays stacked on top of each other:
/// rows 0..N-2 are antennas 1..N-1, rows N-1..2N-3 are antennas 2..N.
class StackedData {
 public:
  explicit StackedData(CMatrix data) : data_(std::move(data)) {}
  const CMatrix& data() const { return data_; }
  int subarray_size() const { return static_cast<int>(data_.rows() / 2); }

 private:
  CMatrix data_;
};

StackedData stack_subarrays(const SnapshotMatrix& snapshots);

/// Covariance of the stacked data, gathered from the N x N covariance. Equal
/// to sample_covariance(stack_subarrays(y)) without the (2N-2)^2 K pass.
HermitianMatrix stacked_covariance(const HermitianMatrix& r);

struct PiSettings {
  InitialVectorSpec init = init::RowSum{};
  double epsilon = kDefaultEpsilon;
  int max_iterations = kDefaultMaxIterations;
};

DoaEstimate rpi_ri_estimate(const SnapshotMatrix& snapshots, const ArrayGeometry& geometry,
                            const InitialVectorSpec& init, double epsilon = kDefaultEpsilon);
DoaEstimate rpi_pr_estimate(const SnapshotMatrix& snapshots, const ArrayGeometry& geometry,
                            const InitialVectorSpec& init, double epsilon = kDefaultEpsilon);
DoaEstimate esprit_fd_estimate(const SnapshotMatrix& snapshots, const ArrayGeometry& geometry);
DoaEstimate root_music_fd_estimate(const SnapshotMatrix& snapshots, const ArrayGeometry& geometry);

// Covariance-level entry points. The Monte-Carlo harness computes the array
// covariance once per trial and hands it to every method.
DoaEstimate rpi_ri_from_covariance(const HermitianMatrix& r, const ArrayGeometry& geometry,
                                   const PiSettings& pi = {});
DoaEstimate rpi_pr_from_covariance(const HermitianMatrix& r, const ArrayGeometry& geometry,
                                   const PiSettings& pi = {});
DoaEstimate esprit_fd_from_covariance(const HermitianMatrix& r, const ArrayGeometry& geometry);
DoaEstimate root_music_fd_from_covariance(const HermitianMatrix& r, const ArrayGeometry& geometry);

DoaEstimate estimate_from_covariance(Method method, const HermitianMatrix& r,
                                     const ArrayGeometry& geometry, const PiSettings& pi = {});
DoaEstimate estimate(Method method, const SnapshotMatrix& snapshots, const ArrayGeometry& geometry,
                     const PiSettings& pi = {});

/// I - u (u^H u)^-1 u^H.
CMatrix noise_projector(const CVector& u);

/// Ascending coefficients of z^(N-1) a^T(1/z) P a(z) for a projector P, i.e.
/// coefficient k is the sum of P along the diagonal j - i = k - (N - 1).
std::vector<Complex> music_polynomial(const CMatrix& projector);

/// Shift-invariance step: Psi = (u1^H u1)^-1 u1^H u2 on the two halves of a
/// stacked eigenvector, returning phi = -arg(Psi).
double rotational_phase(const CVector& stacked_eigenvector);

/// Picks the root inside the unit circle with the largest modulus (ties go to
/// the smallest |arg z|). Roots within 1e-9 outside the circle count as inside.
std::optional<Complex> select_music_root(const std::vector<Complex>& roots);

/// arcsin(phi / (2 pi d)) in degrees; EstimationFailure outside [-1, 1].
double phase_to_angle(double phase, double spacing);

}  // namespace rdoa
