#pragma once

#include <Eigen/Dense>

#include <complex>
#include <cstdint>
#include <filesystem>
#include <iosfwd>

namespace rdoa {

using Complex = std::complex<double>;
using CVector = Eigen::VectorXcd;
using CMatrix = Eigen::MatrixXcd;

inline constexpr double kPi = 3.14159265358979323846;

inline double deg_to_rad(double deg) { return deg * kPi / 180.0; }
inline double rad_to_deg(double rad) { return rad * 180.0 / kPi; }

/// Uniform linear array. Positions and spacing are in wavelengths; the first
/// element sits at the reference point (position 0).
class ArrayGeometry {
 public:
  explicit ArrayGeometry(int n_antennas, double spacing = 0.5);

  int n_antennas() const { return n_antennas_; }
  double spacing() const { return spacing_; }
  const Eigen::VectorXd& positions() const { return positions_; }

  /// Inter-element phase for a plane wave from theta: 2*pi*(d/lambda)*sin(theta).
  double phase_of(double theta_deg) const;

 private:
  int n_antennas_;
  double spacing_;
  Eigen::VectorXd positions_;
};

struct SourceScenario {
  double theta0_deg = 50.0;
  double snr_db = 0.0;  // per antenna, unit signal power
  int k_snapshots = 1000;
  std::uint64_t seed = 1;

  /// Throws DomainError if theta0 is outside (-90, 90) or k_snapshots < 1.
  void validate() const;
  double noise_variance() const;
};

/// N x K block of array snapshots, one column per time sample.
class SnapshotMatrix {
 public:
  explicit SnapshotMatrix(CMatrix data);

  const CMatrix& data() const { return data_; }
  int n_antennas() const { return static_cast<int>(data_.rows()); }
  int k_snapshots() const { return static_cast<int>(data_.cols()); }

 private:
  CMatrix data_;
};

/// a(theta) with entries exp(-j * n * phi), n = 0..N-1.
CVector steering_vector(const ArrayGeometry& geometry, double theta_deg);

/// y_k = a(theta0) s_k + v_k with s_k ~ CN(0, 1) and v_k ~ CN(0, sigma^2 I).
/// The K signal samples are drawn before the noise, so a noiseless block and a
/// noisy block with the same seed share the same s_k.
SnapshotMatrix synthesize_snapshots(const ArrayGeometry& geometry, const SourceScenario& scenario,
                                    bool noiseless = false);

// Binary snapshot files: "DPSM", u32 N, u32 K, then N*K (re, im) float64 pairs
// in column-major order. Everything little-endian.
void write_snapshots(std::ostream& out, const SnapshotMatrix& snapshots);
SnapshotMatrix read_snapshots(std::istream& in);
void save_snapshots(const std::filesystem::path& path, const SnapshotMatrix& snapshots);
SnapshotMatrix load_snapshots(const std::filesystem::path& path);

}  // namespace rdoa
