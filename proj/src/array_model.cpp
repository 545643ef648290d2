#include "rdoa/array_model.hpp"

#include "rdoa/errors.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <istream>
#include <ostream>
#include <random>
#include <string>

namespace rdoa {

ArrayGeometry::ArrayGeometry(int n_antennas, double spacing)
    : n_antennas_(n_antennas), spacing_(spacing) {
  if (n_antennas < 2) {
    throw DomainError("array needs at least 2 antennas, got " + std::to_string(n_antennas));
  }
  if (!(spacing > 0.0) || !std::isfinite(spacing)) {
    throw DomainError("element spacing must be positive and finite");
  }
  positions_.resize(n_antennas);
  for (int n = 0; n < n_antennas; ++n) positions_(n) = spacing * n;
}

double ArrayGeometry::phase_of(double theta_deg) const {
  return 2.0 * kPi * spacing_ * std::sin(deg_to_rad(theta_deg));
}

void SourceScenario::validate() const {
  if (!(theta0_deg > -90.0 && theta0_deg < 90.0)) {
    throw DomainError("theta0 must lie strictly inside (-90, 90) degrees");
  }
  if (k_snapshots < 1) throw DomainError("k_snapshots must be >= 1");
  if (!std::isfinite(snr_db)) throw DomainError("snr_db must be finite");
}

double SourceScenario::noise_variance() const { return std::pow(10.0, -snr_db / 10.0); }

SnapshotMatrix::SnapshotMatrix(CMatrix data) : data_(std::move(data)) {
  if (data_.rows() < 1 || data_.cols() < 1) throw DomainError("empty snapshot block");
  if (!data_.allFinite()) throw DomainError("snapshot block contains NaN or Inf");
}

CVector steering_vector(const ArrayGeometry& geometry, double theta_deg) {
  if (!(theta_deg >= -90.0 && theta_deg <= 90.0)) {
    throw DomainError("steering angle must lie in [-90, 90] degrees");
  }
  const double phi = geometry.phase_of(theta_deg);
  CVector a(geometry.n_antennas());
  for (int n = 0; n < geometry.n_antennas(); ++n) a(n) = std::polar(1.0, -phi * n);
  return a;
}

SnapshotMatrix synthesize_snapshots(const ArrayGeometry& geometry, const SourceScenario& scenario,
                                    bool noiseless) {
  scenario.validate();
  const int n = geometry.n_antennas();
  const int k = scenario.k_snapshots;

  std::mt19937_64 rng(scenario.seed);
  std::normal_distribution<double> half_power(0.0, std::sqrt(0.5));

  CVector signal(k);
  for (int t = 0; t < k; ++t) {
    const double re = half_power(rng);
    const double im = half_power(rng);
    signal(t) = Complex(re, im);
  }

  CMatrix data = steering_vector(geometry, scenario.theta0_deg) * signal.transpose();
  if (!noiseless) {
    const double sigma = std::sqrt(scenario.noise_variance());
    for (int t = 0; t < k; ++t) {
      for (int row = 0; row < n; ++row) {
        const double re = half_power(rng);
        const double im = half_power(rng);
        data(row, t) += sigma * Complex(re, im);
      }
    }
  }
  return SnapshotMatrix(std::move(data));
}

namespace {

constexpr std::array<char, 4> kMagic{'D', 'P', 'S', 'M'};

template <typename T>
void put_le(std::ostream& out, T value) {
  static_assert(std::is_trivially_copyable_v<T>);
  std::array<unsigned char, sizeof(T)> bytes;
  std::memcpy(bytes.data(), &value, sizeof(T));
  if constexpr (std::endian::native == std::endian::big) std::reverse(bytes.begin(), bytes.end());
  out.write(reinterpret_cast<const char*>(bytes.data()), bytes.size());
}

template <typename T>
T get_le(std::istream& in) {
  std::array<unsigned char, sizeof(T)> bytes;
  if (!in.read(reinterpret_cast<char*>(bytes.data()), bytes.size())) {
    throw DomainError("truncated snapshot file");
  }
  if constexpr (std::endian::native == std::endian::big) std::reverse(bytes.begin(), bytes.end());
  T value;
  std::memcpy(&value, bytes.data(), sizeof(T));
  return value;
}

}  // namespace

void write_snapshots(std::ostream& out, const SnapshotMatrix& snapshots) {
  out.write(kMagic.data(), kMagic.size());
  put_le<std::uint32_t>(out, static_cast<std::uint32_t>(snapshots.n_antennas()));
  put_le<std::uint32_t>(out, static_cast<std::uint32_t>(snapshots.k_snapshots()));
  const CMatrix& d = snapshots.data();
  for (Eigen::Index col = 0; col < d.cols(); ++col) {
    for (Eigen::Index row = 0; row < d.rows(); ++row) {
      put_le<double>(out, d(row, col).real());
      put_le<double>(out, d(row, col).imag());
    }
  }
  if (!out) throw DomainError("failed to write snapshot data");
}

SnapshotMatrix read_snapshots(std::istream& in) {
  std::array<char, 4> magic{};
  if (!in.read(magic.data(), magic.size()) || magic != kMagic) {
    throw DomainError("not a DPSM snapshot file");
  }
  const auto n = get_le<std::uint32_t>(in);
  const auto k = get_le<std::uint32_t>(in);
  if (n == 0 || k == 0) throw DomainError("snapshot file declares an empty block");
  CMatrix d(n, k);
  for (std::uint32_t col = 0; col < k; ++col) {
    for (std::uint32_t row = 0; row < n; ++row) {
      const double re = get_le<double>(in);
      const double im = get_le<double>(in);
      d(row, col) = Complex(re, im);
    }
  }
  return SnapshotMatrix(std::move(d));
}

void save_snapshots(const std::filesystem::path& path, const SnapshotMatrix& snapshots) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DomainError("cannot open " + path.string() + " for writing");
  write_snapshots(out, snapshots);
}

SnapshotMatrix load_snapshots(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DomainError("cannot open " + path.string());
  return read_snapshots(in);
}

}  // namespace rdoa
