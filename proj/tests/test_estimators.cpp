#include "oracles.hpp"
#include "rdoa/errors.hpp"
#include "rdoa/estimators.hpp"
#include "rdoa/polynomial.hpp"

#include <gtest/gtest.h>

#include <algorithm>

using namespace rdoa;

namespace {

constexpr Method kAll[] = {Method::RpiRi, Method::RpiPr, Method::EspritFd, Method::RootMusicFd};

SnapshotMatrix noiseless(int n, int k, double theta, std::uint64_t seed = 1) {
  return synthesize_snapshots(ArrayGeometry(n), {theta, 0.0, k, seed}, true);
}

// Phase between adjacent elements read straight off the steering vector.
double oracle_angle(int n, double theta) {
  const oracle::Vec a = oracle::steering(n, 0.5, theta);
  const double phi = -std::arg(a(1) / a(0));
  return std::asin(phi / oracle::pi) * 180.0 / oracle::pi;
}

}  // namespace

TEST(Method, NamesRoundTrip) {
  for (Method m : kAll) EXPECT_EQ(parse_method(to_string(m)), m);
  EXPECT_THROW(parse_method("music"), DomainError);
}

TEST(StackSubarrays, ThreeElementColumn) {
  CMatrix y(3, 1);
  y << 1.0, 2.0, 3.0;
  const StackedData s = stack_subarrays(SnapshotMatrix(y));
  ASSERT_EQ(s.data().rows(), 4);
  EXPECT_EQ(s.data()(0, 0), Complex(1.0));
  EXPECT_EQ(s.data()(1, 0), Complex(2.0));
  EXPECT_EQ(s.data()(2, 0), Complex(2.0));
  EXPECT_EQ(s.data()(3, 0), Complex(3.0));
  EXPECT_EQ(s.subarray_size(), 2);
}

TEST(StackSubarrays, ShiftInvarianceOnNoiselessData) {
  const SnapshotMatrix y = noiseless(8, 10, 50.0);
  const StackedData s = stack_subarrays(y);
  const Complex shift = std::polar(1.0, -ArrayGeometry(8).phase_of(50.0));
  EXPECT_LE((s.data().bottomRows(7) - shift * s.data().topRows(7)).cwiseAbs().maxCoeff(), 1e-12);
}

TEST(StackSubarrays, RejectsTwoElements) {
  EXPECT_THROW(stack_subarrays(noiseless(2, 4, 10.0)), DomainError);
  EXPECT_THROW(esprit_fd_estimate(noiseless(2, 4, 10.0), ArrayGeometry(2)), DomainError);
  EXPECT_THROW(rpi_ri_estimate(noiseless(2, 4, 10.0), ArrayGeometry(2), init::RowSum{}), DomainError);
}

TEST(StackedCovariance, EqualsCovarianceOfStackedData) {
  const SnapshotMatrix y = synthesize_snapshots(ArrayGeometry(9), {-20.0, 3.0, 50, 6});
  const HermitianMatrix direct = sample_covariance(stack_subarrays(y).data());
  const HermitianMatrix gathered = stacked_covariance(sample_covariance(y));
  EXPECT_LE((direct.data() - gathered.data()).norm(), 1e-12 * direct.data().norm());
}

TEST(Estimators, NoiselessFiftyDegrees) {
  const SnapshotMatrix y = noiseless(8, 64, 50.0);
  const ArrayGeometry g(8);
  const double want = oracle_angle(8, 50.0);
  EXPECT_NEAR(want, 50.0, 1e-12);
  EXPECT_NEAR(rpi_ri_estimate(y, g, init::RowSum{}).theta_deg, want, 1e-6);
  EXPECT_NEAR(rpi_pr_estimate(y, g, init::RowSum{}).theta_deg, want, 1e-6);
  EXPECT_NEAR(esprit_fd_estimate(y, g).theta_deg, want, 1e-6);
  EXPECT_NEAR(root_music_fd_estimate(y, g).theta_deg, want, 1e-6);
}

TEST(Estimators, NoiselessBroadside) {
  const SnapshotMatrix y = noiseless(8, 16, 0.0);
  const ArrayGeometry g(8);
  EXPECT_NEAR(rpi_ri_estimate(y, g, init::RowSum{}).theta_deg, 0.0, 1e-9);
  EXPECT_NEAR(esprit_fd_estimate(y, g).theta_deg, 0.0, 1e-9);
  const DoaEstimate pr = rpi_pr_estimate(y, g, init::RowSum{});
  EXPECT_NEAR(pr.theta_deg, 0.0, 1e-6);
  EXPECT_NEAR(root_music_fd_estimate(y, g).theta_deg, 0.0, 1e-6);
  EXPECT_NEAR(pr.phase, 0.0, 1e-7);
}

TEST(Estimators, RoundTripGrid) {
  const ArrayGeometry g(16);
  for (double theta = -80.0; theta <= 80.0; theta += 20.0) {
    const SnapshotMatrix y = noiseless(16, 32, theta);
    for (Method m : kAll) {
      const DoaEstimate est = estimate(m, y, g);
      EXPECT_NEAR(est.theta_deg, theta, 1e-5) << to_string(m) << " " << theta;
      EXPECT_EQ(est.method, m);
    }
  }
}

TEST(Estimators, DiagnosticsInvariants) {
  const ArrayGeometry g(12);
  const SnapshotMatrix y = synthesize_snapshots(g, {30.0, 5.0, 200, 3});
  for (Method m : kAll) {
    const DoaEstimate est = estimate(m, y, g);
    EXPECT_NEAR(est.theta_deg, std::asin(est.phase / kPi) * 180.0 / kPi, 1e-10);
    const bool rooting = m == Method::RpiPr || m == Method::RootMusicFd;
    const bool pi = m == Method::RpiRi || m == Method::RpiPr;
    EXPECT_EQ(est.candidate_angles.empty(), !rooting);
    EXPECT_LE(est.candidate_angles.size(), 22u);
    EXPECT_EQ(est.pi_iterations > 0, pi);
  }
}

TEST(Estimators, ScalingSnapshotsChangesNothing) {
  const ArrayGeometry g(10);
  const SnapshotMatrix y = synthesize_snapshots(g, {-35.0, 0.0, 100, 21});
  const SnapshotMatrix scaled(y.data() * Complex(-3.0, 4.5));
  for (Method m : kAll) {
    EXPECT_NEAR(estimate(m, y, g).theta_deg, estimate(m, scaled, g).theta_deg, 1e-8) << to_string(m);
  }
}

TEST(Estimators, RpiMatchesFullEvdAtHighSnr) {
  const ArrayGeometry g(16);
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    const SnapshotMatrix y = synthesize_snapshots(g, {50.0, 20.0, 200, seed});
    const PiSettings tight{init::RowSum{}, 1e-10, 500};
    EXPECT_NEAR(estimate(Method::RpiRi, y, g, tight).theta_deg,
                esprit_fd_estimate(y, g).theta_deg, 1e-4);
    EXPECT_NEAR(estimate(Method::RpiPr, y, g, tight).theta_deg,
                root_music_fd_estimate(y, g).theta_deg, 0.05);
  }
}

TEST(Estimators, RpiPrAgreesWithRootMusicAtZeroDb) {
  const ArrayGeometry g(32);
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    const SnapshotMatrix y = synthesize_snapshots(g, {50.0, 0.0, 500, seed});
    EXPECT_NEAR(rpi_pr_estimate(y, g, init::RowSum{}).theta_deg,
                root_music_fd_estimate(y, g).theta_deg, 0.05);
  }
}

TEST(Estimators, NearSignalStartWorksForStackedCovariance) {
  const ArrayGeometry g(16);
  const SnapshotMatrix y = noiseless(16, 32, 25.0);
  const DoaEstimate est = rpi_ri_estimate(y, g, init::NearSignal{25.0});
  EXPECT_NEAR(est.theta_deg, 25.0, 1e-6);
  EXPECT_EQ(est.pi_iterations, 1);
}

TEST(Estimators, PiFailureBecomesEstimationFailure) {
  const ArrayGeometry g(16);
  const SnapshotMatrix y = synthesize_snapshots(g, {50.0, -20.0, 50, 1});
  try {
    estimate(Method::RpiPr, y, g, PiSettings{init::Random{1}, 1e-12, 2});
    FAIL() << "expected EstimationFailure";
  } catch (const EstimationFailure& e) {
    EXPECT_FALSE(e.diagnostics.pi_converged);
    EXPECT_EQ(e.diagnostics.pi_iterations, 2);
  }
}

TEST(Estimators, DimensionMismatch) {
  const SnapshotMatrix y = noiseless(8, 4, 10.0);
  EXPECT_THROW(esprit_fd_estimate(y, ArrayGeometry(9)), DomainError);
  EXPECT_THROW(rpi_pr_from_covariance(sample_covariance(y), ArrayGeometry(7)), DomainError);
}

TEST(PhaseToAngle, DomainCheck) {
  EXPECT_NEAR(phase_to_angle(kPi / 2.0, 0.5), 30.0, 1e-12);
  EXPECT_NEAR(phase_to_angle(-kPi, 0.5), -90.0, 1e-12);
  try {
    phase_to_angle(2.0, 0.25);
    FAIL() << "expected EstimationFailure";
  } catch (const EstimationFailure& e) {
    ASSERT_TRUE(e.diagnostics.phase.has_value());
    EXPECT_DOUBLE_EQ(*e.diagnostics.phase, 2.0);
  }
}

TEST(RotationalPhase, ReadsScalarRatio) {
  CVector u(6);
  const Complex w = std::polar(1.0, -0.7);
  u << 1.0, Complex(0.3, 0.2), -0.5, w * 1.0, w * Complex(0.3, 0.2), w * -0.5;
  EXPECT_NEAR(rotational_phase(u), 0.7, 1e-14);
  EXPECT_THROW(rotational_phase(CVector::Ones(5)), DomainError);
}

TEST(SelectMusicRoot, LargestInsideWithTieBreak) {
  EXPECT_FALSE(select_music_root({Complex(2, 0), Complex(0, 1.5)}).has_value());
  const auto a = select_music_root({Complex(0.5, 0), Complex(0, 0.9), Complex(1.2, 0)});
  ASSERT_TRUE(a);
  EXPECT_EQ(*a, Complex(0, 0.9));
  const auto tie = select_music_root({std::polar(0.8, 1.0), std::polar(0.8, -0.2), std::polar(0.8, 0.5)});
  ASSERT_TRUE(tie);
  EXPECT_NEAR(std::arg(*tie), -0.2, 1e-15);
  const auto edge = select_music_root({std::polar(1.0 + 1e-12, 0.3), Complex(0.5, 0)});
  ASSERT_TRUE(edge);
  EXPECT_NEAR(std::arg(*edge), 0.3, 1e-15);
}

TEST(NoiseProjector, Properties) {
  std::mt19937_64 rng(31);
  for (int t = 0; t < 20; ++t) {
    const int n = 2 + t;
    const CVector u = oracle::random_vector(n, rng);
    const CMatrix p = noise_projector(u);
    EXPECT_LE((p - p.adjoint()).norm(), 1e-12);
    EXPECT_LE((p * p - p).norm(), 1e-10);
    EXPECT_LE((p * u).norm(), 1e-10 * u.norm());
    EXPECT_NEAR(p.trace().real(), n - 1.0, 1e-8);
  }
  EXPECT_THROW(noise_projector(CVector::Zero(3)), DomainError);
}

TEST(NoiseProjector, MatchesFullEvdProjectorOnRankOne) {
  const SnapshotMatrix y = noiseless(10, 20, 33.0);
  const HermitianMatrix r = sample_covariance(y);
  const EvdResult evd = hermitian_evd(r);
  const auto minor = evd.eigenvectors.rightCols(9);
  const CMatrix from_evd = minor * minor.adjoint();
  const CMatrix from_pi = noise_projector(power_iterate(r, init::RowSum{}).dominant_eigenvector);
  EXPECT_LE((from_evd - from_pi).norm(), 1e-10);
}

TEST(MusicPolynomial, DiagonalSumsAndSymmetry) {
  CMatrix p(2, 2);
  p << 1.0, Complex(2, 1), Complex(2, -1), 3.0;
  const std::vector<Complex> c = music_polynomial(p);
  ASSERT_EQ(c.size(), 3u);
  EXPECT_EQ(c[0], Complex(2, -1));
  EXPECT_EQ(c[1], Complex(4.0));
  EXPECT_EQ(c[2], Complex(2, 1));

  // Hermitian projector => c_{2N-2-k} = conj(c_k), so roots pair as z, 1/conj(z).
  const SnapshotMatrix y = synthesize_snapshots(ArrayGeometry(12), {10.0, 0.0, 100, 2});
  const CMatrix proj = noise_projector(power_iterate(sample_covariance(y), init::RowSum{}).dominant_eigenvector);
  const std::vector<Complex> mc = music_polynomial(proj);
  for (std::size_t k = 0; k < mc.size(); ++k) {
    EXPECT_LE(std::abs(mc[mc.size() - 1 - k] - std::conj(mc[k])), 1e-13);
  }
  for (Complex z : polynomial_roots(mc).roots) {
    const Complex mirror = 1.0 / std::conj(z);
    double best = 1e300;
    for (Complex w : polynomial_roots(mc).roots) best = std::min(best, std::abs(w - mirror));
    EXPECT_LE(best, 1e-6 * std::max(1.0, std::abs(mirror)));
  }
}

TEST(MusicPolynomial, NaivePolynomialProductOracle) {
  // z^(N-1) a^T(1/z) P a(z) with a_n(z) = z^n, expanded term by term.
  std::mt19937_64 rng(17);
  const int n = 6;
  const CMatrix p = noise_projector(oracle::random_vector(n, rng));
  const std::vector<Complex> c = music_polynomial(p);
  const Complex z(0.7, -0.4);
  Complex direct = 0.0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) direct += std::pow(z, static_cast<double>(n - 1 - i + j)) * p(i, j);
  EXPECT_LE(std::abs(oracle::poly_eval(c, z) - direct), 1e-12);
}
