#pragma once

#include "rdoa/estimators.hpp"

#include <optional>
#include <string>
#include <vector>

namespace rdoa {

struct CrlbValue {
  double variance_deg2 = 0.0;
  double rmse_deg = 0.0;
};

enum class CrlbOrigin {
  Centered,     ///< positions shifted to zero mean before summing d_m^2
  FirstElement  ///< positions measured from the first element
};

/// lambda^2 / (8 pi^2 K SNR cos^2(theta) sum_m d_m^2), reported in degrees^2.
CrlbValue crlb(const ArrayGeometry& geometry, const SourceScenario& scenario,
               CrlbOrigin origin = CrlbOrigin::Centered);

/// Per-trial scenario seed. Depends only on the master seed and trial index, so
/// every sweep point and every method sees the same random draws for trial l.
std::uint64_t derive_trial_seed(std::uint64_t master_seed, std::uint64_t trial);

enum class SweepParameter { Snr, Antennas, Snapshots };

std::string_view to_string(SweepParameter p);

struct SweepConfig {
  SweepParameter parameter = SweepParameter::Snr;
  std::vector<double> values;
  std::vector<Method> methods{Method::RpiRi, Method::RpiPr, Method::EspritFd,
                              Method::RootMusicFd};
  int n_antennas = 64;
  int k_snapshots = 1000;
  double snr_db = 0.0;
  double theta_deg = 50.0;
  double spacing = 0.5;
  int trials = 200;
  std::uint64_t master_seed = 1;
  PiSettings pi;
  bool noiseless = false;
  unsigned threads = 1;

  void validate() const;
};

struct RmseReport {
  Method method = Method::RpiPr;
  SweepParameter parameter = SweepParameter::Snr;
  double sweep_value = 0.0;
  int n_antennas = 0;
  int k_snapshots = 0;
  double snr_db = 0.0;
  double theta_deg = 0.0;
  int trials = 0;
  int failure_count = 0;
  std::optional<double> rmse_deg;  // empty when every trial failed
  double crlb_rmse_deg = 0.0;
  double mean_pi_iterations = 0.0;
};

/// Reports ordered by sweep point, then by method in config order.
std::vector<RmseReport> rmse_monte_carlo(const SweepConfig& config);

struct FlopReport {
  Method method = Method::RpiPr;
  int n_antennas = 0;
  int k_snapshots = 0;
  int beta = 0;
  double flops = 0.0;
};

inline constexpr double kDefaultEvdFlopConstant = 21.0;

/// Closed-form operation counts. The proposed methods use
///   RPI-RI: beta (2N-2)^2 + 2N - 3
///   RPI-PR: (beta + 8) N^2 + N K (2N + 3) - 11N + 4
/// and the full-EVD baselines are modelled as M^2 K + c M^3 with M = 2N - 2
/// (ESPRIT) or M = N (Root-MUSIC).
FlopReport flop_model(Method method, int n, int k, int beta,
                      double evd_constant = kDefaultEvdFlopConstant);

struct ConvergenceConfig {
  std::vector<InitialVectorSpec> inits{init::RowSum{}};
  std::vector<double> thetas_deg{50.0};
  std::vector<double> snrs_db{0.0};
  int n_antennas = 64;
  int k_snapshots = 1000;
  double spacing = 0.5;
  int trials = 50;
  std::uint64_t master_seed = 1;
  double epsilon = kDefaultEpsilon;
  int max_iterations = kDefaultMaxIterations;
  unsigned threads = 1;

  void validate() const;
};

struct ConvergenceTrace {
  std::string init;
  int n_antennas = 0;
  int k_snapshots = 0;
  double snr_db = 0.0;
  double theta_deg = 0.0;
  int trial = 0;
  int iterations = 0;
  bool converged = false;
  std::vector<double> residuals;
  /// alpha_n = |C_n - C_{n-1}| where C_n is the eigenvalue estimate at iterate
  /// n; alpha_1 is measured against the Rayleigh quotient of the start vector.
  std::vector<double> alphas;
};

struct ConvergenceCell {
  std::string init;
  double snr_db = 0.0;
  double theta_deg = 0.0;
  double mean_iterations = 0.0;
  int non_converged = 0;
};

struct ConvergenceStudy {
  std::vector<ConvergenceTrace> traces;  // init, theta, snr, trial order
  std::vector<ConvergenceCell> cells;
};

/// Runs power_iterate on the N x N sample covariance of freshly synthesized
/// data for every (init, theta, snr) cell. Random starts get a per-trial seed.
ConvergenceStudy convergence_study(const ConvergenceConfig& config);

}  // namespace rdoa
