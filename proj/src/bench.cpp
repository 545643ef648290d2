#include "rdoa/bench.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <exception>
#include <random>
#include <thread>

namespace rdoa {
namespace {

// Runs body(i) for i in [0, count) on up to `threads` workers. Each index is
// handled exactly once; callers write into per-index slots so the reduction
// order never depends on scheduling.
template <typename Body>
void for_each_index(int count, unsigned threads, Body&& body) {
  const unsigned workers = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(count)));
  if (workers <= 1) {
    for (int i = 0; i < count; ++i) body(i);
    return;
  }
  std::vector<std::exception_ptr> errors(workers);
  {
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    for (unsigned w = 0; w < workers; ++w) {
      pool.emplace_back([&, w] {
        try {
          for (int i = static_cast<int>(w); i < count; i += static_cast<int>(workers)) body(i);
        } catch (...) {
          errors[w] = std::current_exception();
        }
      });
    }
  }
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

struct TrialOutcome {
  bool ok = false;
  double squared_error = 0.0;
  int pi_iterations = 0;
};

bool needs_stacking(Method m) { return m == Method::RpiRi || m == Method::EspritFd; }

}  // namespace

CrlbValue crlb(const ArrayGeometry& geometry, const SourceScenario& scenario, CrlbOrigin origin) {
  scenario.validate();
  const double cos_theta = std::cos(deg_to_rad(scenario.theta0_deg));
  if (!(std::abs(cos_theta) > 0.0)) throw DomainError("CRLB diverges at endfire");

  Eigen::VectorXd d = geometry.positions();
  if (origin == CrlbOrigin::Centered) d.array() -= d.mean();
  const double sum_d2 = d.squaredNorm();
  const double snr = std::pow(10.0, scenario.snr_db / 10.0);

  // Positions are in wavelengths, so lambda = 1.
  const double variance_rad2 =
      1.0 / (8.0 * kPi * kPi * scenario.k_snapshots * snr * cos_theta * cos_theta * sum_d2);
  const double to_deg = 180.0 / kPi;
  CrlbValue out;
  out.variance_deg2 = variance_rad2 * to_deg * to_deg;
  out.rmse_deg = std::sqrt(out.variance_deg2);
  return out;
}

std::uint64_t derive_trial_seed(std::uint64_t master_seed, std::uint64_t trial) {
  std::seed_seq seq{static_cast<std::uint32_t>(master_seed), static_cast<std::uint32_t>(master_seed >> 32),
                    static_cast<std::uint32_t>(trial), static_cast<std::uint32_t>(trial >> 32)};
  std::uint32_t words[2];
  seq.generate(words, words + 2);
  return (static_cast<std::uint64_t>(words[0]) << 32) | words[1];
}

std::string_view to_string(SweepParameter p) {
  switch (p) {
    case SweepParameter::Snr: return "snr_db";
    case SweepParameter::Antennas: return "n";
    case SweepParameter::Snapshots: return "k";
  }
  return "unknown";
}

void SweepConfig::validate() const {
  if (values.empty()) throw DomainError("sweep needs at least one value");
  if (methods.empty()) throw DomainError("sweep needs at least one method");
  if (trials < 1) throw DomainError("trials must be >= 1");
  if (!(spacing > 0.0)) throw DomainError("spacing must be positive");
  if (!(theta_deg > -90.0 && theta_deg < 90.0)) throw DomainError("theta must lie in (-90, 90)");
  if (!(pi.epsilon > 0.0)) throw DomainError("epsilon must be positive");
  if (pi.max_iterations < 1) throw DomainError("max_iterations must be >= 1");

  const bool stacking = std::any_of(methods.begin(), methods.end(), needs_stacking);
  const auto check_n = [&](double n) {
    if (n != std::floor(n) || n < 2) throw DomainError("antenna count must be an integer >= 2");
    if (stacking && n < 3) throw DomainError("rpi-ri and esprit need N >= 3");
  };
  const auto check_k = [](double k) {
    if (k != std::floor(k) || k < 1) throw DomainError("snapshot count must be an integer >= 1");
  };
  check_n(n_antennas);
  check_k(k_snapshots);
  for (double v : values) {
    if (!std::isfinite(v)) throw DomainError("sweep values must be finite");
    if (parameter == SweepParameter::Antennas) check_n(v);
    if (parameter == SweepParameter::Snapshots) check_k(v);
  }
}

std::vector<RmseReport> rmse_monte_carlo(const SweepConfig& config) {
  config.validate();
  std::vector<RmseReport> reports;
  const auto n_methods = config.methods.size();

  for (double value : config.values) {
    int n = config.n_antennas;
    int k = config.k_snapshots;
    double snr = config.snr_db;
    switch (config.parameter) {
      case SweepParameter::Snr: snr = value; break;
      case SweepParameter::Antennas: n = static_cast<int>(value); break;
      case SweepParameter::Snapshots: k = static_cast<int>(value); break;
    }
    const ArrayGeometry geometry(n, config.spacing);

    std::vector<TrialOutcome> outcomes(static_cast<std::size_t>(config.trials) * n_methods);
    for_each_index(config.trials, config.threads, [&](int trial) {
      const SourceScenario scenario{config.theta_deg, snr, k,
                                    derive_trial_seed(config.master_seed, trial)};
      const HermitianMatrix r =
          sample_covariance(synthesize_snapshots(geometry, scenario, config.noiseless));
      for (std::size_t m = 0; m < n_methods; ++m) {
        TrialOutcome& slot = outcomes[trial * n_methods + m];
        try {
          const DoaEstimate est = estimate_from_covariance(config.methods[m], r, geometry, config.pi);
          const double err = est.theta_deg - config.theta_deg;
          slot = {true, err * err, est.pi_iterations};
        } catch (const EstimationFailure&) {
          slot = {};
        } catch (const NumericError&) {
          slot = {};
        }
      }
    });

    const SourceScenario nominal{config.theta_deg, snr, k, config.master_seed};
    const double crlb_rmse = crlb(geometry, nominal).rmse_deg;
    for (std::size_t m = 0; m < n_methods; ++m) {
      double sum_sq = 0.0;
      double sum_iters = 0.0;
      int successes = 0;
      for (int trial = 0; trial < config.trials; ++trial) {
        const TrialOutcome& o = outcomes[trial * n_methods + m];
        if (!o.ok) continue;
        sum_sq += o.squared_error;
        sum_iters += o.pi_iterations;
        ++successes;
      }
      RmseReport rep;
      rep.method = config.methods[m];
      rep.parameter = config.parameter;
      rep.sweep_value = value;
      rep.n_antennas = n;
      rep.k_snapshots = k;
      rep.snr_db = snr;
      rep.theta_deg = config.theta_deg;
      rep.trials = config.trials;
      rep.failure_count = config.trials - successes;
      if (successes > 0) {
        rep.rmse_deg = std::sqrt(sum_sq / successes);
        rep.mean_pi_iterations = sum_iters / successes;
      }
      rep.crlb_rmse_deg = crlb_rmse;
      reports.push_back(rep);
    }
  }
  return reports;
}

FlopReport flop_model(Method method, int n, int k, int beta, double evd_constant) {
  if (n < 2) throw DomainError("flop model needs N >= 2");
  if (k < 1) throw DomainError("flop model needs K >= 1");
  if (beta < 1) throw DomainError("flop model needs beta >= 1");
  if (!(evd_constant > 0.0)) throw DomainError("EVD flop constant must be positive");

  const std::int64_t nn = n;
  const std::int64_t kk = k;
  const std::int64_t bb = beta;
  FlopReport out{method, n, k, beta, 0.0};
  switch (method) {
    case Method::RpiRi: {
      const std::int64_t m = 2 * nn - 2;
      out.flops = static_cast<double>(bb * m * m + 2 * nn - 3);
      break;
    }
    case Method::RpiPr:
      out.flops = static_cast<double>((bb + 8) * nn * nn + nn * kk * (2 * nn + 3) - 11 * nn + 4);
      break;
    case Method::EspritFd:
    case Method::RootMusicFd: {
      const double m = method == Method::EspritFd ? 2.0 * n - 2.0 : static_cast<double>(n);
      out.flops = m * m * k + evd_constant * m * m * m;
      break;
    }
  }
  return out;
}

void ConvergenceConfig::validate() const {
  if (inits.empty() || thetas_deg.empty() || snrs_db.empty()) {
    throw DomainError("convergence study needs at least one init, angle and SNR");
  }
  if (n_antennas < 2) throw DomainError("antenna count must be >= 2");
  if (k_snapshots < 1) throw DomainError("snapshot count must be >= 1");
  if (trials < 1) throw DomainError("trials must be >= 1");
  if (!(epsilon > 0.0)) throw DomainError("epsilon must be positive");
  if (max_iterations < 1) throw DomainError("max_iterations must be >= 1");
  for (double t : thetas_deg) {
    if (!(t > -90.0 && t < 90.0)) throw DomainError("theta must lie in (-90, 90)");
  }
  for (const auto& spec : inits) {
    if (!std::holds_alternative<init::RowSum>(spec)) make_initial_vector(spec, n_antennas);
  }
}

ConvergenceStudy convergence_study(const ConvergenceConfig& config) {
  config.validate();
  const ArrayGeometry geometry(config.n_antennas, config.spacing);
  ConvergenceStudy study;

  for (const InitialVectorSpec& spec : config.inits) {
    const std::string label = to_string(spec);
    for (double theta : config.thetas_deg) {
      for (double snr : config.snrs_db) {
        std::vector<ConvergenceTrace> traces(static_cast<std::size_t>(config.trials));
        for_each_index(config.trials, config.threads, [&](int trial) {
          const SourceScenario scenario{theta, snr, config.k_snapshots,
                                        derive_trial_seed(config.master_seed, trial)};
          const HermitianMatrix r = sample_covariance(synthesize_snapshots(geometry, scenario));
          InitialVectorSpec start = spec;
          if (const auto* rnd = std::get_if<init::Random>(&spec)) {
            start = init::Random{derive_trial_seed(rnd->seed, trial)};
          }
          const PowerIterationResult pi =
              power_iterate(r, start, config.epsilon, config.max_iterations);

          ConvergenceTrace& t = traces[trial];
          t.init = label;
          t.n_antennas = config.n_antennas;
          t.k_snapshots = config.k_snapshots;
          t.snr_db = snr;
          t.theta_deg = theta;
          t.trial = trial;
          t.iterations = pi.iterations;
          t.converged = pi.converged;
          t.residuals = pi.residual_history;
          double previous = rayleigh_quotient(r, make_initial_vector(start, r));
          for (double rho : pi.eigenvalue_history) {
            t.alphas.push_back(std::abs(rho - previous));
            previous = rho;
          }
        });

        ConvergenceCell cell{label, snr, theta, 0.0, 0};
        for (const ConvergenceTrace& t : traces) {
          cell.mean_iterations += t.iterations;
          if (!t.converged) ++cell.non_converged;
        }
        cell.mean_iterations /= config.trials;
        study.cells.push_back(cell);
        for (auto& t : traces) study.traces.push_back(std::move(t));
      }
    }
  }
  return study;
}

}  // namespace rdoa
