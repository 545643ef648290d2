#include "rdoa/cli.hpp"

#include "rdoa/bench.hpp"
#include "rdoa/csv.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <memory>
#include <optional>

namespace rdoa::cli {
namespace {

struct PiOptions {
  std::string init = "rowsum";
  double epsilon = kDefaultEpsilon;
  int max_iterations = kDefaultMaxIterations;

  PiSettings settings() const { return {parse_initial_vector(init), epsilon, max_iterations}; }
};

struct Options {
  int n = 64;
  int k = 1000;
  double snr_db = 0.0;
  double theta_deg = 50.0;
  double spacing = 0.5;
  std::uint64_t seed = 1;
  int trials = 200;
  unsigned threads = 1;
  bool noiseless = false;
  PiOptions pi;
  std::string output;

  // estimate
  std::string method = "rpi-pr";
  std::string input;
  std::string dump;

  // sweeps
  std::vector<std::string> methods{"rpi-ri", "rpi-pr", "esprit", "root-music"};
  double snr_from = -10.0, snr_to = 10.0, snr_step = 2.0;
  int n_from = 16, n_to = 272, n_step = 64;
  int k_from = 100, k_to = 3600, k_step = 700;

  // convergence
  std::vector<std::string> inits{"rowsum", "random:1", "near:50"};
  std::vector<double> thetas{50.0};
  std::vector<double> snrs{0.0};

  // flops
  bool geometric = false;
  int beta = 5;
  double evd_constant = kDefaultEvdFlopConstant;

  // crlb
  std::string origin = "centered";
};

void add_array_options(CLI::App* sub, Options& o) {
  sub->add_option("--n", o.n, "Number of antennas")->check(CLI::Range(2, 1 << 20));
  sub->add_option("--k", o.k, "Number of snapshots")->check(CLI::Range(1, 1 << 30));
  sub->add_option("--snr-db", o.snr_db, "Per-antenna SNR in dB");
  sub->add_option("--theta-deg", o.theta_deg, "Source direction in degrees")
      ->check(CLI::Range(-90.0, 90.0));
  sub->add_option("--spacing", o.spacing, "Element spacing in wavelengths")
      ->check(CLI::PositiveNumber);
}

void add_pi_options(CLI::App* sub, Options& o) {
  sub->add_option("--init", o.pi.init, "Power-iteration start vector (rowsum, near:50, random:7, ...)");
  sub->add_option("--epsilon", o.pi.epsilon, "Power-iteration tolerance")->check(CLI::PositiveNumber);
  sub->add_option("--max-iterations", o.pi.max_iterations, "Power-iteration cap")
      ->check(CLI::Range(1, 1 << 24));
}

void add_mc_options(CLI::App* sub, Options& o) {
  sub->add_option("--seed", o.seed, "Master seed");
  sub->add_option("--trials", o.trials, "Monte-Carlo trials per point")->check(CLI::Range(1, 1 << 24));
  sub->add_option("--threads", o.threads, "Worker threads")->check(CLI::Range(1u, 1024u));
  sub->add_option("--output", o.output, "CSV output path (default: stdout)");
}

std::vector<double> linear_grid(double from, double to, double step, const char* field) {
  if (!(step > 0.0)) throw DomainError(std::string(field) + ": step must be positive");
  if (to < from) throw DomainError(std::string(field) + ": range end is below its start");
  const auto count = static_cast<long>(std::floor((to - from) / step + 1e-9)) + 1;
  std::vector<double> values;
  for (long i = 0; i < count; ++i) values.push_back(from + static_cast<double>(i) * step);
  return values;
}

std::vector<Method> parse_methods(const std::vector<std::string>& names) {
  std::vector<Method> out;
  for (const auto& name : names) out.push_back(parse_method(name));
  if (out.empty()) throw DomainError("--methods: at least one method is required");
  return out;
}

void write_sweep(std::ostream& out, const std::vector<RmseReport>& reports) {
  out << "method,sweep_name,sweep_value,n,k,snr_db,theta_deg,trials,failures,rmse_deg,"
         "crlb_rmse_deg,mean_pi_iters\n";
  csv::RowWriter row(out);
  for (const auto& r : reports) {
    row.field(to_string(r.method))
        .field(to_string(r.parameter))
        .field(r.sweep_value)
        .field(r.n_antennas)
        .field(r.k_snapshots)
        .field(r.snr_db)
        .field(r.theta_deg)
        .field(r.trials)
        .field(r.failure_count)
        .field(r.rmse_deg)
        .field(r.crlb_rmse_deg)
        .field(r.mean_pi_iterations)
        .end();
  }
}

void run_estimate(const Options& o, std::ostream& out) {
  const PiSettings pi = o.pi.settings();
  const Method method = parse_method(o.method);

  std::optional<SnapshotMatrix> snapshots;
  if (!o.input.empty()) {
    snapshots = load_snapshots(o.input);
  } else {
    const SourceScenario scenario{o.theta_deg, o.snr_db, o.k, o.seed};
    scenario.validate();
    snapshots = synthesize_snapshots(ArrayGeometry(o.n, o.spacing), scenario, o.noiseless);
  }
  if (!o.dump.empty()) save_snapshots(o.dump, *snapshots);

  const ArrayGeometry geometry(snapshots->n_antennas(), o.spacing);
  const DoaEstimate est = estimate(method, *snapshots, geometry, pi);

  out << "method,n,k,snr_db,theta_true_deg,theta_hat_deg,pi_iterations,phase\n";
  csv::RowWriter(out)
      .field(to_string(method))
      .field(snapshots->n_antennas())
      .field(snapshots->k_snapshots())
      .field(o.snr_db)
      .field(o.theta_deg)
      .field(est.theta_deg)
      .field(est.pi_iterations)
      .field(est.phase)
      .end();
}

SweepConfig sweep_base(const Options& o) {
  SweepConfig c;
  c.methods = parse_methods(o.methods);
  c.n_antennas = o.n;
  c.k_snapshots = o.k;
  c.snr_db = o.snr_db;
  c.theta_deg = o.theta_deg;
  c.spacing = o.spacing;
  c.trials = o.trials;
  c.master_seed = o.seed;
  c.pi = o.pi.settings();
  c.noiseless = o.noiseless;
  c.threads = o.threads;
  return c;
}

void run_sweep(const Options& o, SweepParameter parameter, std::ostream& out) {
  SweepConfig c = sweep_base(o);
  c.parameter = parameter;
  switch (parameter) {
    case SweepParameter::Snr: c.values = linear_grid(o.snr_from, o.snr_to, o.snr_step, "--snr-*"); break;
    case SweepParameter::Antennas: c.values = linear_grid(o.n_from, o.n_to, o.n_step, "--n-*"); break;
    case SweepParameter::Snapshots: c.values = linear_grid(o.k_from, o.k_to, o.k_step, "--k-*"); break;
  }
  write_sweep(out, rmse_monte_carlo(c));
}

void run_convergence(const Options& o, std::ostream& out) {
  ConvergenceConfig c;
  c.inits.clear();
  for (const auto& text : o.inits) c.inits.push_back(parse_initial_vector(text));
  c.thetas_deg = o.thetas;
  c.snrs_db = o.snrs;
  c.n_antennas = o.n;
  c.k_snapshots = o.k;
  c.spacing = o.spacing;
  c.trials = o.trials;
  c.master_seed = o.seed;
  c.epsilon = o.pi.epsilon;
  c.max_iterations = o.pi.max_iterations;
  c.threads = o.threads;
  const ConvergenceStudy study = convergence_study(c);

  out << "init,n,k,snr_db,theta_deg,trial,iteration,residual,converged\n";
  csv::RowWriter row(out);
  for (const auto& t : study.traces) {
    for (std::size_t i = 0; i < t.residuals.size(); ++i) {
      row.field(t.init)
          .field(t.n_antennas)
          .field(t.k_snapshots)
          .field(t.snr_db)
          .field(t.theta_deg)
          .field(t.trial)
          .field(static_cast<int>(i + 1))
          .field(t.residuals[i])
          .field(t.converged ? 1 : 0)
          .end();
    }
  }
}

void run_flops(const Options& o, std::ostream& out) {
  const std::vector<Method> methods = parse_methods(o.methods);
  if (o.n_from < 2 || o.n_to < o.n_from) throw DomainError("--n-from/--n-to: need 2 <= from <= to");
  std::vector<int> ns;
  if (o.geometric) {
    for (long n = o.n_from; n <= o.n_to; n *= 2) ns.push_back(static_cast<int>(n));
  } else {
    if (o.n_step < 1) throw DomainError("--n-step: must be >= 1");
    for (int n = o.n_from; n <= o.n_to; n += o.n_step) ns.push_back(n);
  }
  out << "method,n,k,beta,flops\n";
  csv::RowWriter row(out);
  for (int n : ns) {
    for (Method m : methods) {
      const FlopReport f = flop_model(m, n, o.k, o.beta, o.evd_constant);
      row.field(to_string(m)).field(f.n_antennas).field(f.k_snapshots).field(f.beta).field(f.flops).end();
    }
  }
}

void run_crlb(const Options& o, std::ostream& out) {
  CrlbOrigin origin;
  if (o.origin == "centered") {
    origin = CrlbOrigin::Centered;
  } else if (o.origin == "first") {
    origin = CrlbOrigin::FirstElement;
  } else {
    throw DomainError("--origin: expected 'centered' or 'first'");
  }
  const SourceScenario scenario{o.theta_deg, o.snr_db, o.k, o.seed};
  const CrlbValue v = crlb(ArrayGeometry(o.n, o.spacing), scenario, origin);
  out << "n,k,snr_db,theta_deg,spacing,origin,variance_deg2,rmse_deg\n";
  csv::RowWriter(out)
      .field(o.n)
      .field(o.k)
      .field(o.snr_db)
      .field(o.theta_deg)
      .field(o.spacing)
      .field(o.origin)
      .field(v.variance_deg2)
      .field(v.rmse_deg)
      .end();
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  Options o;
  CLI::App app{"Power-iteration DOA estimation toolkit"};
  app.require_subcommand(1);

  auto* estimate_cmd = app.add_subcommand("estimate", "Single-shot DOA estimate");
  add_array_options(estimate_cmd, o);
  add_pi_options(estimate_cmd, o);
  estimate_cmd->add_option("--method", o.method, "rpi-ri, rpi-pr, esprit or root-music");
  estimate_cmd->add_option("--seed", o.seed, "Scenario seed");
  estimate_cmd->add_option("--input", o.input, "Read snapshots from a DPSM file")->check(CLI::ExistingFile);
  estimate_cmd->add_option("--dump", o.dump, "Write the snapshots used to a DPSM file");
  estimate_cmd->add_flag("--noiseless", o.noiseless, "Synthesize without noise");
  estimate_cmd->add_option("--output", o.output, "CSV output path (default: stdout)");

  auto add_sweep = [&](const char* name, const char* help) {
    auto* sub = app.add_subcommand(name, help);
    add_array_options(sub, o);
    add_pi_options(sub, o);
    add_mc_options(sub, o);
    sub->add_option("--methods", o.methods, "Comma-separated method list")->delimiter(',');
    sub->add_flag("--noiseless", o.noiseless, "Synthesize without noise");
    return sub;
  };
  auto* sweep_snr = add_sweep("sweep-snr", "RMSE versus SNR");
  sweep_snr->add_option("--snr-from", o.snr_from);
  sweep_snr->add_option("--snr-to", o.snr_to);
  sweep_snr->add_option("--snr-step", o.snr_step)->check(CLI::PositiveNumber);
  auto* sweep_n = add_sweep("sweep-n", "RMSE versus number of antennas");
  sweep_n->add_option("--n-from", o.n_from)->check(CLI::Range(2, 1 << 20));
  sweep_n->add_option("--n-to", o.n_to)->check(CLI::Range(2, 1 << 20));
  sweep_n->add_option("--n-step", o.n_step)->check(CLI::Range(1, 1 << 20));
  auto* sweep_k = add_sweep("sweep-k", "RMSE versus number of snapshots");
  sweep_k->add_option("--k-from", o.k_from)->check(CLI::Range(1, 1 << 30));
  sweep_k->add_option("--k-to", o.k_to)->check(CLI::Range(1, 1 << 30));
  sweep_k->add_option("--k-step", o.k_step)->check(CLI::Range(1, 1 << 30));

  auto* conv = app.add_subcommand("convergence", "Power-iteration residual histories");
  add_array_options(conv, o);
  add_pi_options(conv, o);
  add_mc_options(conv, o);
  conv->add_option("--inits", o.inits, "Comma-separated start vectors")->delimiter(',');
  conv->add_option("--thetas", o.thetas, "Comma-separated source angles")->delimiter(',');
  conv->add_option("--snrs", o.snrs, "Comma-separated SNRs in dB")->delimiter(',');

  auto* flops = app.add_subcommand("flops", "Closed-form complexity model");
  flops->add_option("--methods", o.methods, "Comma-separated method list")->delimiter(',');
  flops->add_option("--n-from", o.n_from)->check(CLI::Range(2, 1 << 24));
  flops->add_option("--n-to", o.n_to)->check(CLI::Range(2, 1 << 24));
  flops->add_option("--n-step", o.n_step)->check(CLI::Range(1, 1 << 24));
  flops->add_flag("--geometric", o.geometric, "Double N at each step");
  flops->add_option("--k", o.k)->check(CLI::Range(1, 1 << 30));
  flops->add_option("--beta", o.beta, "Power-iteration count")->check(CLI::Range(1, 1 << 20));
  flops->add_option("--evd-constant", o.evd_constant, "Cubic EVD cost constant")->check(CLI::PositiveNumber);
  flops->add_option("--output", o.output, "CSV output path (default: stdout)");

  auto* crlb_cmd = app.add_subcommand("crlb", "Cramer-Rao bound for one scenario");
  add_array_options(crlb_cmd, o);
  crlb_cmd->add_option("--origin", o.origin, "centered or first");
  crlb_cmd->add_option("--output", o.output, "CSV output path (default: stdout)");

  // Defaults mirror the sweep defaults; 50 trials is enough for the convergence tables.
  conv->preparse_callback([&](std::size_t) { o.trials = 50; });

  std::vector<const char*> argv{"rdoa"};
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kExitConfigError;
  }

  CLI::App* sub = app.get_subcommands().front();
  const std::string name = sub->get_name();
  try {
    std::unique_ptr<std::ofstream> file;
    std::filesystem::path path = o.output;
    if (path.empty()) {
      if (const char* dir = std::getenv(kOutputDirEnv); dir != nullptr && *dir != '\0') {
        path = std::filesystem::path(dir) / (name + ".csv");
      }
    }
    if (!path.empty()) {
      file = std::make_unique<std::ofstream>(path, std::ios::binary);
      if (!*file) throw DomainError("--output: cannot open " + path.string());
    }
    std::ostream& sink = file ? *file : out;

    if (name == "estimate") run_estimate(o, sink);
    else if (name == "sweep-snr") run_sweep(o, SweepParameter::Snr, sink);
    else if (name == "sweep-n") run_sweep(o, SweepParameter::Antennas, sink);
    else if (name == "sweep-k") run_sweep(o, SweepParameter::Snapshots, sink);
    else if (name == "convergence") run_convergence(o, sink);
    else if (name == "flops") run_flops(o, sink);
    else run_crlb(o, sink);

    sink.flush();
    if (!sink) throw DomainError("failed writing CSV output");
  } catch (const DomainError& e) {
    err << "error: " << e.what() << '\n';
    return kExitConfigError;
  } catch (const EstimationFailure& e) {
    err << "estimation failed: " << e.what() << '\n';
    return kExitNumericError;
  } catch (const NumericError& e) {
    err << "numeric error: " << e.what() << '\n';
    return kExitNumericError;
  }
  return kExitOk;
}

}  // namespace rdoa::cli
