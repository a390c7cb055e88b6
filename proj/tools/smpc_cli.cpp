// SPDX-License-Identifier: Apache-2.0
// Command-line front end. Talks to the library only through the C API.

#include <algorithm>
#include <csignal>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "smpc/smpc.h"

namespace {

enum Exit : int { kSuccess = 0, kUsage = 1, kRuntime = 2, kPartial = 3 };

// Carries an exit code out of nested helpers.
struct Failure {
  int code;
  std::string message;
};

int exit_for(smpc_status s) {
  switch (s) {
    case SMPC_OK: return kSuccess;
    case SMPC_ERR_INVALID_ARGUMENT:
    case SMPC_ERR_SHAPE:
    case SMPC_ERR_SPARSITY:
    case SMPC_ERR_DOMAIN:
    case SMPC_ERR_TOO_LARGE:
    case SMPC_ERR_PARSE: return kUsage;
    default: return kRuntime;
  }
}

void check(smpc_status s, const std::string& what) {
  if (s != SMPC_OK) {
    throw Failure{exit_for(s), what + ": " + smpc_status_name(s) + ": " + smpc_last_error()};
  }
}

struct MatrixDeleter {
  void operator()(smpc_matrix* m) const { smpc_matrix_destroy(m); }
};
struct ChannelDeleter {
  void operator()(smpc_channel* c) const { smpc_channel_destroy(c); }
};
struct EstimateDeleter {
  void operator()(smpc_estimate* e) const { smpc_estimate_destroy(e); }
};
struct ConfigDeleter {
  void operator()(smpc_bench_config* c) const { smpc_bench_config_destroy(c); }
};
struct ResultDeleter {
  void operator()(smpc_bench_result* r) const { smpc_bench_result_destroy(r); }
};
using MatrixPtr = std::unique_ptr<smpc_matrix, MatrixDeleter>;
using ChannelPtr = std::unique_ptr<smpc_channel, ChannelDeleter>;
using EstimatePtr = std::unique_ptr<smpc_estimate, EstimateDeleter>;
using ConfigPtr = std::unique_ptr<smpc_bench_config, ConfigDeleter>;
using ResultPtr = std::unique_ptr<smpc_bench_result, ResultDeleter>;

std::string real(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

std::string support_text(const size_t* s, size_t k) {
  std::string out = "{";
  for (size_t i = 0; i < k; ++i) out += (i ? "," : "") + std::to_string(s[i]);
  return out + "}";
}

// Synthetic-instance flags shared by estimate and diagnose.
struct Synth {
  size_t length = 50;
  size_t sparsity = 5;
  size_t n = 35;
  uint64_t seed = 1;
  double amp_low = 0.2;
  double amp_high = 1.0;
  double snr_db = 10.0;
  bool noiseless = false;

  // Training-only callers (diagnose) skip the channel and noise flags.
  void add_to(CLI::App* app, bool with_channel) {
    app->add_option("--L", length, "Channel length")->check(CLI::PositiveNumber);
    app->add_option("--N", n, "Training length (rows)")->check(CLI::PositiveNumber);
    app->add_option("--seed", seed, "Base seed; every random draw derives from it");
    if (with_channel) {
      app->add_option("--S", sparsity, "Number of nonzero taps");
      app->add_option("--amp-low", amp_low, "Smallest tap magnitude");
      app->add_option("--amp-high", amp_high, "Largest tap magnitude");
      auto* snr = app->add_option("--snr", snr_db, "Receive SNR in dB");
      app->add_flag("--noiseless", noiseless, "Skip the noise draw")->excludes(snr);
    }
  }

  ChannelPtr channel() const {
    smpc_channel* c = nullptr;
    check(smpc_channel_generate(length, sparsity, amp_low, amp_high, smpc_trial_seed(seed, 0, 0, n), &c),
          "channel");
    return ChannelPtr(c);
  }
  MatrixPtr training() const {
    smpc_matrix* m = nullptr;
    check(smpc_training_generate(n, length, smpc_trial_seed(seed, 0, 1, n), &m), "training matrix");
    return MatrixPtr(m);
  }
  std::vector<double> observe(const smpc_matrix* x, const smpc_channel* h, double* nv) const {
    std::vector<double> y(smpc_matrix_rows(x));
    check(smpc_observe(x, h, snr_db, noiseless ? 1 : 0, smpc_trial_seed(seed, 0, 2, n), y.data(), nv),
          "observation");
    return y;
  }
};

// ---------------------------------------------------------------- gen

struct GenArgs {
  Synth synth;
  double c1 = 1.0;
  std::string channel_out = "channel.txt";
  std::string matrix_out = "training.csv";
  std::string obs_out;
};

int run_gen(const GenArgs& a) {
  ChannelPtr h = a.synth.channel();
  MatrixPtr x = a.synth.training();
  check(smpc_channel_save(h.get(), a.channel_out.c_str()), "write channel");
  check(smpc_matrix_save_csv(x.get(), a.matrix_out.c_str()), "write training matrix");
  std::cout << "channel   " << a.channel_out << "  (L=" << a.synth.length << " S=" << a.synth.sparsity << ")\n";
  std::cout << "training  " << a.matrix_out << "  (" << a.synth.n << "x" << a.synth.length << ")\n";
  if (!a.obs_out.empty()) {
    double nv = 0.0;
    const auto y = a.synth.observe(x.get(), h.get(), &nv);
    check(smpc_observation_save(a.obs_out.c_str(), y.data(), y.size(), nv), "write observation");
    std::cout << "observed  " << a.obs_out << "  (noise variance " << real(nv) << ")\n";
  }
  double mu = 0.0, bound = 0.0;
  check(smpc_coherence_mu(x.get(), &mu), "coherence");
  check(smpc_training_length_bound(a.synth.length, a.synth.sparsity, mu, a.c1, 0.0, &bound), "bound");
  std::cout << "mu_X = " << real(mu) << "\n";
  std::cout << "advisory training bound C1*S*log^4(L)*mu^2 = " << real(bound) << " (C1=" << real(a.c1)
            << "), N=" << a.synth.n << (static_cast<double>(a.synth.n) >= bound ? " meets it\n" : " is below it\n");
  return kSuccess;
}

// ---------------------------------------------------------------- estimate

struct EstimateArgs {
  Synth synth;
  std::string matrix_path, obs_path, channel_path, out_path;
  std::vector<std::string> algos{"cosamp"};
  std::optional<size_t> sparsity;
  std::optional<double> lambda, sigma;
  bool no_debias = false;
  size_t max_iter = 0;
  double tol = 1e-4;
};

int run_estimate(const EstimateArgs& a) {
  const bool from_files = !a.matrix_path.empty();
  if (from_files && a.obs_path.empty()) throw Failure{kUsage, "--matrix needs --obs"};
  if (!from_files && !a.obs_path.empty()) throw Failure{kUsage, "--obs needs --matrix"};
  const bool have_truth = !from_files || !a.channel_path.empty();
  for (const auto& algo : a.algos) {
    if (algo == "oracle" && !have_truth) {
      throw Failure{kUsage, "--algo oracle needs the true support: pass --channel or use synthesis flags"};
    }
  }

  MatrixPtr x;
  ChannelPtr h;
  std::vector<double> y;
  double nv = -1.0;
  if (from_files) {
    smpc_matrix* m = nullptr;
    check(smpc_matrix_load_csv(a.matrix_path.c_str(), &m), "read matrix");
    x.reset(m);
    double* buf = nullptr;
    size_t n = 0;
    check(smpc_observation_load(a.obs_path.c_str(), &buf, &n, &nv), "read observation");
    y.assign(buf, buf + n);
    smpc_free(buf);
    if (!a.channel_path.empty()) {
      smpc_channel* c = nullptr;
      check(smpc_channel_load(a.channel_path.c_str(), &c), "read channel");
      h.reset(c);
    }
  } else {
    h = a.synth.channel();
    x = a.synth.training();
    y = a.synth.observe(x.get(), h.get(), &nv);
  }

  size_t s = 0;
  if (a.sparsity) s = *a.sparsity;
  else if (h) s = smpc_channel_sparsity(h.get());
  else if (!from_files) s = a.synth.sparsity;
  else throw Failure{kUsage, "sparsity unknown: pass --sparsity or --channel"};

  const size_t l = smpc_matrix_cols(x.get());
  if (h && smpc_channel_length(h.get()) != l) {
    throw Failure{kUsage, "channel length " + std::to_string(smpc_channel_length(h.get())) +
                              " does not match matrix width " + std::to_string(l)};
  }
  const double sigma = a.sigma ? *a.sigma : (nv > 0.0 ? std::sqrt(nv) : 0.0);

  std::cout << "instance  N=" << y.size() << " L=" << l << " S=" << s;
  if (nv >= 0.0) std::cout << " noise_variance=" << real(nv);
  std::cout << "\n";
  if (h) std::cout << "truth     support " << support_text(smpc_channel_support(h.get()), smpc_channel_sparsity(h.get())) << "\n";

  std::vector<std::pair<std::string, std::vector<double>>> results;
  int code = kSuccess;
  for (const auto& algo : a.algos) {
    smpc_estimate* raw = nullptr;
    smpc_status st = SMPC_OK;
    if (algo == "cosamp") st = smpc_estimate_cosamp(x.get(), y.data(), y.size(), s, a.max_iter, a.tol, &raw);
    else if (algo == "omp") st = smpc_estimate_omp(x.get(), y.data(), y.size(), s, &raw);
    else if (algo == "ls") st = smpc_estimate_ls(x.get(), y.data(), y.size(), &raw);
    else if (algo == "oracle")
      st = smpc_estimate_oracle(x.get(), y.data(), y.size(), smpc_channel_support(h.get()),
                                smpc_channel_sparsity(h.get()), &raw);
    else
      st = smpc_estimate_dantzig(x.get(), y.data(), y.size(), sigma, s, a.lambda ? *a.lambda : -1.0,
                                 a.no_debias ? 0 : 1, &raw);
    if (st != SMPC_OK) {
      std::cout << algo << "  failed: " << smpc_status_name(st) << ": " << smpc_last_error() << "\n";
      code = kRuntime;
      continue;
    }
    EstimatePtr e(raw);
    const double* taps = smpc_estimate_taps(e.get());
    std::cout << algo << "  ";
    if (h) {
      const double* truth = smpc_channel_taps(h.get());
      double err = 0.0;
      for (size_t j = 0; j < l; ++j) err += (taps[j] - truth[j]) * (taps[j] - truth[j]);
      std::cout << "sq_err=" << real(err) << "  ";
    }
    std::cout << "iterations=" << smpc_estimate_iterations(e.get()) << "  support="
              << support_text(smpc_estimate_support(e.get()), smpc_estimate_support_size(e.get()))
              << "  elapsed=" << real(smpc_estimate_elapsed(e.get())) << "s\n";
    results.emplace_back(algo, std::vector<double>(taps, taps + l));
  }

  if (!a.out_path.empty() && !results.empty()) {
    std::ofstream os(a.out_path);
    if (!os) throw Failure{kRuntime, "cannot write " + a.out_path};
    os << "index";
    for (const auto& r : results) os << ',' << r.first;
    os << '\n';
    char buf[40];
    for (size_t j = 0; j < l; ++j) {
      os << j;
      for (const auto& r : results) {
        std::snprintf(buf, sizeof buf, "%.17g", r.second[j]);
        os << ',' << buf;
      }
      os << '\n';
    }
  }
  return code;
}

// ---------------------------------------------------------------- diagnose

struct DiagnoseArgs {
  Synth synth;
  std::string matrix_path;
  std::optional<size_t> identity;
  size_t sparsity = 5;
  double c1 = 1.0;
  bool ric_exact = false;
  std::optional<size_t> ric_sample;
  uint64_t sample_seed = 1;
};

struct Ric {
  double delta = 0.0;
  bool lower_bound = false;
  std::vector<size_t> worst;
};

Ric compute_ric(const smpc_matrix* x, size_t order, const DiagnoseArgs& a) {
  Ric r;
  r.worst.resize(order);
  if (a.ric_sample) {
    int lb = 0;
    check(smpc_ric_sample(x, order, *a.ric_sample, a.sample_seed, &r.delta, r.worst.data(), &lb), "sampled RIC");
    r.lower_bound = lb != 0;
  } else {
    const smpc_status st = smpc_ric_exact(x, order, &r.delta, r.worst.data());
    if (st == SMPC_ERR_TOO_LARGE) {
      throw Failure{kUsage, std::string("exact RIC of order ") + std::to_string(order) + ": " + smpc_last_error() +
                                "; rerun with --ric-sample <trials>"};
    }
    check(st, "exact RIC");
  }
  return r;
}

std::string pad(std::string label) {
  label.resize(std::max<size_t>(label.size() + 1, 10), ' ');
  return label;
}

std::string ric_label(const Ric& r) { return r.lower_bound ? "sampled lower bound" : "exact"; }

int run_diagnose(const DiagnoseArgs& a) {
  MatrixPtr x;
  if (!a.matrix_path.empty()) {
    smpc_matrix* m = nullptr;
    check(smpc_matrix_load_csv(a.matrix_path.c_str(), &m), "read matrix");
    x.reset(m);
  } else if (a.identity) {
    smpc_matrix* m = nullptr;
    check(smpc_matrix_identity(*a.identity, &m), "identity");
    x.reset(m);
  } else {
    x = a.synth.training();
  }
  const size_t rows = smpc_matrix_rows(x.get());
  const size_t cols = smpc_matrix_cols(x.get());
  if (a.sparsity < 1 || a.sparsity > cols) {
    throw Failure{kUsage, "--S must lie in [1, " + std::to_string(cols) + "]"};
  }

  double mu = 0.0, mc = 0.0, bound = 0.0;
  check(smpc_coherence_mu(x.get(), &mu), "coherence");
  check(smpc_mutual_coherence(x.get(), &mc), "mutual coherence");
  std::cout << "matrix    " << rows << "x" << cols << "\n";
  std::cout << "mu_X      " << real(mu) << "\n";
  std::cout << "max |<x_i,x_j>|  " << real(mc) << "\n";
  if (cols >= 2) {
    check(smpc_training_length_bound(cols, a.sparsity, mu, a.c1, 0.0, &bound), "bound");
    std::cout << "bound     C1*S*log^4(L)*mu^2 = " << real(bound) << " (C1=" << real(a.c1) << ", S=" << a.sparsity
              << "); N=" << rows << (static_cast<double>(rows) >= bound ? " meets it\n" : " is below it\n");
  }

  const Ric ds = compute_ric(x.get(), a.sparsity, a);
  std::cout << pad("delta_" + std::to_string(a.sparsity)) << real(ds.delta) << " (" << ric_label(ds) << ", worst support "
            << support_text(ds.worst.data(), ds.worst.size()) << ")\n";

  const size_t order2 = 2 * a.sparsity;
  const double gate = smpc_rip_gate();
  if (order2 > cols) {
    std::cout << "gate      delta_" << order2 << " undefined: 2S exceeds L=" << cols << "\n";
    return kSuccess;
  }
  const Ric d2 = compute_ric(x.get(), order2, a);
  std::cout << pad("delta_" + std::to_string(order2)) << real(d2.delta) << " (" << ric_label(d2) << ")\n";
  std::cout << "gate      delta_2S <= sqrt(2)-1 = " << real(gate) << ": ";
  if (d2.delta > gate) std::cout << "violated\n";
  else if (d2.lower_bound) std::cout << "not certified (sampled lower bound is below the gate)\n";
  else std::cout << "satisfied\n";
  return kSuccess;
}

// ---------------------------------------------------------------- bench

struct BenchArgs {
  std::string config_path;
  std::string out_dir = "bench_out";
  size_t jobs = 1;
  bool serial = false;
  bool noiseless = false;
  bool no_debias = false;
  // Raw overrides, validated by the library so errors carry key names.
  std::vector<std::pair<std::string, std::string>> overrides;
};

void on_sigint(int) { smpc_bench_request_stop(); }

int run_bench(const BenchArgs& a) {
  if (a.serial && a.jobs > 1) throw Failure{kUsage, "--serial conflicts with --jobs > 1"};
  if (a.jobs < 1) throw Failure{kUsage, "--jobs must be >= 1"};

  smpc_bench_config* raw = nullptr;
  if (a.config_path.empty()) check(smpc_bench_config_create(&raw), "config");
  else check(smpc_bench_config_load(a.config_path.c_str(), &raw), "config " + a.config_path);
  ConfigPtr cfg(raw);
  for (const auto& [key, value] : a.overrides) {
    check(smpc_bench_config_set(cfg.get(), key.c_str(), value.c_str()), "option " + key);
  }
  if (a.noiseless) check(smpc_bench_config_set(cfg.get(), "snr_db", "noiseless"), "option snr_db");
  if (a.no_debias) check(smpc_bench_config_set(cfg.get(), "ds_debias", "false"), "option ds_debias");
  check(smpc_bench_config_validate(cfg.get()), "config");

  std::error_code ec;
  std::filesystem::create_directories(a.out_dir, ec);
  if (ec) throw Failure{kRuntime, "cannot create " + a.out_dir + ": " + ec.message()};

  smpc_bench_clear_stop();
  auto previous = std::signal(SIGINT, on_sigint);
  smpc_bench_result* res = nullptr;
  const smpc_status st = smpc_bench_run(cfg.get(), a.jobs, &res);
  std::signal(SIGINT, previous);
  if (st != SMPC_OK && st != SMPC_ERR_INTERRUPTED) check(st, "bench");
  ResultPtr result(res);

  const std::string dir = a.out_dir;
  check(smpc_bench_write_csv(result.get(), (dir + "/results.csv").c_str()), "write CSV");
  check(smpc_bench_write_plot_data(result.get(), dir.c_str()), "write plot data");
  check(smpc_bench_write_seed_log(result.get(), (dir + "/seeds.txt").c_str()), "write seed log");
  const std::string summary = smpc_bench_summary(result.get());
  {
    std::ofstream os(dir + "/summary.txt");
    os << summary;
  }
  std::cout << summary;
  if (a.jobs > 1) std::cout << "note: timings were taken on " << a.jobs << " contended workers; use --serial for clean timing\n";
  std::cout << "wrote " << smpc_bench_result_records(result.get()) << " records to " << dir << "/results.csv\n";

  if (st == SMPC_ERR_INTERRUPTED) {
    std::cerr << "interrupted: partial results flushed\n";
    return kRuntime;
  }
  const size_t failures = smpc_bench_result_failures(result.get());
  if (failures > 0) {
    std::cerr << failures << " trial(s) failed; see the status column\n";
    return kPartial;
  }
  return kSuccess;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Sparse multipath channel estimation toolkit"};
  app.require_subcommand(1, 1);
  app.set_version_flag("--version", smpc_version());

  GenArgs gen;
  auto* gen_cmd = app.add_subcommand("gen", "Draw a channel and training matrix and write them to files");
  gen.synth.add_to(gen_cmd, true);
  gen_cmd->add_option("--c1", gen.c1, "Constant in the advisory training-length bound");
  gen_cmd->add_option("--channel-out", gen.channel_out, "Channel file");
  gen_cmd->add_option("--matrix-out", gen.matrix_out, "Training matrix CSV");
  gen_cmd->add_option("--obs-out", gen.obs_out, "Also write a received-signal file");

  EstimateArgs est;
  auto* est_cmd = app.add_subcommand("estimate", "Run estimators on one instance");
  est.synth.add_to(est_cmd, true);
  auto* est_matrix = est_cmd->add_option("--matrix", est.matrix_path, "Training matrix CSV");
  est_cmd->add_option("--obs", est.obs_path, "Received-signal file")->needs(est_matrix);
  est_cmd->add_option("--channel", est.channel_path, "True channel file (enables errors and oracle)")->needs(est_matrix);
  est_cmd->add_option("--algo", est.algos, "Estimators to run")
      ->delimiter(',')
      ->check(CLI::IsMember({"cosamp", "omp", "ls", "oracle", "ds"}));
  est_cmd->add_option("--sparsity", est.sparsity, "Sparsity passed to the estimators (defaults to the channel's)");
  est_cmd->add_option("--lambda", est.lambda, "Dantzig selector constraint level")->check(CLI::NonNegativeNumber);
  est_cmd->add_option("--sigma", est.sigma, "Noise standard deviation for the default lambda")->check(CLI::NonNegativeNumber);
  est_cmd->add_flag("--no-debias", est.no_debias, "Skip the least-squares refit after the Dantzig selector");
  est_cmd->add_option("--max-iter", est.max_iter, "CoSaMP iteration budget (0 means 4S)");
  est_cmd->add_option("--tol", est.tol, "CoSaMP halting tolerance")->check(CLI::PositiveNumber);
  est_cmd->add_option("--out", est.out_path, "Write estimated taps as CSV");

  DiagnoseArgs diag;
  auto* diag_cmd = app.add_subcommand("diagnose", "Coherence and restricted isometry diagnostics");
  diag.synth.add_to(diag_cmd, false);
  auto* diag_matrix = diag_cmd->add_option("--matrix", diag.matrix_path, "Matrix CSV");
  diag_cmd->add_option("--identity", diag.identity, "Use the n x n identity")->excludes(diag_matrix);
  diag_cmd->add_option("--S", diag.sparsity, "Order S; the gate uses 2S");
  diag_cmd->add_option("--c1", diag.c1, "Constant in the training-length bound");
  auto* exact = diag_cmd->add_flag("--ric-exact", diag.ric_exact, "Enumerate every support (default)");
  diag_cmd->add_option("--ric-sample", diag.ric_sample, "Sample this many random supports instead")
      ->check(CLI::PositiveNumber)
      ->excludes(exact);
  diag_cmd->add_option("--sample-seed", diag.sample_seed, "Seed for --ric-sample");

  BenchArgs bench;
  auto* bench_cmd = app.add_subcommand("bench", "Monte-Carlo comparison of estimators");
  bench_cmd->add_option("--config", bench.config_path, "key = value configuration file")->check(CLI::ExistingFile);
  bench_cmd->add_option("--out-dir", bench.out_dir, "Output directory");
  auto* jobs = bench_cmd->add_option("--jobs", bench.jobs, "Worker threads (default 1)");
  bench_cmd->add_flag("--serial", bench.serial, "Single worker for clean timing")->excludes(jobs);
  // Flag name -> config key. Values pass through to the config parser.
  const std::vector<std::pair<std::string, std::string>> override_flags{
      {"--L", "L"}, {"--S", "S"}, {"--amp-low", "amp_low"}, {"--amp-high", "amp_high"},
      {"--n-values", "n_values"}, {"--trials", "trials"}, {"--seed", "base_seed"},
      {"--estimators", "estimators"}};
  std::vector<std::string> override_values(override_flags.size());
  for (size_t i = 0; i < override_flags.size(); ++i) {
    bench_cmd->add_option(override_flags[i].first, override_values[i], "Overrides config key " + override_flags[i].second);
  }
  std::string snr_value;
  auto* snr = bench_cmd->add_option("--snr", snr_value, "Receive SNR in dB");
  bench_cmd->add_flag("--noiseless", bench.noiseless, "Noiseless observations")->excludes(snr);
  bench_cmd->add_flag("--no-debias", bench.no_debias, "Dantzig selector without the LS refit");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kSuccess : kUsage;
  }

  try {
    if (*gen_cmd) return run_gen(gen);
    if (*est_cmd) return run_estimate(est);
    if (*diag_cmd) return run_diagnose(diag);
    for (size_t i = 0; i < override_flags.size(); ++i) {
      if (bench_cmd->count(override_flags[i].first) > 0) {
        bench.overrides.emplace_back(override_flags[i].second, override_values[i]);
      }
    }
    if (bench_cmd->count("--snr") > 0) bench.overrides.emplace_back("snr_db", snr_value);
    return run_bench(bench);
  } catch (const Failure& f) {
    std::cerr << "error: " << f.message << "\n";
    return f.code;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kRuntime;
  }
}
