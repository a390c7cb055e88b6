// SPDX-License-Identifier: Apache-2.0
//
// Monte-Carlo engine: for every training length N and trial m a fresh
// channel, training matrix and noise draw are generated from per-trial seeds
// and every configured estimator runs on the same (X, y).

#pragma once

#include <atomic>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace smpc {

enum class EstimatorKind { kCosamp, kOmp, kLs, kOracle, kDantzig };

const char* estimator_name(EstimatorKind kind) noexcept;
/// Accepts cosamp, omp, ls, oracle, ds. Throws kInvalidArgument otherwise.
EstimatorKind parse_estimator(const std::string& name);

struct ExperimentConfig {
  std::size_t length = 50;
  std::size_t sparsity = 5;
  double amp_low = 0.2;
  double amp_high = 1.0;
  /// Empty means noiseless.
  std::optional<double> snr_db = 10.0;
  std::vector<std::size_t> n_values{15, 20, 25, 30, 35, 40, 45};
  std::size_t trials = 1000;
  std::uint64_t base_seed = 1;
  std::vector<EstimatorKind> estimators{EstimatorKind::kCosamp, EstimatorKind::kOmp,
                                        EstimatorKind::kLs, EstimatorKind::kOracle,
                                        EstimatorKind::kDantzig};
  bool ds_debias = true;

  /// Throws kInvalidArgument naming the offending field.
  void validate() const;
};

/// Keys: L, S, amp_low, amp_high, snr_db (a number or "noiseless"),
/// n_values, trials, base_seed, estimators (comma lists), ds_debias.
void set_config_value(ExperimentConfig& cfg, const std::string& key, const std::string& value);
/// "key = value" lines; '#' starts a comment. Unknown keys are errors.
ExperimentConfig parse_config(std::istream& is, const std::string& source = "<config>");
ExperimentConfig load_config(const std::string& path);

struct TrialRecord {
  std::string estimator;
  std::size_t n = 0;
  std::size_t trial = 0;
  std::uint64_t seed = 0;
  double sq_err_all = 0.0;
  double sq_err_dom = 0.0;
  double elapsed_seconds = 0.0;
  std::size_t iterations = 0;
  bool support_exact = false;
  /// "ok" or the error category of a failed estimator call.
  std::string status = "ok";
  /// ||h||^2 of the trial's channel (for the normalized MSE).
  double channel_energy = 0.0;
  /// FNV-1a over the bytes of X and y consumed by the call.
  std::uint64_t data_hash = 0;

  bool ok() const noexcept { return status == "ok"; }
};

/// Per-trial seed = base_seed + trial; channel, matrix and noise seeds derive from it.
std::uint64_t trial_seed(std::uint64_t base_seed, std::size_t trial) noexcept;

struct RunOptions {
  /// Worker threads; 1 runs inline.
  std::size_t jobs = 1;
  /// Polled between cells; set it to stop early and keep finished cells.
  const std::atomic<bool>* cancel = nullptr;
};

struct ExperimentRun {
  /// Sorted by (estimator order in the config, N, trial).
  std::vector<TrialRecord> records;
  bool interrupted = false;
  std::size_t failures() const;
};

ExperimentRun run_experiment(const ExperimentConfig& cfg, const RunOptions& options = {});

/// Eq.-style MSE: the plain mean of sq_err_all. Throws kDomain when empty.
double mse(std::span<const TrialRecord> records);

struct MseCell {
  std::string estimator;
  std::size_t n = 0;
  std::size_t count = 0;
  std::size_t failures = 0;
  double mse_all = 0.0;
  double se_all = 0.0;
  double mse_dom = 0.0;
  double se_dom = 0.0;
  /// Mean of sq_err_all / ||h||^2.
  double nmse_all = 0.0;
  double mean_elapsed = 0.0;
};

/// One cell per (estimator, N) in first-appearance order; failed rows are
/// counted but excluded from the means.
std::vector<MseCell> mse_report(std::span<const TrialRecord> records);

/// (x, fraction of values <= x) for every grid point. Grid must be ascending.
std::vector<std::pair<double, double>> empirical_cdf(std::span<const double> values,
                                                     std::span<const double> grid);

/// Mean elapsed seconds per estimator (first-appearance order). Wall-clock
/// times depend on the machine and on worker contention.
std::vector<std::pair<std::string, double>> timing_summary(std::span<const TrialRecord> records);

inline constexpr const char* kCsvHeader =
    "estimator,N,trial,seed,sq_err_all,sq_err_dom,elapsed_seconds,iterations,support_exact,status";

void write_csv(std::ostream& os, std::span<const TrialRecord> records);
void write_csv(const std::string& path, std::span<const TrialRecord> records);
std::vector<TrialRecord> read_csv(std::istream& is, const std::string& source = "<csv>");
std::vector<TrialRecord> read_csv(const std::string& path);

/// mse_vs_n.dat, cdf_all.dat and cdf_dom.dat (gnuplot whitespace format).
void write_plot_data(const std::string& directory, std::span<const TrialRecord> records);
/// N,trial,seed,data_hash per estimator call, for auditing the paired design.
void write_seed_log(const std::string& path, std::span<const TrialRecord> records);

std::string format_summary(const ExperimentConfig& cfg, std::span<const TrialRecord> records);

}  // namespace smpc
