// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>

#include <atomic>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <map>
#include <random>
#include <sstream>

#include "oracles.hpp"
#include "smpc/bench.hpp"
#include "smpc/error.hpp"

using namespace smpc;

namespace {

TrialRecord rec(double sq, std::string status = "ok") {
  TrialRecord r;
  r.estimator = "cosamp";
  r.n = 20;
  r.sq_err_all = sq;
  r.sq_err_dom = sq;
  r.status = std::move(status);
  return r;
}

ExperimentConfig small_config() {
  ExperimentConfig cfg;
  cfg.length = 20;
  cfg.sparsity = 2;
  cfg.n_values = {8, 12};
  cfg.trials = 6;
  cfg.estimators = {EstimatorKind::kCosamp, EstimatorKind::kOmp, EstimatorKind::kOracle};
  return cfg;
}

std::string strip_timing(const std::vector<TrialRecord>& records) {
  std::ostringstream os;
  for (auto r : records) {
    r.elapsed_seconds = 0.0;
    write_csv(os, std::span<const TrialRecord>(&r, 1));
  }
  return os.str();
}

}  // namespace

TEST_CASE("mse examples") {
  std::vector<TrialRecord> v{rec(0.0)};
  CHECK(mse(v) == 0.0);
  v = {rec(1.0), rec(1.0)};
  CHECK(mse(v) == 1.0);
  v = {rec(0.1), rec(0.2), rec(0.6)};
  CHECK(mse(v) == doctest::Approx(0.3));
  v = {rec(0.5), rec(std::nan(""), "singular_support")};
  CHECK(mse(v) == 0.5);
  v.clear();
  CHECK_THROWS_AS(mse(v), Error);
}

TEST_CASE("empirical CDF examples") {
  const std::vector<double> values{0.1, 0.2, 0.2, 0.5};
  const std::vector<double> grid{0.0, 0.1, 0.2, 0.3, 1.0};
  const auto cdf = empirical_cdf(values, grid);
  const std::vector<double> want{0.0, 0.25, 0.75, 0.75, 1.0};
  for (std::size_t i = 0; i < grid.size(); ++i) {
    CHECK(cdf[i].first == grid[i]);
    CHECK(cdf[i].second == want[i]);
  }
  CHECK_THROWS_AS(empirical_cdf(std::vector<double>{}, grid), Error);
  CHECK_THROWS_AS(empirical_cdf(values, std::vector<double>{1.0, 0.0}), Error);
}

TEST_CASE("empirical CDF properties") {
  std::mt19937_64 gen(21);
  std::exponential_distribution<double> e(3.0);
  for (int rep = 0; rep < 50; ++rep) {
    std::vector<double> values(1 + gen() % 200);
    for (auto& v : values) v = e(gen);
    std::vector<double> grid;
    for (int k = -40; k <= 10; ++k) grid.push_back(std::pow(10.0, k / 10.0));
    const auto cdf = empirical_cdf(values, grid);
    const auto want = oracle::cdf_scan(values, grid);
    double prev = 0.0;
    for (std::size_t i = 0; i < grid.size(); ++i) {
      CHECK(cdf[i].second == want[i]);
      CHECK(cdf[i].second >= prev);
      CHECK(cdf[i].second <= 1.0);
      prev = cdf[i].second;
    }
  }
}

TEST_CASE("timing summary averages completed trials per estimator") {
  std::vector<TrialRecord> v{rec(0.0), rec(0.0), rec(0.0, "singular_support")};
  v[0].elapsed_seconds = 1.0;
  v[1].elapsed_seconds = 3.0;
  v[2].elapsed_seconds = 100.0;
  v.push_back(rec(0.0));
  v.back().estimator = "omp";
  v.back().elapsed_seconds = 0.5;
  const auto t = timing_summary(v);
  REQUIRE(t.size() == 2);
  CHECK(t[0].first == "cosamp");
  CHECK(t[0].second == 2.0);
  CHECK(t[1].second == 0.5);
}

TEST_CASE("CSV output") {
  std::ostringstream empty;
  write_csv(empty, std::vector<TrialRecord>{});
  CHECK(empty.str() == std::string(kCsvHeader) + "\n");

  std::mt19937_64 gen(5);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<TrialRecord> v;
  for (int i = 0; i < 25; ++i) {
    TrialRecord r = rec(u(gen) / 3.0);
    r.sq_err_dom = r.sq_err_all * u(gen);
    r.trial = static_cast<std::size_t>(i);
    r.seed = gen();
    r.elapsed_seconds = u(gen) * 1e-4;
    r.iterations = static_cast<std::size_t>(i % 7);
    r.support_exact = i % 2 == 0;
    v.push_back(r);
  }
  v.push_back(rec(std::nan(""), "singular_support"));
  std::stringstream ss;
  write_csv(ss, v);
  const std::string text = ss.str();
  CHECK(std::count(text.begin(), text.end(), '\n') == 27);
  const auto back = read_csv(ss);
  REQUIRE(back.size() == v.size());
  for (std::size_t i = 0; i + 1 < v.size(); ++i) {
    CHECK(back[i].sq_err_all == v[i].sq_err_all);
    CHECK(back[i].sq_err_dom == v[i].sq_err_dom);
    CHECK(back[i].elapsed_seconds == v[i].elapsed_seconds);
    CHECK(back[i].seed == v[i].seed);
    CHECK(back[i].iterations == v[i].iterations);
    CHECK(back[i].support_exact == v[i].support_exact);
  }
  CHECK_FALSE(back.back().ok());
  CHECK(std::isnan(back.back().sq_err_all));

  std::istringstream bad("estimator,N\n");
  CHECK_THROWS_AS(read_csv(bad), Error);
}

TEST_CASE("config parsing") {
  std::istringstream is(
      "# table setup\nL = 30\nS = 3\nn_values = 10, 20\ntrials = 7\nestimators = omp,ls\n"
      "snr_db = noiseless\nbase_seed = 42\n");
  const ExperimentConfig cfg = parse_config(is);
  CHECK(cfg.length == 30);
  CHECK(cfg.sparsity == 3);
  CHECK(cfg.n_values == std::vector<std::size_t>{10, 20});
  CHECK(cfg.trials == 7);
  CHECK(cfg.estimators == std::vector<EstimatorKind>{EstimatorKind::kOmp, EstimatorKind::kLs});
  CHECK_FALSE(cfg.snr_db.has_value());
  CHECK(cfg.base_seed == 42);

  std::istringstream unknown("L = 30\nfoo = 1\n");
  CHECK_THROWS_AS(parse_config(unknown), Error);
  ExperimentConfig c2;
  CHECK_THROWS_AS(set_config_value(c2, "estimators", "cosamp,bogus"), Error);
  c2.sparsity = 30;
  CHECK_THROWS_AS(c2.validate(), Error);
  ExperimentConfig c3;
  c3.n_values = {60};
  CHECK_THROWS_AS(c3.validate(), Error);
  CHECK(parse_estimator("ds") == EstimatorKind::kDantzig);
  CHECK(std::string(estimator_name(EstimatorKind::kOracle)) == "oracle");
}

TEST_CASE("run_experiment record layout") {
  ExperimentConfig cfg = small_config();
  cfg.trials = 1;
  cfg.estimators = {EstimatorKind::kOmp};
  const ExperimentRun run = run_experiment(cfg);
  CHECK(run.records.size() == cfg.n_values.size());
  CHECK_FALSE(run.interrupted);

  cfg = small_config();
  const ExperimentRun full = run_experiment(cfg);
  CHECK(full.records.size() == cfg.trials * cfg.n_values.size() * cfg.estimators.size());
  for (std::size_t i = 1; i < full.records.size(); ++i) {
    const auto& a = full.records[i - 1];
    const auto& b = full.records[i];
    if (a.estimator == b.estimator) CHECK((a.n < b.n || (a.n == b.n && a.trial < b.trial)));
  }
  for (const auto& r : full.records) {
    CHECK(r.seed == trial_seed(cfg.base_seed, r.trial));
    if (r.ok()) CHECK(r.sq_err_dom <= r.sq_err_all + 1e-12);
  }
}

TEST_CASE("noiseless oracle is exact") {
  ExperimentConfig cfg = small_config();
  cfg.snr_db.reset();
  cfg.estimators = {EstimatorKind::kOracle};
  for (const auto& r : run_experiment(cfg).records) {
    REQUIRE(r.ok());
    CHECK(r.sq_err_all <= 1e-20);
    CHECK(r.support_exact);
  }
}

TEST_CASE("estimators in a cell see identical data") {
  const ExperimentRun run = run_experiment(small_config());
  std::map<std::pair<std::size_t, std::size_t>, std::uint64_t> hashes;
  std::map<std::size_t, double> energy;
  for (const auto& r : run.records) {
    const auto key = std::make_pair(r.n, r.trial);
    auto [it, fresh] = hashes.emplace(key, r.data_hash);
    if (!fresh) CHECK(it->second == r.data_hash);
    auto [e, first] = energy.emplace(r.trial, r.channel_energy);
    if (!first) CHECK(e->second == r.channel_energy);
  }
}

TEST_CASE("worker count does not change results") {
  ExperimentConfig cfg = small_config();
  cfg.trials = 10;
  RunOptions serial;
  RunOptions pooled;
  pooled.jobs = 4;
  const auto a = run_experiment(cfg, serial);
  const auto b = run_experiment(cfg, pooled);
  CHECK(strip_timing(a.records) == strip_timing(b.records));
  CHECK(strip_timing(a.records) == strip_timing(run_experiment(cfg, serial).records));
}

TEST_CASE("cancellation stops the run") {
  std::atomic<bool> stop{true};
  RunOptions opts;
  opts.cancel = &stop;
  const ExperimentRun run = run_experiment(small_config(), opts);
  CHECK(run.interrupted);
  CHECK(run.records.size() < 36);
}

TEST_CASE("plot data and summaries") {
  const ExperimentRun run = run_experiment(small_config());
  const auto dir = std::filesystem::temp_directory_path() / "smpc_plot_test";
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  write_plot_data(dir.string(), run.records);
  for (const char* f : {"mse_vs_n.dat", "cdf_all.dat", "cdf_dom.dat"})
    CHECK(std::filesystem::file_size(dir / f) > 0);
  write_seed_log((dir / "seeds.txt").string(), run.records);
  CHECK(std::filesystem::exists(dir / "seeds.txt"));
  const std::string summary = format_summary(small_config(), run.records);
  CHECK(summary.find("omp") != std::string::npos);
  const auto cells = mse_report(run.records);
  CHECK(cells.size() == 6);
  std::filesystem::remove_all(dir);
}
