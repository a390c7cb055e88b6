// SPDX-License-Identifier: Apache-2.0

#include "smpc/bench.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <limits>
#include <map>
#include <sstream>
#include <thread>

#include "smpc/channel.hpp"
#include "smpc/dantzig.hpp"
#include "smpc/error.hpp"
#include "smpc/estimators.hpp"
#include "smpc/io.hpp"
#include "smpc/rng.hpp"

namespace smpc {

namespace {

constexpr std::uint64_t kChannelStream = 1;
constexpr std::uint64_t kTrainingStream = 2;
constexpr std::uint64_t kNoiseStream = 3;

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  return s.substr(b, s.find_last_not_of(" \t\r") - b + 1);
}

std::vector<std::string> split_list(const std::string& value) {
  std::vector<std::string> out;
  std::stringstream ss(value);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

std::uint64_t parse_u64(const std::string& key, const std::string& value) {
  const std::string t = trim(value);
  if (t.empty() || t.find_first_not_of("0123456789") != std::string::npos) {
    throw Error(ErrorCode::kInvalidArgument, "config key '" + key + "': expected a nonnegative integer, got '" + value + "'");
  }
  try {
    return std::stoull(t);
  } catch (const std::exception&) {
    throw Error(ErrorCode::kInvalidArgument, "config key '" + key + "': integer out of range");
  }
}

double parse_double(const std::string& key, const std::string& value) {
  try {
    return parse_real(value);
  } catch (const Error&) {
    throw Error(ErrorCode::kInvalidArgument, "config key '" + key + "': expected a number, got '" + value + "'");
  }
}

bool parse_bool(const std::string& key, const std::string& value) {
  const std::string t = trim(value);
  if (t == "true" || t == "1" || t == "yes" || t == "on") return true;
  if (t == "false" || t == "0" || t == "no" || t == "off") return false;
  throw Error(ErrorCode::kInvalidArgument, "config key '" + key + "': expected a boolean, got '" + value + "'");
}

std::uint64_t fnv1a(std::uint64_t h, std::span<const double> values) {
  for (double v : values) {
    unsigned char bytes[sizeof(double)];
    std::memcpy(bytes, &v, sizeof v);
    for (unsigned char b : bytes) {
      h ^= b;
      h *= 0x100000001b3ULL;
    }
  }
  return h;
}

struct TrialData {
  SparseChannel channel;
  TrainingMatrix training;
  Observation observation;
  std::uint64_t seed = 0;
  std::uint64_t hash = 0;
};

TrialData draw_trial(const ExperimentConfig& cfg, std::size_t n, std::size_t trial) {
  TrialData d;
  d.seed = trial_seed(cfg.base_seed, trial);
  // The channel depends on the trial only, so every N sees the same taps.
  d.channel = generate_sparse_channel(cfg.length, cfg.sparsity, cfg.amp_low, cfg.amp_high,
                                      derive_seed(d.seed, kChannelStream));
  d.training = build_toeplitz_training(n, cfg.length, derive_seed(d.seed, kTrainingStream, n));
  d.observation = synthesize_observation(d.training.matrix, d.channel, cfg.snr_db,
                                         derive_seed(d.seed, kNoiseStream, n));
  d.hash = fnv1a(fnv1a(0xcbf29ce484222325ULL, d.training.matrix.data()), d.observation.received);
  return d;
}

Estimate run_estimator(EstimatorKind kind, const ExperimentConfig& cfg, const TrialData& d) {
  const Matrix& x = d.training.matrix;
  const Vector& y = d.observation.received;
  switch (kind) {
    case EstimatorKind::kCosamp: {
      CosampConfig c;
      c.sparsity = cfg.sparsity;
      return estimate_cosamp(x, y, c);
    }
    case EstimatorKind::kOmp: return estimate_omp(x, y, cfg.sparsity);
    case EstimatorKind::kLs: return estimate_ls(x, y);
    case EstimatorKind::kOracle: return estimate_oracle_ls(x, y, d.channel.support);
    case EstimatorKind::kDantzig: {
      DantzigConfig c;
      c.debias = cfg.ds_debias;
      return estimate_dantzig(x, y, std::sqrt(d.observation.noise_variance), cfg.sparsity, c);
    }
  }
  throw Error(ErrorCode::kInvalidArgument, "unknown estimator");
}

std::vector<TrialRecord> run_cell(const ExperimentConfig& cfg, std::size_t n, std::size_t trial) {
  std::vector<TrialRecord> out;
  out.reserve(cfg.estimators.size());
  const TrialData d = draw_trial(cfg, n, trial);
  const double energy = dot(d.channel.taps, d.channel.taps);
  for (EstimatorKind kind : cfg.estimators) {
    TrialRecord r;
    r.estimator = estimator_name(kind);
    r.n = n;
    r.trial = trial;
    r.seed = d.seed;
    r.channel_energy = energy;
    r.data_hash = d.hash;
    try {
      const Estimate e = run_estimator(kind, cfg, d);
      double all = 0.0;
      double dom = 0.0;
      for (std::size_t j = 0; j < cfg.length; ++j) {
        const double diff = d.channel.taps[j] - e.taps[j];
        all += diff * diff;
        if (d.channel.support.contains(j)) dom += diff * diff;
      }
      r.sq_err_all = all;
      r.sq_err_dom = dom;
      r.elapsed_seconds = e.elapsed_seconds;
      r.iterations = e.iterations;
      r.support_exact = e.support == d.channel.support;
    } catch (const Error& err) {
      r.status = to_string(err.code());
    } catch (const std::exception&) {
      r.status = "internal";
    }
    if (!r.ok()) {
      r.sq_err_all = r.sq_err_dom = std::numeric_limits<double>::quiet_NaN();
    }
    out.push_back(std::move(r));
  }
  return out;
}

double mean_of(const std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s += x;
  return v.empty() ? 0.0 : s / static_cast<double>(v.size());
}

double standard_error(const std::vector<double>& v) {
  if (v.size() < 2) return 0.0;
  const double m = mean_of(v);
  double ss = 0.0;
  for (double x : v) ss += (x - m) * (x - m);
  return std::sqrt(ss / static_cast<double>(v.size() - 1) / static_cast<double>(v.size()));
}

std::string csv_real(double v) { return std::isnan(v) ? "nan" : format_real(v); }

}  // namespace

const char* estimator_name(EstimatorKind kind) noexcept {
  switch (kind) {
    case EstimatorKind::kCosamp: return "cosamp";
    case EstimatorKind::kOmp: return "omp";
    case EstimatorKind::kLs: return "ls";
    case EstimatorKind::kOracle: return "oracle";
    case EstimatorKind::kDantzig: return "ds";
  }
  return "unknown";
}

EstimatorKind parse_estimator(const std::string& name) {
  for (auto k : {EstimatorKind::kCosamp, EstimatorKind::kOmp, EstimatorKind::kLs,
                 EstimatorKind::kOracle, EstimatorKind::kDantzig}) {
    if (name == estimator_name(k)) return k;
  }
  throw Error(ErrorCode::kInvalidArgument,
              "unknown estimator '" + name + "' (expected cosamp, omp, ls, oracle or ds)");
}

void ExperimentConfig::validate() const {
  auto bad = [](const std::string& msg) { throw Error(ErrorCode::kInvalidArgument, msg); };
  if (sparsity < 1 || 2 * sparsity > length) bad("S must satisfy 1 <= S <= L/2");
  if (!(amp_low > 0.0) || !(amp_low <= amp_high)) bad("amplitudes must satisfy 0 < amp_low <= amp_high");
  if (snr_db && !std::isfinite(*snr_db)) bad("snr_db must be finite");
  if (n_values.empty()) bad("n_values must not be empty");
  for (std::size_t n : n_values) {
    if (n < sparsity || n >= length) {
      bad("n_values entry " + std::to_string(n) + " must satisfy S <= N < L");
    }
  }
  if (trials < 1) bad("trials must be >= 1");
  if (estimators.empty()) bad("estimators must not be empty");
  for (std::size_t i = 0; i < estimators.size(); ++i)
    for (std::size_t j = i + 1; j < estimators.size(); ++j)
      if (estimators[i] == estimators[j]) bad(std::string("estimator listed twice: ") + estimator_name(estimators[i]));
}

void set_config_value(ExperimentConfig& cfg, const std::string& raw_key, const std::string& value) {
  const std::string key = trim(raw_key);
  if (key == "L") {
    cfg.length = parse_u64(key, value);
  } else if (key == "S") {
    cfg.sparsity = parse_u64(key, value);
  } else if (key == "amp_low") {
    cfg.amp_low = parse_double(key, value);
  } else if (key == "amp_high") {
    cfg.amp_high = parse_double(key, value);
  } else if (key == "snr_db") {
    if (trim(value) == "noiseless") cfg.snr_db.reset();
    else cfg.snr_db = parse_double(key, value);
  } else if (key == "n_values") {
    cfg.n_values.clear();
    for (const auto& item : split_list(value)) cfg.n_values.push_back(parse_u64(key, item));
  } else if (key == "trials") {
    cfg.trials = parse_u64(key, value);
  } else if (key == "base_seed") {
    cfg.base_seed = parse_u64(key, value);
  } else if (key == "estimators") {
    cfg.estimators.clear();
    for (const auto& item : split_list(value)) cfg.estimators.push_back(parse_estimator(item));
  } else if (key == "ds_debias") {
    cfg.ds_debias = parse_bool(key, value);
  } else {
    throw Error(ErrorCode::kInvalidArgument, "unknown config key '" + key + "'");
  }
}

ExperimentConfig parse_config(std::istream& is, const std::string& source) {
  ExperimentConfig cfg;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.resize(hash);
    if (trim(line).empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw Error(ErrorCode::kParse, source + ":" + std::to_string(lineno) + ": expected 'key = value'");
    }
    try {
      set_config_value(cfg, line.substr(0, eq), line.substr(eq + 1));
    } catch (const Error& e) {
      throw Error(ErrorCode::kParse, source + ":" + std::to_string(lineno) + ": " + e.what());
    }
  }
  return cfg;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kIo, "cannot open config '" + path + "'");
  return parse_config(in, path);
}

std::uint64_t trial_seed(std::uint64_t base_seed, std::size_t trial) noexcept {
  return base_seed + static_cast<std::uint64_t>(trial);
}

std::size_t ExperimentRun::failures() const {
  return static_cast<std::size_t>(
      std::count_if(records.begin(), records.end(), [](const TrialRecord& r) { return !r.ok(); }));
}

ExperimentRun run_experiment(const ExperimentConfig& cfg, const RunOptions& options) {
  cfg.validate();
  const std::size_t cells = cfg.n_values.size() * cfg.trials;
  std::vector<std::vector<TrialRecord>> results(cells);
  std::vector<char> done(cells, 0);
  std::atomic<std::size_t> next{0};
  std::atomic<bool> stopped{false};

  auto worker = [&] {
    for (;;) {
      if (options.cancel && options.cancel->load(std::memory_order_relaxed)) {
        stopped = true;
        return;
      }
      const std::size_t cell = next.fetch_add(1);
      if (cell >= cells) return;
      const std::size_t n = cfg.n_values[cell / cfg.trials];
      results[cell] = run_cell(cfg, n, cell % cfg.trials);
      done[cell] = 1;
    }
  };

  const std::size_t jobs = std::max<std::size_t>(1, std::min(options.jobs, cells));
  if (jobs == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(jobs);
    for (std::size_t i = 0; i < jobs; ++i) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }

  ExperimentRun run;
  run.interrupted = stopped.load();
  for (std::size_t c = 0; c < cells; ++c) {
    if (!done[c]) continue;
    for (auto& r : results[c]) run.records.push_back(std::move(r));
  }
  std::map<std::string, std::size_t> rank;
  for (std::size_t i = 0; i < cfg.estimators.size(); ++i) rank[estimator_name(cfg.estimators[i])] = i;
  std::stable_sort(run.records.begin(), run.records.end(), [&](const TrialRecord& a, const TrialRecord& b) {
    const auto ra = rank[a.estimator];
    const auto rb = rank[b.estimator];
    if (ra != rb) return ra < rb;
    if (a.n != b.n) return a.n < b.n;
    return a.trial < b.trial;
  });
  return run;
}

double mse(std::span<const TrialRecord> records) {
  double sum = 0.0;
  std::size_t count = 0;
  for (const auto& r : records) {
    if (!r.ok()) continue;
    sum += r.sq_err_all;
    ++count;
  }
  if (count == 0) throw Error(ErrorCode::kDomain, "mse: no completed trials in the cell");
  return sum / static_cast<double>(count);
}

std::vector<MseCell> mse_report(std::span<const TrialRecord> records) {
  struct Acc {
    std::vector<double> all, dom, norm, time;
    std::size_t failures = 0;
  };
  std::vector<std::pair<std::string, std::size_t>> order;
  std::map<std::pair<std::string, std::size_t>, Acc> acc;
  for (const auto& r : records) {
    const auto key = std::make_pair(r.estimator, r.n);
    auto [it, inserted] = acc.try_emplace(key);
    if (inserted) order.push_back(key);
    if (!r.ok()) {
      ++it->second.failures;
      continue;
    }
    it->second.all.push_back(r.sq_err_all);
    it->second.dom.push_back(r.sq_err_dom);
    it->second.norm.push_back(r.channel_energy > 0.0 ? r.sq_err_all / r.channel_energy : 0.0);
    it->second.time.push_back(r.elapsed_seconds);
  }
  std::vector<MseCell> out;
  for (const auto& key : order) {
    const Acc& a = acc[key];
    MseCell c;
    c.estimator = key.first;
    c.n = key.second;
    c.count = a.all.size();
    c.failures = a.failures;
    c.mse_all = mean_of(a.all);
    c.se_all = standard_error(a.all);
    c.mse_dom = mean_of(a.dom);
    c.se_dom = standard_error(a.dom);
    c.nmse_all = mean_of(a.norm);
    c.mean_elapsed = mean_of(a.time);
    out.push_back(std::move(c));
  }
  return out;
}

std::vector<std::pair<double, double>> empirical_cdf(std::span<const double> values,
                                                     std::span<const double> grid) {
  if (values.empty()) throw Error(ErrorCode::kDomain, "empirical_cdf: no values");
  if (!std::is_sorted(grid.begin(), grid.end())) {
    throw Error(ErrorCode::kInvalidArgument, "empirical_cdf: grid must be ascending");
  }
  std::vector<double> sorted(values.begin(), values.end());
  std::sort(sorted.begin(), sorted.end());
  const auto m = static_cast<double>(sorted.size());
  std::vector<std::pair<double, double>> out;
  out.reserve(grid.size());
  for (double x : grid) {
    const auto below = std::upper_bound(sorted.begin(), sorted.end(), x) - sorted.begin();
    out.emplace_back(x, static_cast<double>(below) / m);
  }
  return out;
}

std::vector<std::pair<std::string, double>> timing_summary(std::span<const TrialRecord> records) {
  std::vector<std::pair<std::string, double>> out;
  std::vector<std::size_t> counts;
  for (const auto& r : records) {
    if (!r.ok()) continue;
    auto it = std::find_if(out.begin(), out.end(), [&](const auto& p) { return p.first == r.estimator; });
    if (it == out.end()) {
      out.emplace_back(r.estimator, 0.0);
      counts.push_back(0);
      it = out.end() - 1;
    }
    const auto idx = static_cast<std::size_t>(it - out.begin());
    it->second += r.elapsed_seconds;
    ++counts[idx];
  }
  for (std::size_t i = 0; i < out.size(); ++i) out[i].second /= static_cast<double>(counts[i]);
  return out;
}

void write_csv(std::ostream& os, std::span<const TrialRecord> records) {
  os << kCsvHeader << '\n';
  for (const auto& r : records) {
    os << r.estimator << ',' << r.n << ',' << r.trial << ',' << r.seed << ','
       << csv_real(r.sq_err_all) << ',' << csv_real(r.sq_err_dom) << ','
       << csv_real(r.elapsed_seconds) << ',' << r.iterations << ',' << (r.support_exact ? 1 : 0)
       << ',' << r.status << '\n';
  }
}

void write_csv(const std::string& path, std::span<const TrialRecord> records) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::kIo, "cannot open '" + path + "' for writing");
  write_csv(out, records);
  out.flush();
  if (!out) throw Error(ErrorCode::kIo, "write to '" + path + "' failed");
}

std::vector<TrialRecord> read_csv(std::istream& is, const std::string& source) {
  std::string line;
  std::size_t lineno = 1;
  if (!std::getline(is, line) || trim(line) != kCsvHeader) {
    throw Error(ErrorCode::kParse, source + ":1: unexpected CSV header");
  }
  auto real = [&](const std::string& s) {
    if (s == "nan") return std::numeric_limits<double>::quiet_NaN();
    try {
      return parse_real(s);
    } catch (const Error& e) {
      throw Error(ErrorCode::kParse, source + ":" + std::to_string(lineno) + ": " + e.what());
    }
  };
  auto count = [&](const std::string& s) {
    try {
      return parse_u64("csv", s);
    } catch (const Error& e) {
      throw Error(ErrorCode::kParse, source + ":" + std::to_string(lineno) + ": " + e.what());
    }
  };
  std::vector<TrialRecord> out;
  while (std::getline(is, line)) {
    ++lineno;
    if (trim(line).empty()) continue;
    std::vector<std::string> f;
    std::stringstream ss(trim(line));
    std::string item;
    while (std::getline(ss, item, ',')) f.push_back(item);
    if (f.size() != 10) {
      throw Error(ErrorCode::kParse, source + ":" + std::to_string(lineno) + ": expected 10 fields");
    }
    TrialRecord r;
    r.estimator = f[0];
    r.n = count(f[1]);
    r.trial = count(f[2]);
    r.seed = count(f[3]);
    r.sq_err_all = real(f[4]);
    r.sq_err_dom = real(f[5]);
    r.elapsed_seconds = real(f[6]);
    r.iterations = count(f[7]);
    r.support_exact = f[8] == "1";
    r.status = f[9];
    out.push_back(std::move(r));
  }
  return out;
}

std::vector<TrialRecord> read_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kIo, "cannot open '" + path + "' for reading");
  return read_csv(in, path);
}

void write_plot_data(const std::string& directory, std::span<const TrialRecord> records) {
  namespace fs = std::filesystem;
  const auto cells = mse_report(records);
  std::vector<std::string> names;
  std::vector<std::size_t> ns;
  for (const auto& c : cells) {
    if (std::find(names.begin(), names.end(), c.estimator) == names.end()) names.push_back(c.estimator);
    if (std::find(ns.begin(), ns.end(), c.n) == ns.end()) ns.push_back(c.n);
  }
  std::sort(ns.begin(), ns.end());
  auto open = [&](const char* name) {
    const std::string path = (fs::path(directory) / name).string();
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(ErrorCode::kIo, "cannot open '" + path + "' for writing");
    return out;
  };

  {
    auto out = open("mse_vs_n.dat");
    out << "# N";
    for (const auto& e : names) out << ' ' << e << "_all " << e << "_all_se " << e << "_dom " << e << "_dom_se";
    out << '\n';
    for (std::size_t n : ns) {
      out << n;
      for (const auto& e : names) {
        auto it = std::find_if(cells.begin(), cells.end(),
                               [&](const MseCell& c) { return c.estimator == e && c.n == n; });
        if (it == cells.end() || it->count == 0) {
          out << " nan nan nan nan";
        } else {
          out << ' ' << format_real(it->mse_all) << ' ' << format_real(it->se_all) << ' '
              << format_real(it->mse_dom) << ' ' << format_real(it->se_dom);
        }
      }
      out << '\n';
    }
  }

  // One gnuplot index block per N, on a shared log-spaced grid.
  for (const bool dominant : {false, true}) {
    auto out = open(dominant ? "cdf_dom.dat" : "cdf_all.dat");
    bool first_block = true;
    for (std::size_t n : ns) {
      double lo = std::numeric_limits<double>::infinity();
      double hi = 0.0;
      for (const auto& r : records) {
        if (r.n != n || !r.ok()) continue;
        const double v = dominant ? r.sq_err_dom : r.sq_err_all;
        if (v > 0.0) lo = std::min(lo, v);
        hi = std::max(hi, v);
      }
      if (!(hi > 0.0)) continue;
      if (!std::isfinite(lo)) lo = hi;
      constexpr int kPoints = 200;
      std::vector<double> grid(kPoints);
      const double a = std::log10(lo);
      const double b = std::log10(hi);
      for (int i = 0; i < kPoints; ++i) grid[i] = std::pow(10.0, a + (b - a) * i / (kPoints - 1));
      grid.back() = hi;

      if (!first_block) out << "\n\n";
      first_block = false;
      out << "# N=" << n << "\n# x";
      std::vector<std::vector<std::pair<double, double>>> curves;
      for (const auto& e : names) {
        std::vector<double> vals;
        for (const auto& r : records)
          if (r.n == n && r.ok() && r.estimator == e) vals.push_back(dominant ? r.sq_err_dom : r.sq_err_all);
        if (vals.empty()) continue;
        out << ' ' << e;
        curves.push_back(empirical_cdf(vals, grid));
      }
      out << '\n';
      for (int i = 0; i < kPoints; ++i) {
        out << format_real(grid[i]);
        for (const auto& c : curves) out << ' ' << format_real(c[i].second);
        out << '\n';
      }
    }
  }
}

void write_seed_log(const std::string& path, std::span<const TrialRecord> records) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::kIo, "cannot open '" + path + "' for writing");
  out << "estimator,N,trial,seed,data_hash\n";
  for (const auto& r : records) {
    char hex[17];
    std::snprintf(hex, sizeof hex, "%016llx", static_cast<unsigned long long>(r.data_hash));
    out << r.estimator << ',' << r.n << ',' << r.trial << ',' << r.seed << ',' << hex << '\n';
  }
  if (!out) throw Error(ErrorCode::kIo, "write to '" + path + "' failed");
}

std::string format_summary(const ExperimentConfig& cfg, std::span<const TrialRecord> records) {
  std::ostringstream os;
  os << "L=" << cfg.length << " S=" << cfg.sparsity << " SNR="
     << (cfg.snr_db ? format_real(*cfg.snr_db) + " dB" : std::string("noiseless"))
     << " trials=" << cfg.trials << " base_seed=" << cfg.base_seed
     << " ds_debias=" << (cfg.ds_debias ? "on" : "off") << "\n\n";
  os << std::left << std::setw(8) << "est" << std::right << std::setw(5) << "N" << std::setw(7)
     << "ok" << std::setw(6) << "fail" << std::setw(14) << "mse_all" << std::setw(12) << "se_all"
     << std::setw(14) << "mse_dom" << std::setw(12) << "nmse_all" << std::setw(14) << "mean_time_s"
     << '\n';
  os << std::scientific << std::setprecision(4);
  for (const auto& c : mse_report(records)) {
    os << std::left << std::setw(8) << c.estimator << std::right << std::setw(5) << c.n
       << std::setw(7) << c.count << std::setw(6) << c.failures << std::setw(14) << c.mse_all
       << std::setw(12) << c.se_all << std::setw(14) << c.mse_dom << std::setw(12) << c.nmse_all
       << std::setw(14) << c.mean_elapsed << '\n';
  }
  os << "\nmean estimator time (wall clock; machine dependent, inflated by parallel workers):\n";
  for (const auto& [name, t] : timing_summary(records)) {
    os << "  " << std::left << std::setw(8) << name << std::right << t << " s\n";
  }
  return os.str();
}

}  // namespace smpc
