// SPDX-License-Identifier: Apache-2.0

#include "smpc/smpc.h"

#include <atomic>
#include <cstdlib>
#include <cstring>
#include <exception>
#include <new>
#include <string>

#include "smpc/bench.hpp"
#include "smpc/channel.hpp"
#include "smpc/dantzig.hpp"
#include "smpc/diagnostics.hpp"
#include "smpc/error.hpp"
#include "smpc/estimators.hpp"
#include "smpc/io.hpp"
#include "smpc/rng.hpp"

struct smpc_matrix {
  smpc::Matrix m;
};
struct smpc_channel {
  smpc::SparseChannel c;
};
struct smpc_estimate {
  smpc::Estimate e;
};
struct smpc_bench_config {
  smpc::ExperimentConfig cfg;
};
struct smpc_bench_result {
  smpc::ExperimentConfig cfg;
  smpc::ExperimentRun run;
  std::string summary;
};

namespace {

thread_local std::string g_last_error;
std::atomic<bool> g_stop{false};

smpc_status map_code(smpc::ErrorCode code) {
  using smpc::ErrorCode;
  switch (code) {
    case ErrorCode::kInvalidArgument: return SMPC_ERR_INVALID_ARGUMENT;
    case ErrorCode::kShape: return SMPC_ERR_SHAPE;
    case ErrorCode::kSparsityViolation: return SMPC_ERR_SPARSITY;
    case ErrorCode::kOverdeterminedSupport: return SMPC_ERR_OVERDETERMINED_SUPPORT;
    case ErrorCode::kSingularSupport: return SMPC_ERR_SINGULAR_SUPPORT;
    case ErrorCode::kSingularSystem: return SMPC_ERR_SINGULAR_SYSTEM;
    case ErrorCode::kDegenerateSignal: return SMPC_ERR_DEGENERATE_SIGNAL;
    case ErrorCode::kDomain: return SMPC_ERR_DOMAIN;
    case ErrorCode::kTooLarge: return SMPC_ERR_TOO_LARGE;
    case ErrorCode::kIo: return SMPC_ERR_IO;
    case ErrorCode::kParse: return SMPC_ERR_PARSE;
    case ErrorCode::kInfeasible: return SMPC_ERR_INFEASIBLE;
    case ErrorCode::kUnbounded: return SMPC_ERR_UNBOUNDED;
    case ErrorCode::kPivotLimit: return SMPC_ERR_PIVOT_LIMIT;
    case ErrorCode::kInterrupted: return SMPC_ERR_INTERRUPTED;
  }
  return SMPC_ERR_INTERNAL;
}

smpc_status fail(smpc_status s, const char* msg) {
  g_last_error = msg;
  return s;
}

// Runs `body`, translating exceptions into status codes.
template <class F>
smpc_status guarded(F&& body) {
  g_last_error.clear();
  try {
    body();
    return SMPC_OK;
  } catch (const smpc::Error& e) {
    return fail(map_code(e.code()), e.what());
  } catch (const std::bad_alloc&) {
    return fail(SMPC_ERR_INTERNAL, "out of memory");
  } catch (const std::exception& e) {
    return fail(SMPC_ERR_INTERNAL, e.what());
  } catch (...) {
    return fail(SMPC_ERR_INTERNAL, "unknown exception");
  }
}

void require(const void* p, const char* what) {
  if (!p) throw smpc::Error(smpc::ErrorCode::kInvalidArgument, std::string(what) + " is null");
}

std::span<const double> observation(const smpc_matrix* x, const double* y, size_t n) {
  require(x, "matrix");
  if (n > 0) require(y, "observation");
  return {y, n};
}

template <class F>
smpc_status make_estimate(smpc_estimate** out, F&& run) {
  return guarded([&] {
    require(out, "out");
    *out = nullptr;
    *out = new smpc_estimate{run()};
  });
}

}  // namespace

extern "C" {

const char* smpc_version(void) { return "1.0.0"; }

const char* smpc_status_name(smpc_status status) {
  switch (status) {
    case SMPC_OK: return "ok";
    case SMPC_ERR_INVALID_ARGUMENT: return "invalid_argument";
    case SMPC_ERR_SHAPE: return "shape";
    case SMPC_ERR_SPARSITY: return "sparsity_violation";
    case SMPC_ERR_OVERDETERMINED_SUPPORT: return "overdetermined_support";
    case SMPC_ERR_SINGULAR_SUPPORT: return "singular_support";
    case SMPC_ERR_SINGULAR_SYSTEM: return "singular_system";
    case SMPC_ERR_DEGENERATE_SIGNAL: return "degenerate_signal";
    case SMPC_ERR_DOMAIN: return "domain";
    case SMPC_ERR_TOO_LARGE: return "too_large";
    case SMPC_ERR_IO: return "io";
    case SMPC_ERR_PARSE: return "parse";
    case SMPC_ERR_INFEASIBLE: return "infeasible";
    case SMPC_ERR_UNBOUNDED: return "unbounded";
    case SMPC_ERR_PIVOT_LIMIT: return "pivot_limit";
    case SMPC_ERR_INTERRUPTED: return "interrupted";
    case SMPC_ERR_INTERNAL: return "internal";
  }
  return "unknown";
}

const char* smpc_last_error(void) { return g_last_error.c_str(); }

smpc_status smpc_matrix_create(size_t rows, size_t cols, const double* row_major, smpc_matrix** out) {
  return guarded([&] {
    require(out, "out");
    *out = nullptr;
    if (rows * cols > 0) require(row_major, "row_major");
    std::vector<double> data(row_major, row_major + rows * cols);
    *out = new smpc_matrix{smpc::Matrix(rows, cols, std::move(data))};
  });
}

smpc_status smpc_matrix_identity(size_t n, smpc_matrix** out) {
  return guarded([&] {
    require(out, "out");
    *out = new smpc_matrix{smpc::Matrix::identity(n)};
  });
}

smpc_status smpc_training_generate(size_t rows, size_t length, uint64_t seed, smpc_matrix** out) {
  return guarded([&] {
    require(out, "out");
    *out = nullptr;
    *out = new smpc_matrix{smpc::build_toeplitz_training(rows, length, seed).matrix};
  });
}

smpc_status smpc_matrix_load_csv(const char* path, smpc_matrix** out) {
  return guarded([&] {
    require(out, "out");
    require(path, "path");
    *out = nullptr;
    *out = new smpc_matrix{smpc::load_matrix_csv(path)};
  });
}

smpc_status smpc_matrix_save_csv(const smpc_matrix* m, const char* path) {
  return guarded([&] {
    require(m, "matrix");
    require(path, "path");
    smpc::save_matrix_csv(path, m->m);
  });
}

size_t smpc_matrix_rows(const smpc_matrix* m) { return m ? m->m.rows() : 0; }
size_t smpc_matrix_cols(const smpc_matrix* m) { return m ? m->m.cols() : 0; }
const double* smpc_matrix_data(const smpc_matrix* m) { return m ? m->m.data().data() : nullptr; }
void smpc_matrix_destroy(smpc_matrix* m) { delete m; }

smpc_status smpc_channel_generate(size_t length, size_t sparsity, double amp_low, double amp_high,
                                  uint64_t seed, smpc_channel** out) {
  return guarded([&] {
    require(out, "out");
    *out = nullptr;
    *out = new smpc_channel{smpc::generate_sparse_channel(length, sparsity, amp_low, amp_high, seed)};
  });
}

smpc_status smpc_channel_create(size_t length, const double* taps, smpc_channel** out) {
  return guarded([&] {
    require(out, "out");
    *out = nullptr;
    if (length > 0) require(taps, "taps");
    *out = new smpc_channel{smpc::SparseChannel::from_taps(smpc::Vector(taps, taps + length))};
  });
}

smpc_status smpc_channel_load(const char* path, smpc_channel** out) {
  return guarded([&] {
    require(out, "out");
    require(path, "path");
    *out = nullptr;
    *out = new smpc_channel{smpc::load_channel(path)};
  });
}

smpc_status smpc_channel_save(const smpc_channel* c, const char* path) {
  return guarded([&] {
    require(c, "channel");
    require(path, "path");
    smpc::save_channel(path, c->c);
  });
}

size_t smpc_channel_length(const smpc_channel* c) { return c ? c->c.length() : 0; }
size_t smpc_channel_sparsity(const smpc_channel* c) { return c ? c->c.sparsity() : 0; }
const double* smpc_channel_taps(const smpc_channel* c) { return c ? c->c.taps.data() : nullptr; }
const size_t* smpc_channel_support(const smpc_channel* c) {
  return c ? c->c.support.indices().data() : nullptr;
}
void smpc_channel_destroy(smpc_channel* c) { delete c; }

smpc_status smpc_observe(const smpc_matrix* x, const smpc_channel* h, double snr_db, int noiseless,
                         uint64_t seed, double* received, double* noise_variance) {
  return guarded([&] {
    require(x, "matrix");
    require(h, "channel");
    require(received, "received");
    std::optional<double> snr;
    if (!noiseless) snr = snr_db;
    const auto obs = smpc::synthesize_observation(x->m, h->c, snr, seed);
    std::copy(obs.received.begin(), obs.received.end(), received);
    if (noise_variance) *noise_variance = obs.noise_variance;
  });
}

smpc_status smpc_observation_save(const char* path, const double* received, size_t n,
                                  double noise_variance) {
  return guarded([&] {
    require(path, "path");
    if (n > 0) require(received, "received");
    std::optional<double> nv;
    if (noise_variance >= 0.0) nv = noise_variance;
    smpc::save_observation(path, smpc::Vector(received, received + n), nv);
  });
}

smpc_status smpc_observation_load(const char* path, double** received, size_t* n,
                                  double* noise_variance) {
  return guarded([&] {
    require(path, "path");
    require(received, "received");
    require(n, "n");
    *received = nullptr;
    *n = 0;
    const auto obs = smpc::load_observation(path);
    auto* buf = static_cast<double*>(std::malloc(obs.received.size() * sizeof(double)));
    if (!buf) throw std::bad_alloc();
    std::copy(obs.received.begin(), obs.received.end(), buf);
    *received = buf;
    *n = obs.received.size();
    if (noise_variance) *noise_variance = obs.noise_variance.value_or(-1.0);
  });
}

void smpc_free(void* p) { std::free(p); }

uint64_t smpc_trial_seed(uint64_t base_seed, size_t trial, int which, size_t n) {
  const uint64_t t = smpc::trial_seed(base_seed, trial);
  switch (which) {
    case 0: return smpc::derive_seed(t, 1);
    case 1: return smpc::derive_seed(t, 2, n);
    default: return smpc::derive_seed(t, 3, n);
  }
}

smpc_status smpc_estimate_cosamp(const smpc_matrix* x, const double* y, size_t n, size_t sparsity,
                                 size_t max_iterations, double halt_tolerance, smpc_estimate** out) {
  return make_estimate(out, [&] {
    const auto obs = observation(x, y, n);
    smpc::CosampConfig cfg;
    cfg.sparsity = sparsity;
    cfg.max_iterations = max_iterations;
    if (halt_tolerance > 0.0) cfg.halt_tolerance = halt_tolerance;
    return smpc::estimate_cosamp(x->m, obs, cfg);
  });
}

smpc_status smpc_estimate_omp(const smpc_matrix* x, const double* y, size_t n, size_t sparsity,
                              smpc_estimate** out) {
  return make_estimate(out, [&] {
    const auto obs = observation(x, y, n);
    return smpc::estimate_omp(x->m, obs, sparsity);
  });
}

smpc_status smpc_estimate_ls(const smpc_matrix* x, const double* y, size_t n, smpc_estimate** out) {
  return make_estimate(out, [&] {
    const auto obs = observation(x, y, n);
    return smpc::estimate_ls(x->m, obs);
  });
}

smpc_status smpc_estimate_oracle(const smpc_matrix* x, const double* y, size_t n,
                                 const size_t* support, size_t support_size, smpc_estimate** out) {
  return make_estimate(out, [&] {
    const auto obs = observation(x, y, n);
    if (support_size > 0) require(support, "support");
    smpc::SupportSet s(std::vector<std::size_t>(support, support + support_size), x->m.cols());
    return smpc::estimate_oracle_ls(x->m, obs, s);
  });
}

smpc_status smpc_estimate_dantzig(const smpc_matrix* x, const double* y, size_t n, double sigma,
                                  size_t sparsity, double lambda, int debias, smpc_estimate** out) {
  return make_estimate(out, [&] {
    const auto obs = observation(x, y, n);
    smpc::DantzigConfig cfg;
    if (lambda >= 0.0) cfg.lambda = lambda;
    cfg.debias = debias != 0;
    return smpc::estimate_dantzig(x->m, obs, sigma, sparsity, cfg);
  });
}

size_t smpc_estimate_length(const smpc_estimate* e) { return e ? e->e.taps.size() : 0; }
const double* smpc_estimate_taps(const smpc_estimate* e) { return e ? e->e.taps.data() : nullptr; }
size_t smpc_estimate_support_size(const smpc_estimate* e) { return e ? e->e.support.size() : 0; }
const size_t* smpc_estimate_support(const smpc_estimate* e) {
  return e ? e->e.support.indices().data() : nullptr;
}
size_t smpc_estimate_iterations(const smpc_estimate* e) { return e ? e->e.iterations : 0; }
size_t smpc_estimate_residual_count(const smpc_estimate* e) {
  return e ? e->e.residual_norms.size() : 0;
}
const double* smpc_estimate_residuals(const smpc_estimate* e) {
  return e ? e->e.residual_norms.data() : nullptr;
}
double smpc_estimate_elapsed(const smpc_estimate* e) { return e ? e->e.elapsed_seconds : 0.0; }
void smpc_estimate_destroy(smpc_estimate* e) { delete e; }

smpc_status smpc_coherence_mu(const smpc_matrix* x, double* mu) {
  return guarded([&] {
    require(x, "matrix");
    require(mu, "mu");
    *mu = smpc::coherence_mu(x->m);
  });
}

smpc_status smpc_mutual_coherence(const smpc_matrix* x, double* value) {
  return guarded([&] {
    require(x, "matrix");
    require(value, "value");
    *value = smpc::mutual_coherence(x->m);
  });
}

smpc_status smpc_training_length_bound(size_t length, size_t sparsity, double mu, double c1,
                                       double log_base, double* bound) {
  return guarded([&] {
    require(bound, "bound");
    *bound = log_base > 0.0 ? smpc::training_length_bound(length, sparsity, mu, c1, log_base)
                            : smpc::training_length_bound(length, sparsity, mu, c1);
  });
}

smpc_status smpc_ric_exact(const smpc_matrix* x, size_t order, double* delta, size_t* worst_support) {
  return guarded([&] {
    require(x, "matrix");
    require(delta, "delta");
    const auto r = smpc::ric_bruteforce(x->m, order);
    *delta = r.delta;
    if (worst_support) std::copy(r.worst_support.indices().begin(), r.worst_support.indices().end(), worst_support);
  });
}

smpc_status smpc_ric_sample(const smpc_matrix* x, size_t order, size_t trials, uint64_t seed,
                            double* delta, size_t* worst_support, int* is_lower_bound) {
  return guarded([&] {
    require(x, "matrix");
    require(delta, "delta");
    const auto r = smpc::rip_sample(x->m, order, trials, seed);
    *delta = r.delta;
    if (worst_support) std::copy(r.worst_support.indices().begin(), r.worst_support.indices().end(), worst_support);
    if (is_lower_bound) *is_lower_bound = r.lower_bound ? 1 : 0;
  });
}

double smpc_rip_gate(void) { return smpc::kRipGate; }

smpc_status smpc_bench_config_create(smpc_bench_config** out) {
  return guarded([&] {
    require(out, "out");
    *out = new smpc_bench_config{};
  });
}

smpc_status smpc_bench_config_load(const char* path, smpc_bench_config** out) {
  return guarded([&] {
    require(out, "out");
    require(path, "path");
    *out = nullptr;
    *out = new smpc_bench_config{smpc::load_config(path)};
  });
}

smpc_status smpc_bench_config_set(smpc_bench_config* cfg, const char* key, const char* value) {
  return guarded([&] {
    require(cfg, "config");
    require(key, "key");
    require(value, "value");
    smpc::set_config_value(cfg->cfg, key, value);
  });
}

smpc_status smpc_bench_config_validate(const smpc_bench_config* cfg) {
  return guarded([&] {
    require(cfg, "config");
    cfg->cfg.validate();
  });
}

void smpc_bench_config_destroy(smpc_bench_config* cfg) { delete cfg; }

void smpc_bench_request_stop(void) { g_stop.store(true, std::memory_order_relaxed); }
void smpc_bench_clear_stop(void) { g_stop.store(false, std::memory_order_relaxed); }

smpc_status smpc_bench_run(const smpc_bench_config* cfg, size_t jobs, smpc_bench_result** out) {
  bool interrupted = false;
  const smpc_status s = guarded([&] {
    require(cfg, "config");
    require(out, "out");
    *out = nullptr;
    smpc::RunOptions opts;
    opts.jobs = jobs;
    opts.cancel = &g_stop;
    auto result = new smpc_bench_result{cfg->cfg, smpc::run_experiment(cfg->cfg, opts), {}};
    result->summary = smpc::format_summary(result->cfg, result->run.records);
    interrupted = result->run.interrupted;
    *out = result;
  });
  if (s == SMPC_OK && interrupted) {
    return fail(SMPC_ERR_INTERRUPTED, "benchmark stopped before all trials completed");
  }
  return s;
}

size_t smpc_bench_result_records(const smpc_bench_result* r) { return r ? r->run.records.size() : 0; }
size_t smpc_bench_result_failures(const smpc_bench_result* r) { return r ? r->run.failures() : 0; }

smpc_status smpc_bench_write_csv(const smpc_bench_result* r, const char* path) {
  return guarded([&] {
    require(r, "result");
    require(path, "path");
    smpc::write_csv(std::string(path), r->run.records);
  });
}

smpc_status smpc_bench_write_plot_data(const smpc_bench_result* r, const char* directory) {
  return guarded([&] {
    require(r, "result");
    require(directory, "directory");
    smpc::write_plot_data(directory, r->run.records);
  });
}

smpc_status smpc_bench_write_seed_log(const smpc_bench_result* r, const char* path) {
  return guarded([&] {
    require(r, "result");
    require(path, "path");
    smpc::write_seed_log(path, r->run.records);
  });
}

const char* smpc_bench_summary(const smpc_bench_result* r) { return r ? r->summary.c_str() : ""; }
void smpc_bench_result_destroy(smpc_bench_result* r) { delete r; }

}  // extern "C"
