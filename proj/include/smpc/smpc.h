/* SPDX-License-Identifier: Apache-2.0 */

/*
 * C interface to the sparse multipath channel estimation library.
 *
 * Objects are opaque handles created by *_create / *_generate / *_load calls
 * and released with the matching *_destroy. Every fallible call returns an
 * smpc_status; on failure, smpc_last_error() describes the failure for the
 * calling thread until its next library call.
 */

#ifndef SMPC_SMPC_H
#define SMPC_SMPC_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#define SMPC_API __declspec(dllexport)
#else
#define SMPC_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum smpc_status {
  SMPC_OK = 0,
  SMPC_ERR_INVALID_ARGUMENT = 1,
  SMPC_ERR_SHAPE = 2,
  SMPC_ERR_SPARSITY = 3,
  SMPC_ERR_OVERDETERMINED_SUPPORT = 4,
  SMPC_ERR_SINGULAR_SUPPORT = 5,
  SMPC_ERR_SINGULAR_SYSTEM = 6,
  SMPC_ERR_DEGENERATE_SIGNAL = 7,
  SMPC_ERR_DOMAIN = 8,
  SMPC_ERR_TOO_LARGE = 9,
  SMPC_ERR_IO = 10,
  SMPC_ERR_PARSE = 11,
  SMPC_ERR_INFEASIBLE = 12,
  SMPC_ERR_UNBOUNDED = 13,
  SMPC_ERR_PIVOT_LIMIT = 14,
  SMPC_ERR_INTERRUPTED = 15,
  SMPC_ERR_INTERNAL = 99
} smpc_status;

typedef struct smpc_matrix smpc_matrix;
typedef struct smpc_channel smpc_channel;
typedef struct smpc_estimate smpc_estimate;
typedef struct smpc_bench_config smpc_bench_config;
typedef struct smpc_bench_result smpc_bench_result;

SMPC_API const char* smpc_version(void);
SMPC_API const char* smpc_status_name(smpc_status status);
/* Message for the last failed call on this thread ("" if none). */
SMPC_API const char* smpc_last_error(void);

/* ---- matrices ---------------------------------------------------------- */

SMPC_API smpc_status smpc_matrix_create(size_t rows, size_t cols, const double* row_major,
                                        smpc_matrix** out);
SMPC_API smpc_status smpc_matrix_identity(size_t n, smpc_matrix** out);
/* N x L Rademacher Toeplitz training matrix with entries +-1/sqrt(N). */
SMPC_API smpc_status smpc_training_generate(size_t rows, size_t length, uint64_t seed,
                                            smpc_matrix** out);
SMPC_API smpc_status smpc_matrix_load_csv(const char* path, smpc_matrix** out);
SMPC_API smpc_status smpc_matrix_save_csv(const smpc_matrix* m, const char* path);
SMPC_API size_t smpc_matrix_rows(const smpc_matrix* m);
SMPC_API size_t smpc_matrix_cols(const smpc_matrix* m);
/* Row-major entries, valid until the matrix is destroyed. */
SMPC_API const double* smpc_matrix_data(const smpc_matrix* m);
SMPC_API void smpc_matrix_destroy(smpc_matrix* m);

/* ---- channels ---------------------------------------------------------- */

SMPC_API smpc_status smpc_channel_generate(size_t length, size_t sparsity, double amp_low,
                                           double amp_high, uint64_t seed, smpc_channel** out);
/* Dense taps; the support is the set of nonzero entries. */
SMPC_API smpc_status smpc_channel_create(size_t length, const double* taps, smpc_channel** out);
SMPC_API smpc_status smpc_channel_load(const char* path, smpc_channel** out);
SMPC_API smpc_status smpc_channel_save(const smpc_channel* c, const char* path);
SMPC_API size_t smpc_channel_length(const smpc_channel* c);
SMPC_API size_t smpc_channel_sparsity(const smpc_channel* c);
SMPC_API const double* smpc_channel_taps(const smpc_channel* c);
SMPC_API const size_t* smpc_channel_support(const smpc_channel* c);
SMPC_API void smpc_channel_destroy(smpc_channel* c);

/* ---- observations ------------------------------------------------------ */

/* y = X h + z. With noiseless != 0 the SNR is ignored and z = 0.
 * received must hold rows(X) values; noise_variance may be NULL. */
SMPC_API smpc_status smpc_observe(const smpc_matrix* x, const smpc_channel* h, double snr_db,
                                  int noiseless, uint64_t seed, double* received,
                                  double* noise_variance);
/* noise_variance < 0 omits the header comment. */
SMPC_API smpc_status smpc_observation_save(const char* path, const double* received, size_t n,
                                           double noise_variance);
/* Allocates *received (release with smpc_free); *noise_variance is -1 when
 * the file does not record one. */
SMPC_API smpc_status smpc_observation_load(const char* path, double** received, size_t* n,
                                           double* noise_variance);
SMPC_API void smpc_free(void* p);

/* Seeds used by the bench harness for trial `trial` at training length n:
 * which = 0 channel, 1 training matrix, 2 noise. */
SMPC_API uint64_t smpc_trial_seed(uint64_t base_seed, size_t trial, int which, size_t n);

/* ---- estimators -------------------------------------------------------- */

/* max_iterations = 0 selects 4 * sparsity; halt_tolerance <= 0 selects 1e-4. */
SMPC_API smpc_status smpc_estimate_cosamp(const smpc_matrix* x, const double* y, size_t n,
                                          size_t sparsity, size_t max_iterations,
                                          double halt_tolerance, smpc_estimate** out);
SMPC_API smpc_status smpc_estimate_omp(const smpc_matrix* x, const double* y, size_t n,
                                       size_t sparsity, smpc_estimate** out);
SMPC_API smpc_status smpc_estimate_ls(const smpc_matrix* x, const double* y, size_t n,
                                      smpc_estimate** out);
SMPC_API smpc_status smpc_estimate_oracle(const smpc_matrix* x, const double* y, size_t n,
                                          const size_t* support, size_t support_size,
                                          smpc_estimate** out);
/* lambda < 0 selects sigma * sqrt(2 ln L). */
SMPC_API smpc_status smpc_estimate_dantzig(const smpc_matrix* x, const double* y, size_t n,
                                           double sigma, size_t sparsity, double lambda,
                                           int debias, smpc_estimate** out);
SMPC_API size_t smpc_estimate_length(const smpc_estimate* e);
SMPC_API const double* smpc_estimate_taps(const smpc_estimate* e);
SMPC_API size_t smpc_estimate_support_size(const smpc_estimate* e);
SMPC_API const size_t* smpc_estimate_support(const smpc_estimate* e);
SMPC_API size_t smpc_estimate_iterations(const smpc_estimate* e);
SMPC_API size_t smpc_estimate_residual_count(const smpc_estimate* e);
SMPC_API const double* smpc_estimate_residuals(const smpc_estimate* e);
SMPC_API double smpc_estimate_elapsed(const smpc_estimate* e);
SMPC_API void smpc_estimate_destroy(smpc_estimate* e);

/* ---- diagnostics ------------------------------------------------------- */

SMPC_API smpc_status smpc_coherence_mu(const smpc_matrix* x, double* mu);
SMPC_API smpc_status smpc_mutual_coherence(const smpc_matrix* x, double* value);
/* log_base <= 0 selects the natural log. */
SMPC_API smpc_status smpc_training_length_bound(size_t length, size_t sparsity, double mu,
                                                double c1, double log_base, double* bound);
/* worst_support (may be NULL) receives `order` indices. */
SMPC_API smpc_status smpc_ric_exact(const smpc_matrix* x, size_t order, double* delta,
                                    size_t* worst_support);
/* *is_lower_bound is set to 0 when the sample covered every support. */
SMPC_API smpc_status smpc_ric_sample(const smpc_matrix* x, size_t order, size_t trials,
                                     uint64_t seed, double* delta, size_t* worst_support,
                                     int* is_lower_bound);
SMPC_API double smpc_rip_gate(void);

/* ---- benchmark --------------------------------------------------------- */

SMPC_API smpc_status smpc_bench_config_create(smpc_bench_config** out);
SMPC_API smpc_status smpc_bench_config_load(const char* path, smpc_bench_config** out);
/* Same keys as the config file. */
SMPC_API smpc_status smpc_bench_config_set(smpc_bench_config* cfg, const char* key,
                                           const char* value);
SMPC_API smpc_status smpc_bench_config_validate(const smpc_bench_config* cfg);
SMPC_API void smpc_bench_config_destroy(smpc_bench_config* cfg);

/* Async-signal-safe: asks any running smpc_bench_run to stop after its
 * current cells. */
SMPC_API void smpc_bench_request_stop(void);
SMPC_API void smpc_bench_clear_stop(void);

/* Returns SMPC_ERR_INTERRUPTED (with *out holding the finished cells) when
 * stopped early. */
SMPC_API smpc_status smpc_bench_run(const smpc_bench_config* cfg, size_t jobs,
                                    smpc_bench_result** out);
SMPC_API size_t smpc_bench_result_records(const smpc_bench_result* r);
SMPC_API size_t smpc_bench_result_failures(const smpc_bench_result* r);
SMPC_API smpc_status smpc_bench_write_csv(const smpc_bench_result* r, const char* path);
SMPC_API smpc_status smpc_bench_write_plot_data(const smpc_bench_result* r, const char* directory);
SMPC_API smpc_status smpc_bench_write_seed_log(const smpc_bench_result* r, const char* path);
/* Human-readable table; owned by the result. */
SMPC_API const char* smpc_bench_summary(const smpc_bench_result* r);
SMPC_API void smpc_bench_result_destroy(smpc_bench_result* r);

#ifdef __cplusplus
}
#endif

#endif /* SMPC_SMPC_H */
