// SPDX-License-Identifier: Apache-2.0
//
// Training-matrix quality measures: the entrywise coherence sqrt(L) max|X_ij|,
// the training-length lower bound C1 * S * (log L)^4 * mu^2, and restricted
// isometry constants (exhaustive on small instances, sampled otherwise).

#pragma once

#include <cmath>
#include <cstdint>
#include <vector>

#include "smpc/linalg.hpp"

namespace smpc {

/// Threshold on delta_{2S} under which CoSaMP's recovery guarantee applies.
inline const double kRipGate = std::sqrt(2.0) - 1.0;

struct RipReport {
  std::size_t order = 0;
  double delta = 0.0;
  SupportSet worst_support;
  /// True for rip_sample: delta is only a lower bound on the constant.
  bool lower_bound = false;
  std::size_t supports_checked = 0;

  bool violated() const noexcept { return delta >= 1.0; }
};

struct CoherenceReport {
  double mu = 0.0;
  /// max_{i != j} |<x_i, x_j>|, reported alongside for comparison.
  double mutual_coherence = 0.0;
  double bound_rhs = 0.0;
  double c1 = 1.0;
  bool satisfied = false;
};

double coherence_mu(const Matrix& x);
double mutual_coherence(const Matrix& x);

/// c1 * S * (log_base L)^4 * mu^2. Natural log unless `log_base` is given.
double training_length_bound(std::size_t length, std::size_t sparsity, double mu, double c1,
                             double log_base = std::exp(1.0));

CoherenceReport coherence_report(const Matrix& x, std::size_t sparsity, double c1 = 1.0,
                                 double log_base = std::exp(1.0));

/// Largest number of supports ric_bruteforce will enumerate.
inline constexpr double kMaxBruteForceSupports = 1e6;

/// Binomial coefficient as a double (exact well beyond the guard).
double binomial(std::size_t n, std::size_t k);

/// Eigenvalues of a symmetric matrix, ascending (cyclic Jacobi).
Vector symmetric_eigenvalues(const Matrix& sym, double tolerance = 1e-12);

/// Exact delta_S over every S-column subset. Throws kTooLarge past the guard.
RipReport ric_bruteforce(const Matrix& x, std::size_t order);

/// Lower bound on delta_S from `trials` random S-subsets. When trials covers
/// C(L, S) the subsets are enumerated instead, which makes the result exact.
RipReport rip_sample(const Matrix& x, std::size_t order, std::size_t trials, std::uint64_t seed);

}  // namespace smpc
