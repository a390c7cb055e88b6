// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <vector>

#include "smpc/linalg.hpp"

namespace smpc {

/// Output shared by every estimator. `taps` is exactly zero off `support`.
struct Estimate {
  Vector taps;
  SupportSet support;
  std::size_t iterations = 0;
  /// ||y - X h_i|| after each iteration.
  std::vector<double> residual_norms;
  double elapsed_seconds = 0.0;
};

struct CosampConfig {
  std::size_t sparsity = 1;
  /// 0 selects the default budget of 4 * sparsity.
  std::size_t max_iterations = 0;
  /// Halt once ||h_i - h_{i-1}|| falls to this level.
  double halt_tolerance = 1e-4;
  /// Halt after this many consecutive iterations without a residual decrease.
  std::size_t stall_limit = 3;
  /// Halt once ||r_i|| <= this fraction of ||y|| (an exact fit).
  double exact_fit_tolerance = 1e-13;

  std::size_t iteration_budget() const noexcept {
    return max_iterations ? max_iterations : 4 * sparsity;
  }
};

/// Compressive sampling matching pursuit. Each iteration: proxy X^T r, keep
/// its 2S largest entries, merge with the current support, least squares on
/// the merged set, prune to the S largest, update the residual.
Estimate estimate_cosamp(const Matrix& x, std::span<const double> y, const CosampConfig& cfg);

/// Orthogonal matching pursuit with exactly S greedy selections.
Estimate estimate_omp(const Matrix& x, std::span<const double> y, std::size_t sparsity);

/// Minimum-norm least squares over all L taps.
Estimate estimate_ls(const Matrix& x, std::span<const double> y);

/// Least squares on the known true support.
Estimate estimate_oracle_ls(const Matrix& x, std::span<const double> y,
                            const SupportSet& true_support);

}  // namespace smpc
