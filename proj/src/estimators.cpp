// SPDX-License-Identifier: Apache-2.0

#include "smpc/estimators.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <numeric>
#include <string>

#include "smpc/error.hpp"

namespace smpc {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

void check_observation(const Matrix& x, std::span<const double> y) {
  if (y.size() != x.rows()) {
    throw Error(ErrorCode::kShape, "observation length " + std::to_string(y.size()) +
                                       " != training rows " + std::to_string(x.rows()));
  }
}

// Keeps the `keep` largest-magnitude entries of `full`, zeroing the rest.
std::pair<Vector, SupportSet> prune(const Vector& full, std::size_t keep) {
  SupportSet kept = top_k_indices(full, keep);
  Vector out(full.size(), 0.0);
  for (std::size_t j : kept.indices()) out[j] = full[j];
  return {std::move(out), std::move(kept)};
}

}  // namespace

Estimate estimate_cosamp(const Matrix& x, std::span<const double> y, const CosampConfig& cfg) {
  const auto start = Clock::now();
  check_observation(x, y);
  const std::size_t l = x.cols();
  if (cfg.sparsity < 1 || cfg.sparsity > l) {
    throw Error(ErrorCode::kInvalidArgument, "cosamp: sparsity must lie in [1, L]");
  }
  if (!(cfg.halt_tolerance > 0.0)) {
    throw Error(ErrorCode::kInvalidArgument, "cosamp: halt tolerance must be positive");
  }

  Estimate est;
  est.taps.assign(l, 0.0);
  est.support = SupportSet({}, l);
  const double y_norm = norm2(y);
  if (y_norm == 0.0) {
    est.elapsed_seconds = seconds_since(start);
    return est;
  }

  const std::size_t budget = cfg.iteration_budget();
  const std::size_t proxy_size = std::min(2 * cfg.sparsity, l);
  Vector residual(y.begin(), y.end());
  double previous_residual = y_norm;
  std::size_t stalled = 0;

  while (est.iterations < budget) {
    const Vector proxy = transpose_matvec(x, residual);
    const SupportSet merged = top_k_indices(proxy, proxy_size).merged(est.support);
    const Vector solved = restricted_least_squares(x, merged, y);
    auto [next, kept] = prune(solved, cfg.sparsity);

    const double change = norm2(subtract(next, est.taps));
    est.taps = std::move(next);
    est.support = std::move(kept);
    residual = subtract(y, matvec(x, est.taps));
    const double residual_norm = norm2(residual);
    est.residual_norms.push_back(residual_norm);
    ++est.iterations;

    if (change <= cfg.halt_tolerance) break;
    if (residual_norm <= cfg.exact_fit_tolerance * y_norm) break;
    stalled = residual_norm < previous_residual ? 0 : stalled + 1;
    if (stalled >= cfg.stall_limit) break;
    previous_residual = residual_norm;
  }
  est.elapsed_seconds = seconds_since(start);
  return est;
}

Estimate estimate_omp(const Matrix& x, std::span<const double> y, std::size_t sparsity) {
  const auto start = Clock::now();
  check_observation(x, y);
  const std::size_t l = x.cols();
  if (sparsity > x.rows() || sparsity > l) {
    throw Error(ErrorCode::kInvalidArgument, "omp: sparsity " + std::to_string(sparsity) +
                                                 " exceeds the number of observations");
  }

  Estimate est;
  est.taps.assign(l, 0.0);
  est.support = SupportSet({}, l);
  std::vector<std::size_t> chosen;
  Vector residual(y.begin(), y.end());

  for (std::size_t it = 0; it < sparsity; ++it) {
    const Vector proxy = transpose_matvec(x, residual);
    std::size_t best = l;
    double best_mag = -1.0;
    for (std::size_t j = 0; j < l; ++j) {
      if (std::find(chosen.begin(), chosen.end(), j) != chosen.end()) continue;
      const double mag = std::abs(proxy[j]);
      if (mag > best_mag) {
        best = j;
        best_mag = mag;
      }
    }
    chosen.push_back(best);
    est.support = SupportSet(chosen, l);
    est.taps = restricted_least_squares(x, est.support, y);
    residual = subtract(y, matvec(x, est.taps));
    est.residual_norms.push_back(norm2(residual));
    ++est.iterations;
  }
  est.elapsed_seconds = seconds_since(start);
  return est;
}

Estimate estimate_ls(const Matrix& x, std::span<const double> y) {
  const auto start = Clock::now();
  check_observation(x, y);
  Estimate est;
  est.taps = min_norm_least_squares(x, y);
  std::vector<std::size_t> all(x.cols());
  std::iota(all.begin(), all.end(), std::size_t{0});
  est.support = SupportSet(std::move(all), x.cols());
  est.iterations = 1;
  est.residual_norms.push_back(norm2(subtract(y, matvec(x, est.taps))));
  est.elapsed_seconds = seconds_since(start);
  return est;
}

Estimate estimate_oracle_ls(const Matrix& x, std::span<const double> y,
                            const SupportSet& true_support) {
  const auto start = Clock::now();
  check_observation(x, y);
  Estimate est;
  est.taps = restricted_least_squares(x, true_support, y);
  est.support = SupportSet(true_support.indices(), x.cols());
  est.iterations = 1;
  est.residual_norms.push_back(norm2(subtract(y, matvec(x, est.taps))));
  est.elapsed_seconds = seconds_since(start);
  return est;
}

}  // namespace smpc
