// SPDX-License-Identifier: Apache-2.0

#include "smpc/channel.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "smpc/error.hpp"
#include "smpc/rng.hpp"

namespace smpc {

SparseChannel SparseChannel::from_taps(Vector taps) {
  std::vector<std::size_t> nz;
  for (std::size_t i = 0; i < taps.size(); ++i) {
    if (!std::isfinite(taps[i])) throw Error(ErrorCode::kInvalidArgument, "non-finite tap value");
    if (taps[i] != 0.0) nz.push_back(i);
  }
  SupportSet support(std::move(nz), taps.size());
  return SparseChannel{std::move(taps), std::move(support)};
}

SparseChannel generate_sparse_channel(std::size_t length, std::size_t sparsity, double amp_low,
                                      double amp_high, std::uint64_t seed) {
  if (sparsity < 1 || 2 * sparsity > length) {
    throw Error(ErrorCode::kSparsityViolation,
                "sparsity S = " + std::to_string(sparsity) + " must satisfy 1 <= S <= L/2 (L = " +
                    std::to_string(length) + ")");
  }
  if (!(amp_low > 0.0) || !(amp_low <= amp_high) || !std::isfinite(amp_high)) {
    throw Error(ErrorCode::kInvalidArgument, "tap amplitudes must satisfy 0 < low <= high");
  }
  Rng rng(seed);
  std::vector<std::size_t> positions(length);
  std::iota(positions.begin(), positions.end(), std::size_t{0});
  // Partial Fisher-Yates: the first S slots are a uniform S-subset.
  for (std::size_t i = 0; i < sparsity; ++i) {
    const auto j = i + static_cast<std::size_t>(rng.below(length - i));
    std::swap(positions[i], positions[j]);
  }
  positions.resize(sparsity);
  std::sort(positions.begin(), positions.end());

  Vector taps(length, 0.0);
  for (std::size_t p : positions) {
    const double magnitude = rng.uniform(amp_low, amp_high);
    taps[p] = rng.sign() * magnitude;
  }
  return SparseChannel{std::move(taps), SupportSet(std::move(positions), length)};
}

TrainingMatrix build_toeplitz_training(std::size_t rows, std::size_t length, std::uint64_t seed) {
  if (rows < 1 || rows >= length) {
    throw Error(ErrorCode::kShape, "training length N = " + std::to_string(rows) +
                                       " must satisfy 1 <= N < L (L = " + std::to_string(length) +
                                       ")");
  }
  Rng rng(seed);
  const double scale = 1.0 / std::sqrt(static_cast<double>(rows));
  Vector generator(rows + length - 1);
  for (double& s : generator) s = rng.sign() * scale;

  Matrix m(rows, length);
  for (std::size_t i = 0; i < rows; ++i)
    for (std::size_t j = 0; j < length; ++j) m(i, j) = generator[i + length - 1 - j];
  return TrainingMatrix{std::move(m), std::move(generator)};
}

Observation synthesize_observation(const Matrix& training, const SparseChannel& channel,
                                   std::optional<double> snr_db, std::uint64_t seed) {
  if (training.cols() != channel.length()) {
    throw Error(ErrorCode::kShape, "training has " + std::to_string(training.cols()) +
                                       " columns but the channel has " +
                                       std::to_string(channel.length()) + " taps");
  }
  Observation obs;
  obs.received = matvec(training, channel.taps);
  obs.snr_db = snr_db;
  obs.noise_seed = seed;
  if (!snr_db) return obs;
  if (!std::isfinite(*snr_db)) throw Error(ErrorCode::kInvalidArgument, "SNR must be finite");

  const double energy = dot(obs.received, obs.received);
  if (energy == 0.0) {
    throw Error(ErrorCode::kDegenerateSignal, "clean signal X h is zero; SNR is undefined");
  }
  const auto n = static_cast<double>(training.rows());
  obs.noise_variance = energy / (n * std::pow(10.0, *snr_db / 10.0));
  const double sigma = std::sqrt(obs.noise_variance);
  Rng rng(seed);
  for (double& v : obs.received) v += sigma * rng.normal();
  return obs;
}

}  // namespace smpc
