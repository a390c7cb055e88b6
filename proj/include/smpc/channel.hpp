// SPDX-License-Identifier: Apache-2.0
//
// Sparse multipath channel synthesis: S-sparse tap vectors, Rademacher
// Toeplitz training matrices and AWGN observations y = X h + z.

#pragma once

#include <cstdint>
#include <optional>

#include "smpc/linalg.hpp"

namespace smpc {

struct SparseChannel {
  Vector taps;
  SupportSet support;

  std::size_t length() const noexcept { return taps.size(); }
  std::size_t sparsity() const noexcept { return support.size(); }

  /// Builds a channel from a dense tap vector; the support is its nonzeros.
  static SparseChannel from_taps(Vector taps);
};

struct TrainingMatrix {
  Matrix matrix;
  /// The N + L - 1 scaled symbols; entry (i, j) = generator[i - j + L - 1].
  Vector generator;

  std::size_t length() const noexcept { return matrix.rows(); }
  std::size_t channel_length() const noexcept { return matrix.cols(); }
};

struct Observation {
  Vector received;
  double noise_variance = 0.0;
  /// Empty means noiseless.
  std::optional<double> snr_db;
  std::uint64_t noise_seed = 0;

  bool noiseless() const noexcept { return !snr_db.has_value(); }
};

/// S positions uniformly without replacement; magnitudes uniform in
/// [amp_low, amp_high]; signs equiprobable. Requires 1 <= S <= L/2.
SparseChannel generate_sparse_channel(std::size_t length, std::size_t sparsity, double amp_low,
                                      double amp_high, std::uint64_t seed);

/// N x L Toeplitz matrix of i.i.d. +-1/sqrt(N) symbols (unit-norm columns).
TrainingMatrix build_toeplitz_training(std::size_t rows, std::size_t length, std::uint64_t seed);

/// y = X h + z with sigma^2 = ||X h||^2 / (N * 10^(snr_db / 10)).
/// std::nullopt for snr_db gives z = 0.
Observation synthesize_observation(const Matrix& training, const SparseChannel& channel,
                                   std::optional<double> snr_db, std::uint64_t seed);

}  // namespace smpc
