// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>

#include <cmath>
#include <sstream>

#include "smpc/channel.hpp"
#include "smpc/error.hpp"
#include "smpc/io.hpp"
#include "smpc/rng.hpp"

using namespace smpc;

TEST_CASE("rng is reproducible and its distributions are sane") {
  Rng a(42), b(42);
  for (int i = 0; i < 100; ++i) CHECK(a.next() == b.next());

  Rng r(7);
  double sum = 0.0, sq = 0.0;
  constexpr int kDraws = 200000;
  for (int i = 0; i < kDraws; ++i) {
    const double z = r.normal();
    sum += z;
    sq += z * z;
  }
  CHECK(std::abs(sum / kDraws) < 0.01);
  CHECK(std::abs(sq / kDraws - 1.0) < 0.02);

  for (int i = 0; i < 1000; ++i) CHECK(r.below(7) < 7);
  CHECK(r.uniform(0.5, 0.5) == 0.5);
  CHECK(derive_seed(1, 2, 3) != derive_seed(1, 2, 4));
}

TEST_CASE("generate_sparse_channel") {
  const SparseChannel h = generate_sparse_channel(50, 5, 0.2, 1.0, 99);
  CHECK(h.length() == 50);
  CHECK(h.sparsity() == 5);
  std::size_t nonzero = 0;
  for (std::size_t j = 0; j < 50; ++j) {
    if (h.taps[j] == 0.0) {
      CHECK_FALSE(h.support.contains(j));
      continue;
    }
    ++nonzero;
    CHECK(h.support.contains(j));
    CHECK(std::abs(h.taps[j]) >= 0.2);
    CHECK(std::abs(h.taps[j]) <= 1.0);
  }
  CHECK(nonzero == 5);

  const SparseChannel one = generate_sparse_channel(10, 1, 0.5, 0.5, 3);
  CHECK(std::abs(one.taps[one.support.indices()[0]]) == 0.5);

  const SparseChannel again = generate_sparse_channel(50, 5, 0.2, 1.0, 99);
  CHECK(again.taps == h.taps);

  try {
    generate_sparse_channel(50, 26, 0.2, 1.0, 1);
    FAIL("expected sparsity violation");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kSparsityViolation);
  }
  CHECK_THROWS_AS(generate_sparse_channel(10, 2, 0.0, 1.0, 1), Error);
}

TEST_CASE("channel support is uniform over positions") {
  constexpr std::size_t kL = 20, kS = 4, kSeeds = 10000;
  std::vector<int> hits(kL, 0);
  std::size_t plus = 0;
  for (std::size_t s = 0; s < kSeeds; ++s) {
    const auto h = generate_sparse_channel(kL, kS, 0.2, 1.0, s);
    REQUIRE(h.sparsity() == kS);
    for (std::size_t j : h.support.indices()) {
      ++hits[j];
      if (h.taps[j] > 0) ++plus;
    }
  }
  const double p = static_cast<double>(kS) / kL;
  const double mean = p * kSeeds;
  const double sd = std::sqrt(kSeeds * p * (1 - p));
  for (std::size_t j = 0; j < kL; ++j) {
    CHECK(std::abs(hits[j] - mean) <= 3 * sd);
  }
  const double taps = static_cast<double>(kS * kSeeds);
  CHECK(std::abs(static_cast<double>(plus) - taps / 2) <= 3 * std::sqrt(taps / 4));
}

TEST_CASE("build_toeplitz_training") {
  const TrainingMatrix x = build_toeplitz_training(15, 50, 5);
  CHECK(x.matrix.rows() == 15);
  CHECK(x.matrix.cols() == 50);
  CHECK(x.generator.size() == 15 + 50 - 1);
  const double entry = 1.0 / std::sqrt(15.0);
  for (double v : x.matrix.data()) CHECK(std::abs(v) == entry);
  for (std::size_t j = 0; j < 50; ++j) CHECK(std::abs(norm2(x.matrix.column(j)) - 1.0) <= 1e-12);

  const TrainingMatrix small = build_toeplitz_training(2, 3, 8);
  CHECK(small.matrix(0, 0) == small.matrix(1, 1));
  CHECK(small.matrix(0, 1) == small.matrix(1, 2));

  try {
    build_toeplitz_training(50, 50, 1);
    FAIL("expected shape error");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kShape);
  }
}

TEST_CASE("toeplitz property holds on every small shape") {
  for (std::size_t l = 2; l <= 9; ++l) {
    for (std::size_t n = 1; n < l; ++n) {
      const TrainingMatrix t = build_toeplitz_training(n, l, n * 100 + l);
      for (std::size_t i = 0; i + 1 < n; ++i)
        for (std::size_t j = 0; j + 1 < l; ++j) CHECK(t.matrix(i, j) == t.matrix(i + 1, j + 1));
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < l; ++j) CHECK(t.matrix(i, j) == t.generator[i - j + l - 1]);
    }
  }
}

TEST_CASE("synthesize_observation") {
  const TrainingMatrix x = build_toeplitz_training(10, 20, 3);
  const SparseChannel h = generate_sparse_channel(20, 3, 0.2, 1.0, 4);

  const Observation clean = synthesize_observation(x.matrix, h, std::nullopt, 1);
  CHECK(clean.noiseless());
  CHECK(clean.noise_variance == 0.0);
  CHECK(clean.received == matvec(x.matrix, h.taps));

  // ||Xh||^2 = N = 2 here.
  Vector taps(4, 0.0);
  taps[0] = taps[2] = 1.0;
  const Matrix wide(2, 4, {1, 0, 0, 0, 0, 0, 1, 0});
  const Observation tenth = synthesize_observation(wide, SparseChannel::from_taps(taps), 10.0, 2);
  CHECK(tenth.noise_variance == doctest::Approx(0.1).epsilon(1e-14));

  const Observation a = synthesize_observation(x.matrix, h, 10.0, 77);
  const Observation b = synthesize_observation(x.matrix, h, 10.0, 77);
  CHECK(a.received == b.received);

  CHECK_THROWS_AS(synthesize_observation(Matrix(10, 19, 0.5), h, 10.0, 1), Error);
  const SparseChannel zero = SparseChannel::from_taps(Vector(20, 0.0));
  try {
    synthesize_observation(x.matrix, zero, 10.0, 1);
    FAIL("expected degenerate-signal error");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kDegenerateSignal);
  }
}

TEST_CASE("empirical noise variance matches sigma^2") {
  // One column of ones scaled so that ||Xh||^2 = N; 1e5 samples.
  constexpr std::size_t kN = 100000;
  const Matrix x(kN, 2, [] {
    std::vector<double> d(kN * 2, 0.0);
    for (std::size_t i = 0; i < kN; ++i) d[2 * i] = 1.0;
    return d;
  }());
  const SparseChannel h = SparseChannel::from_taps(Vector{1.0, 0.0});
  const Observation obs = synthesize_observation(x, h, 10.0, 2024);
  CHECK(obs.noise_variance == doctest::Approx(0.1));
  double sum = 0.0, sq = 0.0;
  for (double v : obs.received) {
    sum += v - 1.0;
    sq += (v - 1.0) * (v - 1.0);
  }
  const double mean = sum / kN;
  const double var = sq / kN - mean * mean;
  CHECK(std::abs(var - obs.noise_variance) <= 0.05 * obs.noise_variance);
}

TEST_CASE("channel and matrix files parse back exactly") {
  const SparseChannel h = generate_sparse_channel(30, 4, 0.2, 1.0, 6);
  std::stringstream cs;
  write_channel(cs, h);
  CHECK(cs.str().rfind("L=30 S=4\n", 0) == 0);
  const SparseChannel back = read_channel(cs);
  CHECK(back.taps == h.taps);
  CHECK(back.support == h.support);

  const TrainingMatrix x = build_toeplitz_training(7, 30, 6);
  std::stringstream ms;
  write_matrix_csv(ms, x.matrix);
  CHECK(read_matrix_csv(ms) == x.matrix);
}

TEST_CASE("file parse errors carry line numbers") {
  std::stringstream bad_header("L=5\n");
  CHECK_THROWS_WITH_AS(read_channel(bad_header, "c.txt"), doctest::Contains("c.txt:1:"), Error);

  std::stringstream bad_tap("L=5 S=1\n7,0.5\n");
  CHECK_THROWS_WITH_AS(read_channel(bad_tap, "c.txt"), doctest::Contains("c.txt:2:"), Error);

  std::stringstream wrong_count("L=5 S=2\n1,0.5\n");
  CHECK_THROWS_AS(read_channel(wrong_count), Error);

  std::stringstream ragged("1,2\n3\n");
  CHECK_THROWS_WITH_AS(read_matrix_csv(ragged, "m.csv"), doctest::Contains("m.csv:2:"), Error);

  std::stringstream junk("1,x\n");
  CHECK_THROWS_AS(read_matrix_csv(junk), Error);
}
