// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>

#include <algorithm>
#include <numeric>
#include <random>

#include "oracles.hpp"
#include "smpc/error.hpp"
#include "smpc/linalg.hpp"

using namespace smpc;

namespace {

Matrix to_matrix(const oracle::Dense& d) {
  return Matrix(d.size(), d[0].size(), oracle::flatten(d));
}

Vector random_vector(std::size_t n, std::mt19937_64& gen) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  Vector v(n);
  for (auto& x : v) x = u(gen);
  return v;
}

}  // namespace

TEST_CASE("matrix rejects non-finite entries and wrong counts") {
  CHECK_THROWS_AS(Matrix(2, 2, std::vector<double>{1, 2, 3}), Error);
  CHECK_THROWS_AS(Matrix(1, 2, std::vector<double>{1, NAN}), Error);
}

TEST_CASE("support set sorts and validates") {
  SupportSet s({4, 1, 3}, 5);
  CHECK(s.indices() == std::vector<std::size_t>{1, 3, 4});
  CHECK(s.contains(3));
  CHECK_FALSE(s.contains(2));
  CHECK_THROWS_AS(SupportSet({1, 1}, 5), Error);
  CHECK_THROWS_AS(SupportSet({5}, 5), Error);
  CHECK(SupportSet({0, 2}, 5).merged(SupportSet({2, 3}, 5)).indices() ==
        std::vector<std::size_t>{0, 2, 3});
}

TEST_CASE("matvec") {
  CHECK(matvec(Matrix::identity(2), Vector{3, -1}) == Vector{3, -1});
  CHECK(matvec(Matrix(1, 3, {1, 2, 3}), Vector{1, 1, 1}) == Vector{6});

  std::mt19937_64 gen(11);
  const auto d = oracle::random_dense(4, 6, gen);
  const Matrix a = to_matrix(d);
  Vector e2(6, 0.0);
  e2[2] = 1.0;
  CHECK(matvec(a, e2) == a.column(2));

  CHECK_THROWS_AS(matvec(a, Vector(5)), Error);
}

TEST_CASE("transpose_matvec") {
  CHECK(transpose_matvec(Matrix::identity(2), Vector{5, 0}) == Vector{5, 0});
  CHECK(transpose_matvec(Matrix(2, 1, {1, 1}), Vector{2, 3}) == Vector{5});
  CHECK_THROWS_AS(transpose_matvec(Matrix::identity(2), Vector(3)), Error);

  std::mt19937_64 gen(12);
  for (int rep = 0; rep < 20; ++rep) {
    const auto d = oracle::random_dense(5, 9, gen);
    const Matrix a = to_matrix(d);
    const Vector v = random_vector(5, gen);
    const Vector fast = transpose_matvec(a, v);
    const Vector slow = oracle::apply(oracle::transpose(d), v);
    for (std::size_t j = 0; j < fast.size(); ++j) CHECK(fast[j] == doctest::Approx(slow[j]).epsilon(1e-12));
  }
}

TEST_CASE("adjoint identity <Au, v> = <u, A^T v>") {
  std::mt19937_64 gen(13);
  for (int rep = 0; rep < 200; ++rep) {
    const std::size_t rows = 1 + gen() % 12;
    const std::size_t cols = 1 + gen() % 12;
    const Matrix a = to_matrix(oracle::random_dense(rows, cols, gen));
    const Vector u = random_vector(cols, gen);
    const Vector v = random_vector(rows, gen);
    const double lhs = dot(matvec(a, u), v);
    const double rhs = dot(u, transpose_matvec(a, v));
    CHECK(std::abs(lhs - rhs) <= 1e-10 * std::max(1.0, std::abs(lhs)));
  }
}

TEST_CASE("top_k_indices") {
  CHECK(top_k_indices(Vector{3, -5, 2}, 2).indices() == std::vector<std::size_t>{0, 1});
  CHECK(top_k_indices(Vector{1, 1, 0}, 1).indices() == std::vector<std::size_t>{0});
  CHECK(top_k_indices(Vector{4, 2}, 0).empty());
  CHECK_THROWS_AS(top_k_indices(Vector{1, 2}, 3), Error);
}

TEST_CASE("top_k_indices is permutation consistent for distinct magnitudes") {
  std::mt19937_64 gen(14);
  for (int rep = 0; rep < 200; ++rep) {
    const std::size_t n = 1 + gen() % 20;
    const std::size_t k = gen() % (n + 1);
    Vector v = random_vector(n, gen);
    std::vector<std::size_t> perm(n);
    std::iota(perm.begin(), perm.end(), std::size_t{0});
    std::shuffle(perm.begin(), perm.end(), gen);
    Vector pv(n);
    for (std::size_t i = 0; i < n; ++i) pv[perm[i]] = v[i];

    const SupportSet top = top_k_indices(v, k);
    std::vector<std::size_t> mapped;
    for (std::size_t i : top.indices()) mapped.push_back(perm[i]);
    std::sort(mapped.begin(), mapped.end());
    CHECK(top_k_indices(pv, k).indices() == mapped);
  }
}

TEST_CASE("restricted_least_squares") {
  const Matrix id = Matrix::identity(3);
  CHECK(restricted_least_squares(id, SupportSet({2}, 3), Vector{0, 0, 5}) == Vector{0, 0, 5});
  CHECK(restricted_least_squares(id, SupportSet({}, 3), Vector{1, 2, 3}) == Vector{0, 0, 0});

  std::mt19937_64 gen(15);
  const Matrix a = to_matrix(oracle::random_dense(6, 8, gen));
  const SupportSet omega({1, 4, 6}, 8);
  const Vector u{0.7, -1.3, 2.1};
  Vector h(8, 0.0);
  for (std::size_t c = 0; c < 3; ++c) h[omega.indices()[c]] = u[c];
  const Vector y = matvec(a, h);
  const Vector got = restricted_least_squares(a, omega, y);
  for (std::size_t j = 0; j < 8; ++j) CHECK(std::abs(got[j] - h[j]) <= 1e-10);
}

TEST_CASE("restricted_least_squares error paths") {
  std::mt19937_64 gen(16);
  const Matrix a = to_matrix(oracle::random_dense(3, 6, gen));
  try {
    restricted_least_squares(a, SupportSet({0, 1, 2, 3}, 6), Vector(3, 1.0));
    FAIL("expected an overdetermined-support error");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kOverdeterminedSupport);
  }

  Matrix dup(3, 3, {1, 1, 0, 2, 2, 1, 3, 3, 0});
  try {
    restricted_least_squares(dup, SupportSet({0, 1}, 3), Vector{1, 2, 3});
    FAIL("expected a singular-support error");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kSingularSupport);
    CHECK(std::string(e.what()).find("{0,1}") != std::string::npos);
  }
}

TEST_CASE("restricted least squares residual is orthogonal to the chosen columns") {
  std::mt19937_64 gen(17);
  for (int rep = 0; rep < 100; ++rep) {
    const std::size_t rows = 4 + gen() % 10;
    const std::size_t cols = rows + gen() % 10;
    const Matrix a = to_matrix(oracle::random_dense(rows, cols, gen));
    const std::size_t k = 1 + gen() % rows;
    std::vector<std::size_t> idx(cols);
    std::iota(idx.begin(), idx.end(), std::size_t{0});
    std::shuffle(idx.begin(), idx.end(), gen);
    idx.resize(k);
    const SupportSet omega(idx, cols);
    const Vector y = random_vector(rows, gen);
    const Vector h = restricted_least_squares(a, omega, y);
    const Vector r = subtract(y, matvec(a, h));
    for (std::size_t j = 0; j < cols; ++j) {
      if (!omega.contains(j)) {
        CHECK(h[j] == 0.0);
        continue;
      }
      const Vector col = a.column(j);
      CHECK(std::abs(dot(col, r)) <= 1e-8 * norm2(y) * norm2(col));
    }
  }
}

TEST_CASE("min_norm_least_squares") {
  CHECK(min_norm_least_squares(Matrix::identity(2), Vector{1, 2})[0] == doctest::Approx(1.0));
  CHECK(min_norm_least_squares(Matrix::identity(2), Vector{1, 2})[1] == doctest::Approx(2.0));
  const Vector split = min_norm_least_squares(Matrix(1, 2, {1, 1}), Vector{2});
  CHECK(split[0] == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(split[1] == doctest::Approx(1.0).epsilon(1e-14));

  std::mt19937_64 gen(18);
  const auto d = oracle::random_dense(5, 10, gen);
  const Matrix a = to_matrix(d);
  const Vector y = random_vector(5, gen);
  const Vector got = min_norm_least_squares(a, y);
  const auto at = oracle::transpose(d);
  const auto inv = oracle::inverse(oracle::multiply(d, at));
  REQUIRE(inv);
  const Vector want = oracle::apply(at, oracle::apply(*inv, y));
  CHECK(norm2(subtract(got, want)) <= 1e-10);
  CHECK(norm2(subtract(y, matvec(a, got))) <= 1e-8 * norm2(y));
}

TEST_CASE("min_norm_least_squares errors") {
  CHECK_THROWS_AS(min_norm_least_squares(Matrix(3, 2, 1.0), Vector(3)), Error);
  try {
    min_norm_least_squares(Matrix(2, 3, {1, 2, 3, 2, 4, 6}), Vector{1, 2});
    FAIL("expected a singular-system error");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kSingularSystem);
  }
}

TEST_CASE("min-norm output is shortest among all solutions") {
  std::mt19937_64 gen(19);
  for (int rep = 0; rep < 50; ++rep) {
    const std::size_t rows = 2 + gen() % 6;
    const std::size_t cols = rows + 1 + gen() % 6;
    const auto d = oracle::random_dense(rows, cols, gen);
    const Matrix a = to_matrix(d);
    const Vector y = random_vector(rows, gen);
    const Vector x = min_norm_least_squares(a, y);
    // Null-space direction: project a random vector off the row space.
    Vector p = random_vector(cols, gen);
    const Vector row_part = min_norm_least_squares(a, matvec(a, p));
    p = subtract(p, row_part);
    REQUIRE(norm2(matvec(a, p)) <= 1e-9 * std::max(1.0, norm2(p)));
    if (norm2(p) < 1e-6) continue;
    Vector moved(cols);
    for (std::size_t j = 0; j < cols; ++j) moved[j] = x[j] + p[j];
    CHECK(norm2(moved) > norm2(x));
  }
}
