// SPDX-License-Identifier: Apache-2.0
//
// Dense real kernels shared by the estimators: products, top-k selection and
// the two least-squares flavours (restricted to a column subset, and
// minimum-norm for underdetermined systems). Both solvers go through a
// Householder QR; neither forms normal equations.

#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace smpc {

using Vector = std::vector<double>;

/// Row-major dense matrix. All entries are required to be finite.
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols, double fill = 0.0);
  Matrix(std::size_t rows, std::size_t cols, std::vector<double> row_major);

  static Matrix identity(std::size_t n);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }

  double& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  double operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

  std::span<const double> row(std::size_t i) const {
    return {data_.data() + i * cols_, cols_};
  }
  Vector column(std::size_t j) const;
  Matrix transposed() const;

  std::span<const double> data() const noexcept { return data_; }

  friend bool operator==(const Matrix&, const Matrix&) = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

/// Strictly increasing column indices into an ambient dimension.
class SupportSet {
 public:
  SupportSet() = default;
  /// Sorts and validates; duplicates or out-of-range indices throw.
  SupportSet(std::vector<std::size_t> indices, std::size_t ambient);

  const std::vector<std::size_t>& indices() const noexcept { return indices_; }
  std::size_t size() const noexcept { return indices_.size(); }
  bool empty() const noexcept { return indices_.empty(); }
  std::size_t ambient() const noexcept { return ambient_; }
  bool contains(std::size_t index) const;

  SupportSet merged(const SupportSet& other) const;

  friend bool operator==(const SupportSet&, const SupportSet&) = default;

 private:
  std::vector<std::size_t> indices_;
  std::size_t ambient_ = 0;
};

double dot(std::span<const double> a, std::span<const double> b);
double norm2(std::span<const double> v);
Vector subtract(std::span<const double> a, std::span<const double> b);

Vector matvec(const Matrix& a, std::span<const double> v);
Vector transpose_matvec(const Matrix& a, std::span<const double> v);

/// Indices of the k largest |v_i|; ties go to the lower index.
SupportSet top_k_indices(std::span<const double> v, std::size_t k);

/// Relative threshold on |R_jj| / max|R_ii| below which a factor is treated
/// as rank deficient.
inline constexpr double kRankTolerance = 1e-10;

/// argmin ||y - A_omega u|| scattered into a length-A.cols() vector.
Vector restricted_least_squares(const Matrix& a, const SupportSet& omega,
                                std::span<const double> y);

/// Minimum l2-norm solution A^T (A A^T)^{-1} y for rows <= cols.
Vector min_norm_least_squares(const Matrix& a, std::span<const double> y);

}  // namespace smpc
