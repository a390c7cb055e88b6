// SPDX-License-Identifier: Apache-2.0

#include "smpc/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>
#include <string>

#include "smpc/error.hpp"

namespace smpc {

namespace {

void require_finite(std::span<const double> values, const char* what) {
  for (double v : values) {
    if (!std::isfinite(v)) {
      throw Error(ErrorCode::kInvalidArgument, std::string(what) + " contains a non-finite entry");
    }
  }
}

std::string describe(const SupportSet& s) {
  std::ostringstream os;
  os << '{';
  for (std::size_t i = 0; i < s.size(); ++i) {
    os << (i ? "," : "") << s.indices()[i];
  }
  os << '}';
  return os.str();
}

// Householder QR of an m x k column-major block with m >= k. Reflector j is
// stored in column j below (and including) the diagonal; R's diagonal is kept
// separately.
class HouseholderQr {
 public:
  HouseholderQr(std::vector<double> columns, std::size_t m, std::size_t k)
      : a_(std::move(columns)), m_(m), k_(k), diag_(k, 0.0), beta_(k, 0.0) {
    for (std::size_t j = 0; j < k_; ++j) {
      double* col = &a_[j * m_];
      double sigma = 0.0;
      for (std::size_t i = j; i < m_; ++i) sigma += col[i] * col[i];
      const double norm = std::sqrt(sigma);
      if (norm == 0.0) {
        diag_[j] = 0.0;
        beta_[j] = 0.0;
        continue;
      }
      const double alpha = col[j] > 0.0 ? -norm : norm;
      col[j] -= alpha;
      double vtv = 0.0;
      for (std::size_t i = j; i < m_; ++i) vtv += col[i] * col[i];
      beta_[j] = vtv > 0.0 ? 2.0 / vtv : 0.0;
      diag_[j] = alpha;
      for (std::size_t c = j + 1; c < k_; ++c) {
        double* other = &a_[c * m_];
        double s = 0.0;
        for (std::size_t i = j; i < m_; ++i) s += col[i] * other[i];
        s *= beta_[j];
        for (std::size_t i = j; i < m_; ++i) other[i] -= s * col[i];
      }
    }
  }

  // Smallest |R_jj| relative to the largest; 0 when every column vanished.
  double conditioning_ratio() const {
    double lo = INFINITY;
    double hi = 0.0;
    for (double d : diag_) {
      lo = std::min(lo, std::abs(d));
      hi = std::max(hi, std::abs(d));
    }
    if (k_ == 0) return 1.0;
    return hi > 0.0 ? lo / hi : 0.0;
  }

  void apply_qt(std::vector<double>& v) const {
    for (std::size_t j = 0; j < k_; ++j) reflect(j, v);
  }

  void apply_q(std::vector<double>& v) const {
    for (std::size_t j = k_; j-- > 0;) reflect(j, v);
  }

  double r(std::size_t i, std::size_t j) const { return i == j ? diag_[i] : a_[j * m_ + i]; }

  std::size_t size() const { return k_; }

 private:
  void reflect(std::size_t j, std::vector<double>& v) const {
    if (beta_[j] == 0.0) return;
    const double* col = &a_[j * m_];
    double s = 0.0;
    for (std::size_t i = j; i < m_; ++i) s += col[i] * v[i];
    s *= beta_[j];
    for (std::size_t i = j; i < m_; ++i) v[i] -= s * col[i];
  }

  std::vector<double> a_;
  std::size_t m_;
  std::size_t k_;
  std::vector<double> diag_;
  std::vector<double> beta_;
};

}  // namespace

Matrix::Matrix(std::size_t rows, std::size_t cols, double fill)
    : rows_(rows), cols_(cols), data_(rows * cols, fill) {
  require_finite(data_, "matrix");
}

Matrix::Matrix(std::size_t rows, std::size_t cols, std::vector<double> row_major)
    : rows_(rows), cols_(cols), data_(std::move(row_major)) {
  if (data_.size() != rows_ * cols_) {
    throw Error(ErrorCode::kShape, "matrix entry count " + std::to_string(data_.size()) +
                                       " does not match " + std::to_string(rows_) + "x" +
                                       std::to_string(cols_));
  }
  require_finite(data_, "matrix");
}

Matrix Matrix::identity(std::size_t n) {
  Matrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

Vector Matrix::column(std::size_t j) const {
  Vector out(rows_);
  for (std::size_t i = 0; i < rows_; ++i) out[i] = (*this)(i, j);
  return out;
}

Matrix Matrix::transposed() const {
  Matrix t(cols_, rows_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
  return t;
}

SupportSet::SupportSet(std::vector<std::size_t> indices, std::size_t ambient)
    : indices_(std::move(indices)), ambient_(ambient) {
  std::sort(indices_.begin(), indices_.end());
  if (std::adjacent_find(indices_.begin(), indices_.end()) != indices_.end()) {
    throw Error(ErrorCode::kInvalidArgument, "support contains duplicate indices");
  }
  if (!indices_.empty() && indices_.back() >= ambient_) {
    throw Error(ErrorCode::kInvalidArgument,
                "support index " + std::to_string(indices_.back()) + " out of range [0, " +
                    std::to_string(ambient_) + ")");
  }
}

bool SupportSet::contains(std::size_t index) const {
  return std::binary_search(indices_.begin(), indices_.end(), index);
}

SupportSet SupportSet::merged(const SupportSet& other) const {
  std::vector<std::size_t> out;
  out.reserve(indices_.size() + other.indices_.size());
  std::set_union(indices_.begin(), indices_.end(), other.indices_.begin(), other.indices_.end(),
                 std::back_inserter(out));
  return SupportSet(std::move(out), std::max(ambient_, other.ambient_));
}

double dot(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) throw Error(ErrorCode::kShape, "dot: length mismatch");
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

double norm2(std::span<const double> v) {
  // Scaled accumulation keeps tiny residuals from underflowing.
  double scale = 0.0;
  for (double x : v) scale = std::max(scale, std::abs(x));
  if (scale == 0.0) return 0.0;
  double s = 0.0;
  for (double x : v) {
    const double t = x / scale;
    s += t * t;
  }
  return scale * std::sqrt(s);
}

Vector subtract(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) throw Error(ErrorCode::kShape, "subtract: length mismatch");
  Vector out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i] - b[i];
  return out;
}

Vector matvec(const Matrix& a, std::span<const double> v) {
  if (v.size() != a.cols()) {
    throw Error(ErrorCode::kShape, "matvec: vector length " + std::to_string(v.size()) +
                                       " != matrix cols " + std::to_string(a.cols()));
  }
  Vector out(a.rows(), 0.0);
  for (std::size_t i = 0; i < a.rows(); ++i) out[i] = dot(a.row(i), v);
  return out;
}

Vector transpose_matvec(const Matrix& a, std::span<const double> v) {
  if (v.size() != a.rows()) {
    throw Error(ErrorCode::kShape, "transpose_matvec: vector length " + std::to_string(v.size()) +
                                       " != matrix rows " + std::to_string(a.rows()));
  }
  Vector out(a.cols(), 0.0);
  for (std::size_t i = 0; i < a.rows(); ++i) {
    const auto row = a.row(i);
    const double vi = v[i];
    for (std::size_t j = 0; j < a.cols(); ++j) out[j] += row[j] * vi;
  }
  return out;
}

SupportSet top_k_indices(std::span<const double> v, std::size_t k) {
  if (k > v.size()) {
    throw Error(ErrorCode::kInvalidArgument, "top_k_indices: k = " + std::to_string(k) +
                                                 " exceeds length " + std::to_string(v.size()));
  }
  std::vector<std::size_t> order(v.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::partial_sort(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(k), order.end(),
                    [&](std::size_t a, std::size_t b) {
                      const double ma = std::abs(v[a]);
                      const double mb = std::abs(v[b]);
                      return ma != mb ? ma > mb : a < b;
                    });
  order.resize(k);
  return SupportSet(std::move(order), v.size());
}

Vector restricted_least_squares(const Matrix& a, const SupportSet& omega,
                                std::span<const double> y) {
  if (y.size() != a.rows()) {
    throw Error(ErrorCode::kShape, "restricted_least_squares: observation length " +
                                       std::to_string(y.size()) + " != rows " +
                                       std::to_string(a.rows()));
  }
  if (!omega.empty() && omega.indices().back() >= a.cols()) {
    throw Error(ErrorCode::kInvalidArgument, "restricted_least_squares: support index out of range");
  }
  const std::size_t m = a.rows();
  const std::size_t k = omega.size();
  if (k > m) {
    throw Error(ErrorCode::kOverdeterminedSupport,
                "support of size " + std::to_string(k) + " exceeds " + std::to_string(m) +
                    " observations: " + describe(omega));
  }
  Vector out(a.cols(), 0.0);
  if (k == 0) return out;

  std::vector<double> block(m * k);
  for (std::size_t c = 0; c < k; ++c) {
    const std::size_t j = omega.indices()[c];
    for (std::size_t i = 0; i < m; ++i) block[c * m + i] = a(i, j);
  }
  HouseholderQr qr(std::move(block), m, k);
  if (qr.conditioning_ratio() < kRankTolerance) {
    throw Error(ErrorCode::kSingularSupport,
                "rank-deficient column submatrix on support " + describe(omega));
  }
  std::vector<double> rhs(y.begin(), y.end());
  qr.apply_qt(rhs);
  std::vector<double> u(k);
  for (std::size_t i = k; i-- > 0;) {
    double s = rhs[i];
    for (std::size_t j = i + 1; j < k; ++j) s -= qr.r(i, j) * u[j];
    u[i] = s / qr.r(i, i);
  }
  for (std::size_t c = 0; c < k; ++c) out[omega.indices()[c]] = u[c];
  return out;
}

Vector min_norm_least_squares(const Matrix& a, std::span<const double> y) {
  const std::size_t n = a.rows();
  const std::size_t l = a.cols();
  if (y.size() != n) {
    throw Error(ErrorCode::kShape, "min_norm_least_squares: observation length mismatch");
  }
  if (n > l) {
    throw Error(ErrorCode::kShape, "min_norm_least_squares: requires rows <= cols");
  }
  // A^T = Q R  =>  A x = y  becomes  R^T z = y  with  x = Q [z; 0].
  std::vector<double> at(l * n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < l; ++j) at[i * l + j] = a(i, j);
  HouseholderQr qr(std::move(at), l, n);
  if (qr.conditioning_ratio() < kRankTolerance) {
    throw Error(ErrorCode::kSingularSystem, "min_norm_least_squares: A A^T is singular");
  }
  Vector x(l, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    double s = y[i];
    for (std::size_t j = 0; j < i; ++j) s -= qr.r(j, i) * x[j];
    x[i] = s / qr.r(i, i);
  }
  qr.apply_q(x);
  return x;
}

}  // namespace smpc
