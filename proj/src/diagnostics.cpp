// SPDX-License-Identifier: Apache-2.0

#include "smpc/diagnostics.hpp"

#include <algorithm>
#include <numeric>
#include <string>

#include "smpc/error.hpp"
#include "smpc/rng.hpp"

namespace smpc {

namespace {

// max(lambda_max - 1, 1 - lambda_min) of the Gram matrix of the chosen columns.
double isometry_deviation(const Matrix& x, const std::vector<std::size_t>& cols) {
  const std::size_t k = cols.size();
  if (k == 0) return 0.0;
  Matrix gram(k, k);
  for (std::size_t a = 0; a < k; ++a) {
    for (std::size_t b = a; b < k; ++b) {
      double s = 0.0;
      for (std::size_t i = 0; i < x.rows(); ++i) s += x(i, cols[a]) * x(i, cols[b]);
      gram(a, b) = s;
      gram(b, a) = s;
    }
  }
  const Vector eig = symmetric_eigenvalues(gram);
  return std::max(eig.back() - 1.0, 1.0 - eig.front());
}

// Advances `c` to the next k-combination of [0, n) in lexicographic order.
bool next_combination(std::vector<std::size_t>& c, std::size_t n) {
  const std::size_t k = c.size();
  for (std::size_t i = k; i-- > 0;) {
    if (c[i] < n - k + i) {
      ++c[i];
      for (std::size_t j = i + 1; j < k; ++j) c[j] = c[j - 1] + 1;
      return true;
    }
  }
  return false;
}

void check_order(const Matrix& x, std::size_t order) {
  if (order > x.cols()) {
    throw Error(ErrorCode::kInvalidArgument, "RIP order " + std::to_string(order) +
                                                 " exceeds the number of columns " +
                                                 std::to_string(x.cols()));
  }
}

RipReport enumerate_all(const Matrix& x, std::size_t order) {
  RipReport report;
  report.order = order;
  std::vector<std::size_t> cols(order);
  std::iota(cols.begin(), cols.end(), std::size_t{0});
  std::vector<std::size_t> worst = cols;
  double delta = -1.0;
  do {
    const double d = isometry_deviation(x, cols);
    ++report.supports_checked;
    if (d > delta) {
      delta = d;
      worst = cols;
    }
  } while (order > 0 && next_combination(cols, x.cols()));
  report.delta = std::max(delta, 0.0);
  report.worst_support = SupportSet(std::move(worst), x.cols());
  return report;
}

}  // namespace

double coherence_mu(const Matrix& x) {
  double peak = 0.0;
  for (double v : x.data()) peak = std::max(peak, std::abs(v));
  return std::sqrt(static_cast<double>(x.cols())) * peak;
}

double mutual_coherence(const Matrix& x) {
  double worst = 0.0;
  for (std::size_t a = 0; a < x.cols(); ++a) {
    for (std::size_t b = a + 1; b < x.cols(); ++b) {
      double s = 0.0;
      for (std::size_t i = 0; i < x.rows(); ++i) s += x(i, a) * x(i, b);
      worst = std::max(worst, std::abs(s));
    }
  }
  return worst;
}

double training_length_bound(std::size_t length, std::size_t sparsity, double mu, double c1,
                             double log_base) {
  if (length < 2) throw Error(ErrorCode::kDomain, "training_length_bound: L must be >= 2");
  if (!(c1 > 0.0)) throw Error(ErrorCode::kDomain, "training_length_bound: C1 must be > 0");
  if (!(log_base > 1.0)) throw Error(ErrorCode::kDomain, "training_length_bound: log base must be > 1");
  const double lg = std::log(static_cast<double>(length)) / std::log(log_base);
  return c1 * static_cast<double>(sparsity) * std::pow(lg, 4) * mu * mu;
}

CoherenceReport coherence_report(const Matrix& x, std::size_t sparsity, double c1,
                                 double log_base) {
  CoherenceReport r;
  r.mu = coherence_mu(x);
  r.mutual_coherence = mutual_coherence(x);
  r.c1 = c1;
  r.bound_rhs = training_length_bound(x.cols(), sparsity, r.mu, c1, log_base);
  r.satisfied = static_cast<double>(x.rows()) >= r.bound_rhs;
  return r;
}

double binomial(std::size_t n, std::size_t k) {
  if (k > n) return 0.0;
  k = std::min(k, n - k);
  double r = 1.0;
  for (std::size_t i = 1; i <= k; ++i) r = r * static_cast<double>(n - k + i) / static_cast<double>(i);
  return std::round(r);
}

Vector symmetric_eigenvalues(const Matrix& sym, double tolerance) {
  const std::size_t n = sym.rows();
  if (sym.cols() != n) throw Error(ErrorCode::kShape, "symmetric_eigenvalues: matrix not square");
  Matrix a = sym;
  double total = 0.0;
  for (double v : a.data()) total += v * v;
  for (int sweep = 0; sweep < 100; ++sweep) {
    double off = 0.0;
    for (std::size_t p = 0; p < n; ++p)
      for (std::size_t q = p + 1; q < n; ++q) off += 2.0 * a(p, q) * a(p, q);
    if (off <= tolerance * tolerance * std::max(total, 1e-300)) break;
    for (std::size_t p = 0; p < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        const double apq = a(p, q);
        if (apq == 0.0) continue;
        const double theta = (a(q, q) - a(p, p)) / (2.0 * apq);
        const double t = (theta >= 0.0 ? 1.0 : -1.0) /
                         (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        for (std::size_t k = 0; k < n; ++k) {
          const double akp = a(k, p);
          const double akq = a(k, q);
          a(k, p) = c * akp - s * akq;
          a(k, q) = s * akp + c * akq;
        }
        for (std::size_t k = 0; k < n; ++k) {
          const double apk = a(p, k);
          const double aqk = a(q, k);
          a(p, k) = c * apk - s * aqk;
          a(q, k) = s * apk + c * aqk;
        }
      }
    }
  }
  Vector eig(n);
  for (std::size_t i = 0; i < n; ++i) eig[i] = a(i, i);
  std::sort(eig.begin(), eig.end());
  return eig;
}

RipReport ric_bruteforce(const Matrix& x, std::size_t order) {
  check_order(x, order);
  const double count = binomial(x.cols(), order);
  if (count > kMaxBruteForceSupports) {
    throw Error(ErrorCode::kTooLarge,
                "exact RIC needs C(" + std::to_string(x.cols()) + ", " + std::to_string(order) +
                    ") supports, above the 1e6 guard; use rip_sample for a sampled lower bound");
  }
  return enumerate_all(x, order);
}

RipReport rip_sample(const Matrix& x, std::size_t order, std::size_t trials, std::uint64_t seed) {
  check_order(x, order);
  if (trials < 1) throw Error(ErrorCode::kInvalidArgument, "rip_sample: trials must be >= 1");
  const double count = binomial(x.cols(), order);
  if (static_cast<double>(trials) >= count && count <= kMaxBruteForceSupports) {
    RipReport exhaustive = enumerate_all(x, order);
    exhaustive.lower_bound = false;
    return exhaustive;
  }

  RipReport report;
  report.order = order;
  report.lower_bound = true;
  Rng rng(seed);
  const std::size_t l = x.cols();
  std::vector<std::size_t> pool(l);
  std::vector<std::size_t> worst;
  double delta = -1.0;
  for (std::size_t t = 0; t < trials; ++t) {
    std::iota(pool.begin(), pool.end(), std::size_t{0});
    for (std::size_t i = 0; i < order; ++i) {
      const auto j = i + static_cast<std::size_t>(rng.below(l - i));
      std::swap(pool[i], pool[j]);
    }
    std::vector<std::size_t> cols(pool.begin(), pool.begin() + static_cast<std::ptrdiff_t>(order));
    std::sort(cols.begin(), cols.end());
    const double d = isometry_deviation(x, cols);
    ++report.supports_checked;
    if (d > delta) {
      delta = d;
      worst = std::move(cols);
    }
  }
  report.delta = std::max(delta, 0.0);
  report.worst_support = SupportSet(std::move(worst), l);
  return report;
}

}  // namespace smpc
