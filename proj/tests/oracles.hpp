// SPDX-License-Identifier: Apache-2.0
//
// Reference computations used only by the tests. Nothing here calls into the
// library's solvers: dense Gauss-Jordan elimination instead of QR, exhaustive
// enumeration instead of greedy search, vertex enumeration instead of simplex.

#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <optional>
#include <random>
#include <vector>

namespace oracle {

using Dense = std::vector<std::vector<double>>;

inline Dense random_dense(std::size_t rows, std::size_t cols, std::mt19937_64& gen) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  Dense a(rows, std::vector<double>(cols));
  for (auto& r : a)
    for (auto& v : r) v = u(gen);
  return a;
}

inline std::vector<double> flatten(const Dense& a) {
  std::vector<double> out;
  for (const auto& r : a) out.insert(out.end(), r.begin(), r.end());
  return out;
}

inline Dense transpose(const Dense& a) {
  Dense t(a.empty() ? 0 : a[0].size(), std::vector<double>(a.size()));
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < a[i].size(); ++j) t[j][i] = a[i][j];
  return t;
}

inline Dense multiply(const Dense& a, const Dense& b) {
  Dense c(a.size(), std::vector<double>(b[0].size(), 0.0));
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t k = 0; k < b.size(); ++k)
      for (std::size_t j = 0; j < b[0].size(); ++j) c[i][j] += a[i][k] * b[k][j];
  return c;
}

inline std::vector<double> apply(const Dense& a, const std::vector<double>& v) {
  std::vector<double> out(a.size(), 0.0);
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < v.size(); ++j) out[i] += a[i][j] * v[j];
  return out;
}

/// Gauss-Jordan inverse with partial pivoting; nullopt when singular.
inline std::optional<Dense> inverse(Dense a) {
  const std::size_t n = a.size();
  Dense inv(n, std::vector<double>(n, 0.0));
  for (std::size_t i = 0; i < n; ++i) inv[i][i] = 1.0;
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t p = c;
    for (std::size_t r = c + 1; r < n; ++r)
      if (std::abs(a[r][c]) > std::abs(a[p][c])) p = r;
    if (std::abs(a[p][c]) < 1e-13) return std::nullopt;
    std::swap(a[p], a[c]);
    std::swap(inv[p], inv[c]);
    const double d = a[c][c];
    for (std::size_t j = 0; j < n; ++j) {
      a[c][j] /= d;
      inv[c][j] /= d;
    }
    for (std::size_t r = 0; r < n; ++r) {
      if (r == c) continue;
      const double f = a[r][c];
      for (std::size_t j = 0; j < n; ++j) {
        a[r][j] -= f * a[c][j];
        inv[r][j] -= f * inv[c][j];
      }
    }
  }
  return inv;
}

/// Least squares on the given columns through the normal equations.
inline std::optional<std::vector<double>> normal_equations_ls(const Dense& a,
                                                              const std::vector<std::size_t>& cols,
                                                              const std::vector<double>& y) {
  Dense sub(a.size(), std::vector<double>(cols.size()));
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t c = 0; c < cols.size(); ++c) sub[i][c] = a[i][cols[c]];
  const Dense st = transpose(sub);
  auto inv = inverse(multiply(st, sub));
  if (!inv) return std::nullopt;
  const auto u = oracle::apply(*inv, oracle::apply(st, y));
  std::vector<double> full(a[0].size(), 0.0);
  for (std::size_t c = 0; c < cols.size(); ++c) full[cols[c]] = u[c];
  return full;
}

/// Best k-sparse least-squares fit by enumerating every k-subset.
inline std::vector<double> best_k_sparse_ls(const Dense& a, const std::vector<double>& y,
                                            std::size_t k) {
  const std::size_t l = a[0].size();
  std::vector<std::size_t> cols(k);
  for (std::size_t i = 0; i < k; ++i) cols[i] = i;
  double best = std::numeric_limits<double>::infinity();
  std::vector<double> best_h(l, 0.0);
  for (;;) {
    if (auto h = normal_equations_ls(a, cols, y)) {
      const auto fit = oracle::apply(a, *h);
      double r = 0.0;
      for (std::size_t i = 0; i < y.size(); ++i) r += (y[i] - fit[i]) * (y[i] - fit[i]);
      if (r < best) {
        best = r;
        best_h = *h;
      }
    }
    std::size_t i = k;
    while (i > 0 && cols[i - 1] == l - k + i - 1) --i;
    if (i == 0) break;
    ++cols[i - 1];
    for (std::size_t j = i; j < k; ++j) cols[j] = cols[j - 1] + 1;
  }
  return best_h;
}

/// min c^T x s.t. A x <= b, x >= 0 by enumerating every vertex: choose n
/// active constraints out of the m rows plus n bounds, solve, keep feasible.
inline std::optional<double> lp_vertex_enumeration(const Dense& a, const std::vector<double>& b,
                                                   const std::vector<double>& c) {
  const std::size_t m = a.size();
  const std::size_t n = c.size();
  Dense rows = a;
  std::vector<double> rhs = b;
  for (std::size_t j = 0; j < n; ++j) {
    std::vector<double> e(n, 0.0);
    e[j] = -1.0;  // -x_j <= 0
    rows.push_back(e);
    rhs.push_back(0.0);
  }
  const std::size_t total = m + n;
  std::optional<double> best;
  std::vector<std::size_t> pick(n);
  for (std::size_t i = 0; i < n; ++i) pick[i] = i;
  for (;;) {
    Dense sys(n);
    std::vector<double> r(n);
    for (std::size_t i = 0; i < n; ++i) {
      sys[i] = rows[pick[i]];
      r[i] = rhs[pick[i]];
    }
    if (auto inv = inverse(sys)) {
      const auto x = oracle::apply(*inv, r);
      bool feasible = true;
      for (std::size_t i = 0; i < total && feasible; ++i) {
        double s = 0.0;
        for (std::size_t j = 0; j < n; ++j) s += rows[i][j] * x[j];
        if (s > rhs[i] + 1e-9) feasible = false;
      }
      if (feasible) {
        double obj = 0.0;
        for (std::size_t j = 0; j < n; ++j) obj += c[j] * x[j];
        if (!best || obj < *best) best = obj;
      }
    }
    std::size_t i = n;
    while (i > 0 && pick[i - 1] == total - n + i - 1) --i;
    if (i == 0) break;
    ++pick[i - 1];
    for (std::size_t j = i; j < n; ++j) pick[j] = pick[j - 1] + 1;
  }
  return best;
}

/// Sort-and-scan empirical CDF.
inline std::vector<double> cdf_scan(std::vector<double> values, const std::vector<double>& grid) {
  std::sort(values.begin(), values.end());
  std::vector<double> out;
  std::size_t idx = 0;
  for (double x : grid) {
    while (idx < values.size() && values[idx] <= x) ++idx;
    out.push_back(static_cast<double>(idx) / static_cast<double>(values.size()));
  }
  return out;
}

}  // namespace oracle
