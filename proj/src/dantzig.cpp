// SPDX-License-Identifier: Apache-2.0

#include "smpc/dantzig.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <string>

#include "smpc/error.hpp"

namespace smpc {

const char* to_string(SimplexStatus status) noexcept {
  switch (status) {
    case SimplexStatus::kOptimal: return "optimal";
    case SimplexStatus::kInfeasible: return "infeasible";
    case SimplexStatus::kUnbounded: return "unbounded";
    case SimplexStatus::kPivotLimit: return "pivot_limit";
  }
  return "unknown";
}

void LinearProgram::validate() const {
  if (constraints.rows() != rhs.size() || constraints.cols() != objective.size() ||
      senses.size() != rhs.size()) {
    throw Error(ErrorCode::kShape, "linear program: objective, constraints, rhs and senses disagree");
  }
}

namespace {

enum class Outcome { kDone, kUnbounded, kPivotLimit };

// Dense tableau. Row i holds B^{-1} A | B^{-1} b; `cost` holds reduced costs
// with the negated objective value in the last slot.
class Tableau {
 public:
  Tableau(std::size_t rows, std::size_t cols)
      : rows_(rows), cols_(cols), a_(rows * (cols + 1), 0.0), cost_(cols + 1, 0.0), basis_(rows) {}

  double& at(std::size_t i, std::size_t j) { return a_[i * (cols_ + 1) + j]; }
  double& rhs(std::size_t i) { return a_[i * (cols_ + 1) + cols_]; }
  double& cost(std::size_t j) { return cost_[j]; }
  double objective() const { return -cost_[cols_]; }
  std::vector<std::size_t>& basis() { return basis_; }
  std::size_t rows() const { return rows_; }

  void set_costs(const Vector& c) {
    std::fill(cost_.begin(), cost_.end(), 0.0);
    std::copy(c.begin(), c.end(), cost_.begin());
    for (std::size_t i = 0; i < rows_; ++i) {
      const double cb = c[basis_[i]];
      if (cb == 0.0) continue;
      for (std::size_t j = 0; j <= cols_; ++j) cost_[j] -= cb * at(i, j);
    }
  }

  void pivot(std::size_t r, std::size_t e) {
    const double p = at(r, e);
    for (std::size_t j = 0; j <= cols_; ++j) at(r, j) /= p;
    at(r, e) = 1.0;
    for (std::size_t i = 0; i < rows_; ++i) {
      if (i == r) continue;
      const double f = at(i, e);
      if (f == 0.0) continue;
      for (std::size_t j = 0; j <= cols_; ++j) at(i, j) -= f * at(r, j);
      at(i, e) = 0.0;
      if (rhs(i) < 0.0 && rhs(i) > -1e-12) rhs(i) = 0.0;
    }
    const double f = cost_[e];
    if (f != 0.0) {
      for (std::size_t j = 0; j <= cols_; ++j) cost_[j] -= f * at(r, j);
      cost_[e] = 0.0;
    }
    basis_[r] = e;
  }

  // Bland's rule: lowest-index improving column, then lowest-index basic
  // variable among tied minimum ratios. Columns >= `allowed` never enter.
  Outcome run(std::size_t allowed, double tol, std::size_t& pivots, std::size_t max_pivots) {
    for (;;) {
      std::size_t enter = allowed;
      for (std::size_t j = 0; j < allowed; ++j) {
        if (cost_[j] < -tol) {
          enter = j;
          break;
        }
      }
      if (enter == allowed) return Outcome::kDone;

      std::size_t leave = rows_;
      double best = std::numeric_limits<double>::infinity();
      for (std::size_t i = 0; i < rows_; ++i) {
        const double aij = at(i, enter);
        if (aij <= tol) continue;
        const double ratio = std::max(rhs(i), 0.0) / aij;
        const double slack = 1e-12 * (1.0 + std::abs(best));
        if (leave == rows_ || ratio < best - slack ||
            (ratio <= best + slack && basis_[i] < basis_[leave])) {
          if (leave == rows_ || ratio < best - slack) best = ratio;
          leave = i;
        }
      }
      if (leave == rows_) return Outcome::kUnbounded;
      if (pivots >= max_pivots) return Outcome::kPivotLimit;
      pivot(leave, enter);
      ++pivots;
    }
  }

 private:
  std::size_t rows_;
  std::size_t cols_;
  std::vector<double> a_;
  std::vector<double> cost_;
  std::vector<std::size_t> basis_;
};

}  // namespace

SimplexResult solve_simplex(const LinearProgram& lp, const SimplexOptions& options) {
  lp.validate();
  const std::size_t m = lp.rows();
  const std::size_t n = lp.variables();
  const double tol = options.pivot_tolerance;

  // Normalize to b >= 0, then count auxiliary columns.
  std::vector<double> sign(m, 1.0);
  std::vector<RowSense> sense = lp.senses;
  for (std::size_t i = 0; i < m; ++i) {
    if (lp.rhs[i] < 0.0) {
      sign[i] = -1.0;
      if (sense[i] == RowSense::kLessEqual) sense[i] = RowSense::kGreaterEqual;
      else if (sense[i] == RowSense::kGreaterEqual) sense[i] = RowSense::kLessEqual;
    }
  }
  std::size_t slack_count = 0;
  std::size_t artificial_count = 0;
  for (RowSense s : sense) {
    if (s != RowSense::kEqual) ++slack_count;
    if (s != RowSense::kLessEqual) ++artificial_count;
  }
  const std::size_t first_artificial = n + slack_count;
  const std::size_t cols = first_artificial + artificial_count;

  Tableau t(m, cols);
  std::size_t next_slack = n;
  std::size_t next_artificial = first_artificial;
  double rhs_scale = 1.0;
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < n; ++j) t.at(i, j) = sign[i] * lp.constraints(i, j);
    t.rhs(i) = sign[i] * lp.rhs[i];
    rhs_scale = std::max(rhs_scale, t.rhs(i));
    switch (sense[i]) {
      case RowSense::kLessEqual:
        t.at(i, next_slack) = 1.0;
        t.basis()[i] = next_slack++;
        break;
      case RowSense::kGreaterEqual:
        t.at(i, next_slack++) = -1.0;
        t.at(i, next_artificial) = 1.0;
        t.basis()[i] = next_artificial++;
        break;
      case RowSense::kEqual:
        t.at(i, next_artificial) = 1.0;
        t.basis()[i] = next_artificial++;
        break;
    }
  }

  SimplexResult result;
  if (artificial_count > 0) {
    Vector phase1(cols, 0.0);
    for (std::size_t j = first_artificial; j < cols; ++j) phase1[j] = 1.0;
    t.set_costs(phase1);
    const Outcome o = t.run(cols, tol, result.pivots, options.max_pivots);
    if (o == Outcome::kPivotLimit) {
      result.status = SimplexStatus::kPivotLimit;
      return result;
    }
    if (t.objective() > tol * rhs_scale) {
      result.status = SimplexStatus::kInfeasible;
      return result;
    }
    // Drive zero-level artificials out of the basis; rows where that is
    // impossible are redundant and keep their artificial at zero.
    for (std::size_t i = 0; i < m; ++i) {
      if (t.basis()[i] < first_artificial) continue;
      std::size_t best = first_artificial;
      double best_mag = tol;
      for (std::size_t j = 0; j < first_artificial; ++j) {
        if (std::abs(t.at(i, j)) > best_mag) {
          best = j;
          best_mag = std::abs(t.at(i, j));
        }
      }
      if (best < first_artificial) {
        t.pivot(i, best);
        ++result.pivots;
      }
    }
  }

  Vector phase2(cols, 0.0);
  std::copy(lp.objective.begin(), lp.objective.end(), phase2.begin());
  t.set_costs(phase2);
  const Outcome o = t.run(first_artificial, tol, result.pivots, options.max_pivots);
  if (o == Outcome::kPivotLimit) {
    result.status = SimplexStatus::kPivotLimit;
    return result;
  }
  if (o == Outcome::kUnbounded) {
    result.status = SimplexStatus::kUnbounded;
    return result;
  }

  result.status = SimplexStatus::kOptimal;
  result.solution.assign(n, 0.0);
  for (std::size_t i = 0; i < m; ++i) {
    const std::size_t b = t.basis()[i];
    if (b < n) result.solution[b] = std::max(t.rhs(i), 0.0);
  }
  result.objective = dot(lp.objective, result.solution);
  return result;
}

LinearProgram build_dantzig_lp(const Matrix& x, std::span<const double> y, double lambda) {
  if (!(lambda >= 0.0) || !std::isfinite(lambda)) {
    throw Error(ErrorCode::kInvalidArgument, "Dantzig threshold lambda must be finite and >= 0");
  }
  if (y.size() != x.rows()) {
    throw Error(ErrorCode::kShape, "Dantzig LP: observation length mismatch");
  }
  const std::size_t l = x.cols();
  const Vector xty = transpose_matvec(x, y);
  Matrix gram(l, l);
  for (std::size_t i = 0; i < x.rows(); ++i) {
    const auto row = x.row(i);
    for (std::size_t a = 0; a < l; ++a)
      for (std::size_t b = 0; b < l; ++b) gram(a, b) += row[a] * row[b];
  }

  LinearProgram lp;
  lp.objective.assign(2 * l, 1.0);
  lp.constraints = Matrix(2 * l, 2 * l);
  lp.rhs.assign(2 * l, 0.0);
  lp.senses.assign(2 * l, RowSense::kLessEqual);
  for (std::size_t r = 0; r < l; ++r) {
    for (std::size_t c = 0; c < l; ++c) {
      const double g = gram(r, c);
      lp.constraints(r, c) = g;
      lp.constraints(r, c + l) = -g;
      lp.constraints(r + l, c) = -g;
      lp.constraints(r + l, c + l) = g;
    }
    lp.rhs[r] = lambda + xty[r];
    lp.rhs[r + l] = lambda - xty[r];
  }
  return lp;
}

double dantzig_default_lambda(double sigma, std::size_t length) {
  if (!(sigma >= 0.0)) throw Error(ErrorCode::kInvalidArgument, "sigma must be >= 0");
  if (length < 2) return 0.0;
  return sigma * std::sqrt(2.0 * std::log(static_cast<double>(length)));
}

Estimate estimate_dantzig(const Matrix& x, std::span<const double> y, double sigma,
                          std::size_t sparsity, const DantzigConfig& cfg) {
  const auto start = std::chrono::steady_clock::now();
  const std::size_t l = x.cols();
  const double lambda = cfg.lambda ? *cfg.lambda : dantzig_default_lambda(sigma, l);
  const LinearProgram lp = build_dantzig_lp(x, y, lambda);
  const SimplexResult sol = solve_simplex(lp, cfg.simplex);
  switch (sol.status) {
    case SimplexStatus::kOptimal: break;
    case SimplexStatus::kInfeasible:
      throw Error(ErrorCode::kInfeasible, "Dantzig LP infeasible (lambda = " + std::to_string(lambda) + ")");
    case SimplexStatus::kUnbounded:
      throw Error(ErrorCode::kUnbounded, "Dantzig LP unbounded");
    case SimplexStatus::kPivotLimit:
      throw Error(ErrorCode::kPivotLimit, "Dantzig LP hit the pivot limit after " +
                                              std::to_string(sol.pivots) + " pivots");
  }

  Estimate est;
  Vector h(l);
  for (std::size_t j = 0; j < l; ++j) h[j] = sol.solution[j] - sol.solution[j + l];
  if (cfg.debias) {
    if (sparsity > l) throw Error(ErrorCode::kInvalidArgument, "Dantzig: sparsity exceeds L");
    est.support = top_k_indices(h, sparsity);
    est.taps = restricted_least_squares(x, est.support, y);
  } else {
    std::vector<std::size_t> nz;
    for (std::size_t j = 0; j < l; ++j)
      if (h[j] != 0.0) nz.push_back(j);
    est.support = SupportSet(std::move(nz), l);
    est.taps = std::move(h);
  }
  // Pivot count; the LP has no residual trajectory.
  est.iterations = sol.pivots;
  est.elapsed_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return est;
}

}  // namespace smpc
