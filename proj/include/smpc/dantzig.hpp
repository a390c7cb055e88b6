// SPDX-License-Identifier: Apache-2.0
//
// Dantzig selector baseline: min ||h||_1 s.t. ||X^T (y - X h)||_inf <= lambda,
// posed as a linear program over h = h_plus - h_minus and solved with a dense
// two-phase tableau simplex using Bland's rule.

#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "smpc/estimators.hpp"
#include "smpc/linalg.hpp"

namespace smpc {

enum class RowSense { kLessEqual, kEqual, kGreaterEqual };

/// minimize c^T v  subject to  A v (sense) b,  v >= 0.
struct LinearProgram {
  Vector objective;
  Matrix constraints;
  Vector rhs;
  std::vector<RowSense> senses;

  std::size_t variables() const noexcept { return objective.size(); }
  std::size_t rows() const noexcept { return rhs.size(); }
  /// Throws kShape when the pieces do not conform.
  void validate() const;
};

enum class SimplexStatus { kOptimal, kInfeasible, kUnbounded, kPivotLimit };

const char* to_string(SimplexStatus status) noexcept;

struct SimplexOptions {
  std::size_t max_pivots = 50000;
  double pivot_tolerance = 1e-9;
};

struct SimplexResult {
  SimplexStatus status = SimplexStatus::kInfeasible;
  Vector solution;  // empty unless optimal
  double objective = 0.0;
  std::size_t pivots = 0;
};

SimplexResult solve_simplex(const LinearProgram& lp, const SimplexOptions& options = {});

/// 2L variables (h_plus then h_minus) and 2L rows:
///   G h <= lambda + X^T y,  -G h <= lambda - X^T y,  with G = X^T X.
LinearProgram build_dantzig_lp(const Matrix& x, std::span<const double> y, double lambda);

/// sigma * sqrt(2 ln L).
double dantzig_default_lambda(double sigma, std::size_t length);

struct DantzigConfig {
  /// Overrides the sigma-based default when set.
  std::optional<double> lambda;
  /// Re-fit least squares on the S largest entries of the LP solution.
  bool debias = true;
  SimplexOptions simplex;
};

/// Throws kInfeasible / kUnbounded / kPivotLimit when the LP does not solve.
Estimate estimate_dantzig(const Matrix& x, std::span<const double> y, double sigma,
                          std::size_t sparsity, const DantzigConfig& cfg = {});

}  // namespace smpc
