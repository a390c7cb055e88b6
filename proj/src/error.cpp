// SPDX-License-Identifier: Apache-2.0

#include "smpc/error.hpp"

namespace smpc {

const char* to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::kInvalidArgument: return "invalid_argument";
    case ErrorCode::kShape: return "shape";
    case ErrorCode::kSparsityViolation: return "sparsity_violation";
    case ErrorCode::kOverdeterminedSupport: return "overdetermined_support";
    case ErrorCode::kSingularSupport: return "singular_support";
    case ErrorCode::kSingularSystem: return "singular_system";
    case ErrorCode::kDegenerateSignal: return "degenerate_signal";
    case ErrorCode::kDomain: return "domain";
    case ErrorCode::kTooLarge: return "too_large";
    case ErrorCode::kIo: return "io";
    case ErrorCode::kParse: return "parse";
    case ErrorCode::kInfeasible: return "infeasible";
    case ErrorCode::kUnbounded: return "unbounded";
    case ErrorCode::kPivotLimit: return "pivot_limit";
    case ErrorCode::kInterrupted: return "interrupted";
  }
  return "unknown";
}

}  // namespace smpc
