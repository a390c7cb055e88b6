// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <stdexcept>
#include <string>

namespace smpc {

enum class ErrorCode {
  kInvalidArgument,
  kShape,
  kSparsityViolation,
  kOverdeterminedSupport,
  kSingularSupport,
  kSingularSystem,
  kDegenerateSignal,
  kDomain,
  kTooLarge,
  kIo,
  kParse,
  kInfeasible,
  kUnbounded,
  kPivotLimit,
  kInterrupted,
};

const char* to_string(ErrorCode code) noexcept;

/// Exception carrying a machine-readable category; the C API maps it onto
/// its integer status codes.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace smpc
