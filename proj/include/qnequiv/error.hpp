// Copyright 2026 The qnequiv Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef QNEQUIV_ERROR_HPP
#define QNEQUIV_ERROR_HPP

#include <cstdio>
#include <stdexcept>
#include <string>
#include <string_view>

namespace qnequiv {

enum class ErrorCode {
  DimensionMismatch,
  InvalidArgument,
  SingularMatrix,
  NoConvergence,
  ClusterSeparationFailure,
  NotQuotientBounded,
  RadiusNotLessThanOne,
  SpectrumHit,
  Overflow,
  NotEquivalent,
  DivergenceDetected,
  LocalSpectrumHit,
  ParseError,
  ValidationError,
  UnknownKind,
};

std::string_view to_string(ErrorCode code) noexcept;

/// Exception type thrown by every module. The code classifies the failure;
/// the message is a human-readable diagnostic.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

/// Short form of a double for diagnostics.
inline std::string format_number(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

[[noreturn]] inline void fail(ErrorCode code, const std::string& message) {
  throw Error(code, message);
}

}  // namespace qnequiv

#endif  // QNEQUIV_ERROR_HPP
