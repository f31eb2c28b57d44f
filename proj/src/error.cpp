// Copyright 2026 The qnequiv Authors
// SPDX-License-Identifier: Apache-2.0

#include "qnequiv/error.hpp"

namespace qnequiv {

std::string_view to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::SingularMatrix: return "SingularMatrix";
    case ErrorCode::NoConvergence: return "NoConvergence";
    case ErrorCode::ClusterSeparationFailure: return "ClusterSeparationFailure";
    case ErrorCode::NotQuotientBounded: return "NotQuotientBounded";
    case ErrorCode::RadiusNotLessThanOne: return "RadiusNotLessThanOne";
    case ErrorCode::SpectrumHit: return "SpectrumHit";
    case ErrorCode::Overflow: return "Overflow";
    case ErrorCode::NotEquivalent: return "NotEquivalent";
    case ErrorCode::DivergenceDetected: return "DivergenceDetected";
    case ErrorCode::LocalSpectrumHit: return "LocalSpectrumHit";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::ValidationError: return "ValidationError";
    case ErrorCode::UnknownKind: return "UnknownKind";
  }
  return "Unknown";
}

}  // namespace qnequiv
