// Copyright 2026 The evpose Authors
// SPDX-License-Identifier: Apache-2.0

#include "evpose/error.hpp"

namespace evpose {

std::string_view errc_name(Errc code) noexcept {
  switch (code) {
    case Errc::BadMagic: return "BadMagic";
    case Errc::TruncatedRecord: return "TruncatedRecord";
    case Errc::OutOfBounds: return "OutOfBounds";
    case Errc::InvalidPolarity: return "InvalidPolarity";
    case Errc::NonMonotonic: return "NonMonotonic";
    case Errc::ZeroWindow: return "ZeroWindow";
    case Errc::ZeroCount: return "ZeroCount";
    case Errc::ZeroBins: return "ZeroBins";
    case Errc::TimeRegression: return "TimeRegression";
    case Errc::InvalidTau: return "InvalidTau";
    case Errc::GeometryMismatch: return "GeometryMismatch";
    case Errc::FpsMismatch: return "FpsMismatch";
    case Errc::LengthMismatch: return "LengthMismatch";
    case Errc::EmptySequence: return "EmptySequence";
    case Errc::BehindCamera: return "BehindCamera";
    case Errc::InvalidCamera: return "InvalidCamera";
    case Errc::InvalidDepth: return "InvalidDepth";
    case Errc::ZeroMass: return "ZeroMass";
    case Errc::InvalidDistribution: return "InvalidDistribution";
    case Errc::ProbabilityOutOfRange: return "ProbabilityOutOfRange";
    case Errc::NonFinite: return "NonFinite";
    case Errc::EmptyPlan: return "EmptyPlan";
    case Errc::InvalidThreshold: return "InvalidThreshold";
    case Errc::JointCountMismatch: return "JointCountMismatch";
    case Errc::EmptyInput: return "EmptyInput";
    case Errc::InvalidArgument: return "InvalidArgument";
    case Errc::Io: return "Io";
    case Errc::Parse: return "Parse";
    case Errc::Config: return "Config";
  }
  return "Unknown";
}

}  // namespace evpose
