// Copyright 2026 The evpose Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace evpose {

enum class Errc {
  BadMagic,
  TruncatedRecord,
  OutOfBounds,
  InvalidPolarity,
  NonMonotonic,
  ZeroWindow,
  ZeroCount,
  ZeroBins,
  TimeRegression,
  InvalidTau,
  GeometryMismatch,
  FpsMismatch,
  LengthMismatch,
  EmptySequence,
  BehindCamera,
  InvalidCamera,
  InvalidDepth,
  ZeroMass,
  InvalidDistribution,
  ProbabilityOutOfRange,
  NonFinite,
  EmptyPlan,
  InvalidThreshold,
  JointCountMismatch,
  EmptyInput,
  InvalidArgument,
  Io,
  Parse,
  Config,
};

std::string_view errc_name(Errc code) noexcept;

/// Exception carrying a machine-readable code; every module throws this.
class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what)
      : std::runtime_error(std::string(errc_name(code)) + ": " + what), code_(code) {}

  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

}  // namespace evpose
