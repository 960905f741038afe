// Copyright 2026 The evpose Authors
// SPDX-License-Identifier: Apache-2.0

#include "evpose/gating.hpp"

#include <ostream>
#include <string>

#include "evpose/error.hpp"

namespace evpose {

BinaryMask binarize_mask(const SoftMask& soft, float threshold) {
  BinaryMask out(soft.geometry);
  for (std::size_t i = 0; i < soft.size(); ++i) out.pixels[i] = soft.pixels[i] > threshold ? 1 : 0;
  return out;
}

ToreVolume apply_mask(const ToreVolume& vol, const BinaryMask& mask) {
  if (vol.geometry != mask.geometry) throw Error(Errc::GeometryMismatch, "mask and volume geometry differ");
  ToreVolume out = vol;
  const std::size_t plane = vol.plane_size();
  for (std::size_t c = 0; c < vol.channels(); ++c) {
    float* row = out.values.data() + c * plane;
    for (std::size_t i = 0; i < plane; ++i) {
      if (!mask.pixels[i]) row[i] = 0.0f;
    }
  }
  return out;
}

double mask_quality_ground_truth(const BinaryMask& pred, const BinaryMask& gt) {
  if (pred.geometry != gt.geometry) throw Error(Errc::GeometryMismatch, "mask geometry differs");
  std::size_t differ = 0;
  for (std::size_t i = 0; i < gt.size(); ++i) differ += (pred.pixels[i] != 0) != (gt.pixels[i] != 0);
  return 1.0 - static_cast<double>(differ) / static_cast<double>(gt.size());
}

ScheduleResult schedule_masks(std::span<const ToreVolume> frames, MaskPredictorBackend& backend,
                              double beta) {
  if (!(beta >= 0.0 && beta <= 1.0)) throw Error(Errc::InvalidThreshold, "beta must lie in [0, 1]");
  if (backend.horizon() == 0) throw Error(Errc::EmptyPlan, "backend horizon is zero");

  ScheduleResult result;
  result.steps.reserve(frames.size());
  MaskPlan plan;
  bool active = false;
  for (std::size_t k = 0; k < frames.size(); ++k) {
    bool reuse = false;
    if (active && k - plan.issued_at < plan.horizon()) {
      reuse = plan.scores[k - plan.issued_at] >= beta;
    }
    if (!reuse) {
      plan = backend.predict(frames[k], k);
      plan.issued_at = k;
      ++result.backend_calls;
      if (plan.masks.empty() || plan.masks.size() != plan.scores.size()) {
        throw Error(Errc::EmptyPlan, "backend returned an empty or inconsistent plan at frame " +
                                         std::to_string(k));
      }
      active = true;
    }
    const std::size_t offset = k - plan.issued_at;
    const BinaryMask& mask = plan.masks[offset];
    if (mask.geometry != frames[k].geometry) {
      throw Error(Errc::GeometryMismatch, "plan mask geometry differs from frame " + std::to_string(k));
    }
    result.steps.push_back(ScheduleStep{k, !reuse, plan.scores[offset], plan.issued_at, mask});
  }
  return result;
}

void write_schedule_csv(std::ostream& out, const ScheduleResult& result) {
  out << "frame,recompute,score_used\n";
  for (const auto& s : result.steps) {
    out << s.frame << ',' << (s.recompute ? 1 : 0) << ',' << s.score_used << '\n';
  }
}

}  // namespace evpose
