// Copyright 2026 The evpose Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <iosfwd>
#include <span>
#include <vector>

#include "evpose/image.hpp"
#include "evpose/tore.hpp"

namespace evpose {

inline constexpr float kMaskBinarizeThreshold = 0.1f;
inline constexpr std::size_t kDefaultMaskHorizon = 4;

/// 1 where value > threshold (strict), else 0.
BinaryMask binarize_mask(const SoftMask& soft, float threshold = kMaskBinarizeThreshold);

/// Multiplies every channel of `vol` by `mask`.
ToreVolume apply_mask(const ToreVolume& vol, const BinaryMask& mask);

/// 1 - MAE(pred, gt): 1 for identical masks, 0 for complementary ones.
double mask_quality_ground_truth(const BinaryMask& pred, const BinaryMask& gt);

/// Masks for the issuing frame and the N - 1 frames after it, each with a quality score
/// in [0, 1] (higher is better).
struct MaskPlan {
  std::vector<BinaryMask> masks;
  std::vector<double> scores;
  std::size_t issued_at = 0;

  std::size_t horizon() const noexcept { return masks.size(); }
};

/// Seam for mask predictors. Implementations must be deterministic.
class MaskPredictorBackend {
 public:
  virtual ~MaskPredictorBackend() = default;
  virtual std::size_t horizon() const = 0;
  virtual MaskPlan predict(const ToreVolume& vol, std::size_t frame_index) = 0;
};

struct ScheduleStep {
  std::size_t frame = 0;
  bool recompute = false;
  double score_used = 0.0;
  std::size_t plan_issued_at = 0;
  BinaryMask mask;
};

struct ScheduleResult {
  std::vector<ScheduleStep> steps;
  std::size_t backend_calls = 0;
};

/// Early-exit scheduler. Frame 0 always queries the backend. Frame k reuses the active
/// plan's mask for k when that plan covers k and its score is >= beta; otherwise the
/// backend runs on frame k and its plan becomes active. Only the newest plan is kept.
ScheduleResult schedule_masks(std::span<const ToreVolume> frames, MaskPredictorBackend& backend,
                              double beta);

/// CSV `frame,recompute,score_used`.
void write_schedule_csv(std::ostream& out, const ScheduleResult& result);

struct ReferenceBackendParams {
  std::size_t horizon = kDefaultMaskHorizon;
  double activity_percentile = 0.5;  // of non-zero per-pixel max activity
  int closing_radius = 2;
  int grow_per_step = 2;             // dilation radius added per future frame
  double score_decay = 0.9;
  double score_floor = 0.05;
};

/// Deterministic stand-in for a learned predictor: thresholds per-pixel max channel
/// activity at a percentile of the active pixels, closes the result, keeps the largest
/// 8-connected component and extrapolates future masks by growing dilations.
/// The current score is the fraction of activity the mask captures, decaying per step.
class ReferenceMaskBackend final : public MaskPredictorBackend {
 public:
  explicit ReferenceMaskBackend(ReferenceBackendParams params = {});
  std::size_t horizon() const override { return params_.horizon; }
  MaskPlan predict(const ToreVolume& vol, std::size_t frame_index) override;

 private:
  ReferenceBackendParams params_;
};

// Morphology helpers, square structuring element of the given radius.
BinaryMask dilate(const BinaryMask& m, int radius);
/// Pixels outside the image count as foreground, so closing never shrinks at borders.
BinaryMask erode(const BinaryMask& m, int radius);
/// Largest 8-connected component; ties go to the component met first in raster order.
BinaryMask largest_component(const BinaryMask& m);

}  // namespace evpose
