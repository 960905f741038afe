// Copyright 2026 The evpose Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <array>
#include <cstddef>
#include <iosfwd>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "evpose/camera.hpp"
#include "evpose/gating.hpp"
#include "evpose/pose_math.hpp"
#include "evpose/tore.hpp"

namespace evpose {

inline constexpr double kPckThresholdMm = 150.0;
inline constexpr std::size_t kAucThresholdCount = 30;
inline constexpr double kAucMaxThresholdMm = 500.0;

/// Mean Euclidean joint error. Throws JointCountMismatch unless both poses have 13 joints.
double mpjpe(const Pose3D& pred, const Pose3D& gt);

/// Fraction of joints whose error is strictly below alpha_mm.
double pck(const Pose3D& pred, const Pose3D& gt, double alpha_mm = kPckThresholdMm);

/// The 30 thresholds 0, 500/29, ..., 500 mm.
std::array<double, kAucThresholdCount> auc_thresholds();

/// Mean PCK over auc_thresholds().
double auc(const Pose3D& pred, const Pose3D& gt);

// ---------------------------------------------------------------------------
// Occlusion augmentation
// ---------------------------------------------------------------------------

struct OcclusionParams {
  int max_width = 80;
  int max_height = 80;
  double probability = 0.8;  // 1.0 at test time
};

struct PixelRect {
  int x = 0;
  int y = 0;
  int width = 0;
  int height = 0;
};

struct OcclusionResult {
  ToreVolume volume;
  std::optional<PixelRect> rect;
};

/// With the configured probability, zeroes one rectangle across all channels. Sides are
/// uniform in [1, max] (capped by the frame), the position uniform among in-bounds
/// placements. Draw order: apply?, width, height, x, y.
OcclusionResult occlude(const ToreVolume& vol, const OcclusionParams& params, std::mt19937_64& rng);

// ---------------------------------------------------------------------------
// Evaluation
// ---------------------------------------------------------------------------

enum class Lighting { High, Medium, Low };
enum class Background { Static, Dynamic };
enum class View { Front, Back, Left, Right };
enum class ConditionAxis { Lighting, Background, View };

std::string to_string(Lighting v);
std::string to_string(Background v);
std::string to_string(View v);
std::string to_string(ConditionAxis v);
Lighting parse_lighting(const std::string& s);
Background parse_background(const std::string& s);
View parse_view(const std::string& s);
ConditionAxis parse_axis(const std::string& s);

struct EvalRecord {
  std::string frame_id;
  Pose3D pred;  // millimetres
  Pose3D gt;
  Lighting lighting = Lighting::High;
  Background background = Background::Static;
  View view = View::Front;
};

struct MetricRow {
  std::string group;  // "all", or "lighting=low;view=front"
  std::size_t count = 0;
  double mpjpe_mm = 0.0;
  double pck = 0.0;
  double auc = 0.0;
};

struct EvalReport {
  MetricRow overall;
  std::vector<MetricRow> groups;        // sorted by group key
  std::vector<double> per_joint_mpjpe;  // 13 entries, mean over records
};

/// Per-record metrics averaged overall and per distinct combination of `group_by` tags.
EvalReport evaluate(std::span<const EvalRecord> records, std::span<const ConditionAxis> group_by = {});

/// Rows `section,group,count,mpjpe_mm,pck,auc`; sections are overall, group and joint.
void write_report_csv(std::ostream& out, const EvalReport& report, const JointSet& joints = {});
void write_report_table(std::ostream& out, const EvalReport& report, const JointSet& joints = {});

/// Pose CSV `joint,x,y,z` with one row per joint name of `joints`.
Pose3D read_pose_csv(std::istream& in, const JointSet& joints = {});
void write_pose_csv(std::ostream& out, const Pose3D& pose, const JointSet& joints = {});

// ---------------------------------------------------------------------------
// Early-exit threshold sweep
// ---------------------------------------------------------------------------

struct SweepRow {
  double beta = 0.0;
  std::size_t backend_calls = 0;
  double seconds = 0.0;
  std::optional<double> mask_mae;  // mean over frames of MAE(used mask, truth)
};

/// Runs schedule_masks once per beta over the same frames. `truth` is either empty or
/// holds one ground-truth mask per frame.
std::vector<SweepRow> threshold_sweep(std::span<const ToreVolume> frames, MaskPredictorBackend& backend,
                                      std::span<const double> betas,
                                      std::span<const BinaryMask> truth = {});

void write_sweep_csv(std::ostream& out, const std::vector<SweepRow>& rows);

}  // namespace evpose
