// Copyright 2026 The evpose Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <array>
#include <cstddef>
#include <functional>
#include <span>
#include <vector>

#include <Eigen/Core>

#include "evpose/camera.hpp"
#include "evpose/event_core.hpp"
#include "evpose/image.hpp"

namespace evpose {

/// R x R probability grid. Column index follows the first plane axis, row index the
/// second. Cell k spans the centre (2k + 1) / R - 1 of [-1, 1].
struct Heatmap {
  std::size_t size = 0;
  std::vector<double> values;  // [row][col]

  Heatmap() = default;
  explicit Heatmap(std::size_t r) : size(r), values(r * r, 0.0) {}

  double& at(std::size_t row, std::size_t col) noexcept { return values[row * size + col]; }
  double at(std::size_t row, std::size_t col) const noexcept { return values[row * size + col]; }
};

double cell_center(std::size_t k, std::size_t resolution) noexcept;

/// Marginal heatmaps of one joint on the three faces of the normalized cube.
/// Plane axes (first, second): xy = (x, y), xz = (x, z), zy = (z, y).
struct HeatmapTriplet {
  Heatmap xy;
  Heatmap xz;
  Heatmap zy;
};

/// 13 joints. Normalized poses live in [-1, 1]^3; otherwise coordinates are millimetres.
struct Pose3D {
  std::vector<Eigen::Vector3d> joints;
  bool normalized = false;
};

/// Image extent plus the depth half-range that map the camera frustum onto [-1, 1]^3:
///   x = 2u / W - 1,  y = 2v / H - 1,  z = (Z - Z_head) / depth_half_range_mm
/// where (u, v) is the pinhole projection and Z the camera-frame depth.
struct NormalizationFrame {
  SensorGeometry image = kDavis346;
  double depth_half_range_mm = 1000.0;
};

/// Expected cell-centre coordinates (first axis, second axis) under the normalized grid.
/// Throws ZeroMass for an all-zero grid, InvalidDistribution for negative entries.
std::array<double, 2> soft_argmax(const Heatmap& h);

/// d soft_argmax(h)[axis] / d h_i for every cell i, treating h as unnormalized weights.
std::vector<double> soft_argmax_gradient(const Heatmap& h, int axis);

/// x and y from the xy plane; z is the mean of the z estimates of the xz and zy planes.
Eigen::Vector3d fuse_planes(const HeatmapTriplet& t);

/// Jensen-Shannon divergence, natural log, bounded by ln 2. Inputs must be
/// distributions of equal length (InvalidDistribution / LengthMismatch).
double jsd(std::span<const double> p, std::span<const double> q);
/// The same sum, without the simplex check.
double jsd_unnormalized(std::span<const double> p, std::span<const double> q);
/// d jsd_unnormalized / d q_i = 0.5 * ln(2 q_i / (p_i + q_i)); needs q_i > 0.
std::vector<double> jsd_gradient_q(std::span<const double> p, std::span<const double> q);

inline constexpr double kBceClip = 1e-7;

/// Mean binary cross entropy with predictions clipped to [1e-7, 1 - 1e-7].
double bce(std::span<const double> target, std::span<const double> predicted);
/// Gradient w.r.t. predicted; zero where clipping is active.
std::vector<double> bce_gradient(std::span<const double> target, std::span<const double> predicted);

double mse(std::span<const double> target, std::span<const double> predicted);
std::vector<double> mse_gradient(std::span<const double> target, std::span<const double> predicted);

struct MaskLossTerms {
  double bce_series = 0.0;   // all predicted masks
  double bce_current = 0.0;  // current-frame mask again
  double mse_scores = 0.0;   // predicted scores vs 1 - MAE(M, M_hat)
  double total = 0.0;
};

/// Mask-prediction objective: BCE over the series, BCE over the current frame, and MSE of
/// the predicted quality scores against 1 - MAE of each predicted mask.
MaskLossTerms mask_loss(const std::vector<SoftMask>& predicted, const std::vector<BinaryMask>& truth,
                        std::span<const double> predicted_scores);

/// Ground-truth quality score of a soft prediction: 1 - mean |M - M_hat|.
double soft_mask_score(const SoftMask& predicted, const BinaryMask& truth);

struct BlockOutput {
  std::vector<HeatmapTriplet> heatmaps;  // one per joint
  Pose3D pose;                           // normalized
};

struct HpeLossTerms {
  double geometric = 0.0;  // sum over blocks and joints of ||p_hat - p||
  double divergence = 0.0; // sum over blocks, joints and planes of JSD
  double total = 0.0;
};

/// Pose objective over every refinement block.
HpeLossTerms hpe_loss(const std::vector<BlockOutput>& blocks,
                      const std::vector<HeatmapTriplet>& truth_heatmaps, const Pose3D& truth_pose);

using ScalarFn = std::function<double(std::span<const double>)>;
using GradientFn = std::function<std::vector<double>(std::span<const double>)>;

/// max_i |g_i - fd_i| / (|fd_i| + 1e-8), fd = central differences with `step`.
/// Step must lie in [1e-6, 1e-3]; throws NonFinite on any non-finite evaluation.
double gradient_check(const ScalarFn& f, const GradientFn& gradient, std::span<const double> point,
                      double step);

/// Inverse of normalize_labels: cube coordinates back to world millimetres.
Pose3D denormalize(const Pose3D& pose, const CameraModel& cam, double head_depth_mm,
                   const NormalizationFrame& frame = {});

}  // namespace evpose
