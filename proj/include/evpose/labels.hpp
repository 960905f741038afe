// Copyright 2026 The evpose Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <array>
#include <vector>

#include <Eigen/Core>

#include "evpose/camera.hpp"
#include "evpose/pose_math.hpp"
#include "evpose/tensor_io.hpp"

// Ground-truth label generation: projection, cube normalization and marginal heatmaps.

namespace evpose {

/// Pinhole projection of every joint to pixel (u, v). Throws BehindCamera for any
/// joint with non-positive camera-frame depth.
std::array<Eigen::Vector2d, kJointCount> project_skeleton(const SkeletonFrame& s,
                                                          const CameraModel& cam);

struct NormalizedLabels {
  Pose3D pose;              // normalized, head depth maps to z = 0
  double head_depth_mm = 0; // camera-frame depth of the reference joint
};

/// Slides each joint along its viewing ray onto the plane through the head at the head's
/// depth, then maps the frustum box onto [-1, 1]^3 (see NormalizationFrame).
NormalizedLabels normalize_labels(const SkeletonFrame& s, const CameraModel& cam,
                                  const NormalizationFrame& frame = {},
                                  const JointSet& joints = {});

struct HeatmapParams {
  std::size_t resolution = 64;  // R, must be >= 8
  double sigma_cells = 2.0;
};

/// One triplet per joint: an isotropic Gaussian at the joint's position on each plane,
/// normalized to unit mass.
std::vector<HeatmapTriplet> make_heatmaps(const Pose3D& normalized, const HeatmapParams& params = {});

/// Heatmaps of all joints stacked as a (3 * J) x R x R tensor, planes ordered xy, xz, zy.
Tensor3 heatmaps_to_tensor(const std::vector<HeatmapTriplet>& heatmaps);

}  // namespace evpose
