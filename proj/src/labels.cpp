// Copyright 2026 The evpose Authors
// SPDX-License-Identifier: Apache-2.0

#include "evpose/labels.hpp"

#include <cmath>
#include <string>

#include "evpose/error.hpp"

namespace evpose {
namespace {

Eigen::Vector3d camera_point(const SkeletonFrame& s, const CameraModel& cam, std::size_t j) {
  const Eigen::Vector3d p = s.frame == CoordinateFrame::World ? cam.to_camera(s.joints[j]) : s.joints[j];
  if (!(p.z() > 0.0)) {
    throw Error(Errc::BehindCamera, "joint " + std::to_string(j) + " has depth " + std::to_string(p.z()));
  }
  return p;
}

Eigen::Vector2d pixel_of(const CameraModel& cam, const Eigen::Vector3d& camera_pt) {
  const Eigen::Vector3d h = cam.intrinsic * camera_pt;
  return {h.x() / h.z(), h.y() / h.z()};
}

// Cell-unit position of plane coordinate c in [-1, 1] on an R grid.
double to_cells(double c, std::size_t r) { return (c + 1.0) * 0.5 * static_cast<double>(r) - 0.5; }

Heatmap gaussian(double first, double second, const HeatmapParams& params) {
  const std::size_t r = params.resolution;
  Heatmap h(r);
  const double cx = to_cells(first, r);
  const double cy = to_cells(second, r);
  const double inv = 1.0 / (2.0 * params.sigma_cells * params.sigma_cells);
  double sum = 0.0;
  for (std::size_t row = 0; row < r; ++row) {
    const double dy = static_cast<double>(row) - cy;
    for (std::size_t col = 0; col < r; ++col) {
      const double dx = static_cast<double>(col) - cx;
      const double v = std::exp(-(dx * dx + dy * dy) * inv);
      h.at(row, col) = v;
      sum += v;
    }
  }
  if (!(sum > 0.0)) throw Error(Errc::ZeroMass, "joint lies too far outside the heatmap grid");
  for (double& v : h.values) v /= sum;
  return h;
}

}  // namespace

std::array<Eigen::Vector2d, kJointCount> project_skeleton(const SkeletonFrame& s, const CameraModel& cam) {
  cam.validate();
  std::array<Eigen::Vector2d, kJointCount> out;
  for (std::size_t j = 0; j < kJointCount; ++j) out[j] = pixel_of(cam, camera_point(s, cam, j));
  return out;
}

NormalizedLabels normalize_labels(const SkeletonFrame& s, const CameraModel& cam,
                                  const NormalizationFrame& frame, const JointSet& joints) {
  cam.validate();
  if (!(frame.depth_half_range_mm > 0.0)) throw Error(Errc::InvalidArgument, "depth half-range must be positive");
  const double head_depth = camera_point(s, cam, joints.head).z();
  NormalizedLabels out;
  out.head_depth_mm = head_depth;
  out.pose.normalized = true;
  out.pose.joints.reserve(kJointCount);
  const double w = frame.image.width;
  const double h = frame.image.height;
  for (std::size_t j = 0; j < kJointCount; ++j) {
    const Eigen::Vector3d p = camera_point(s, cam, j);
    const Eigen::Vector2d px = pixel_of(cam, p);
    out.pose.joints.emplace_back(2.0 * px.x() / w - 1.0, 2.0 * px.y() / h - 1.0,
                                 (p.z() - head_depth) / frame.depth_half_range_mm);
  }
  return out;
}

std::vector<HeatmapTriplet> make_heatmaps(const Pose3D& normalized, const HeatmapParams& params) {
  if (params.resolution < 8) throw Error(Errc::InvalidArgument, "heatmap resolution must be >= 8");
  if (!(params.sigma_cells > 0.0)) throw Error(Errc::InvalidArgument, "sigma must be positive");
  std::vector<HeatmapTriplet> out;
  out.reserve(normalized.joints.size());
  for (const auto& j : normalized.joints) {
    out.push_back(HeatmapTriplet{gaussian(j.x(), j.y(), params), gaussian(j.x(), j.z(), params),
                                 gaussian(j.z(), j.y(), params)});
  }
  return out;
}

Tensor3 heatmaps_to_tensor(const std::vector<HeatmapTriplet>& heatmaps) {
  if (heatmaps.empty()) return {};
  const auto r = static_cast<std::uint32_t>(heatmaps.front().xy.size);
  Tensor3 t{static_cast<std::uint32_t>(3 * heatmaps.size()), r, r, {}};
  t.data.reserve(std::size_t{t.channels} * r * r);
  for (const auto& trip : heatmaps) {
    for (const Heatmap* h : {&trip.xy, &trip.xz, &trip.zy}) {
      for (double v : h->values) t.data.push_back(static_cast<float>(v));
    }
  }
  return t;
}

}  // namespace evpose
