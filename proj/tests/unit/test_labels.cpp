// Copyright 2026 The evpose Authors
// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>

#include <random>
#include <sstream>

#include "../support/oracles.hpp"
#include "evpose/error.hpp"
#include "evpose/labels.hpp"
#include "evpose/pose_math.hpp"

using namespace evpose;

namespace {

SkeletonFrame skeleton_at(const Eigen::Vector3d& p) {
  SkeletonFrame s;
  s.joints.fill(p);
  return s;
}

}  // namespace

TEST_CASE("optical axis projects to the principal point") {
  const CameraModel cam = CameraModel::from_pinhole(300.0, 310.0, 170.0, 125.0);
  const auto uv = project_skeleton(skeleton_at({0, 0, 1000}), cam);
  CHECK(uv[0].x() == doctest::Approx(170.0));
  CHECK(uv[0].y() == doctest::Approx(125.0));
}

TEST_CASE("translation-only extrinsic matches the matrix product") {
  CameraModel cam = CameraModel::from_pinhole(250.0, 250.0, 173.0, 130.0);
  cam.extrinsic.col(3) = Eigen::Vector3d(100.0, -50.0, 500.0);
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(-500.0, 500.0);
  SkeletonFrame s;
  for (auto& j : s.joints) j = Eigen::Vector3d(u(rng), u(rng), 2000.0 + u(rng));
  const auto uv = project_skeleton(s, cam);
  for (std::size_t j = 0; j < kJointCount; ++j) {
    Eigen::Vector4d hom;
    hom << s.joints[j], 1.0;
    const Eigen::Vector3d h = cam.intrinsic * (cam.extrinsic * hom);
    CHECK(uv[j].x() == doctest::Approx(h.x() / h.z()));
    CHECK(uv[j].y() == doctest::Approx(h.y() / h.z()));
  }
}

TEST_CASE("behind the camera") {
  const CameraModel cam = CameraModel::from_pinhole(300, 300, 170, 125);
  CHECK_THROWS_AS(project_skeleton(skeleton_at({0, 0, 0}), cam), Error);
  CHECK_THROWS_AS(normalize_labels(skeleton_at({0, 0, -5}), cam), Error);
}

TEST_CASE("normalization: head reference, corners and round trip") {
  const CameraModel cam = CameraModel::from_pinhole(300.0, 300.0, 173.0, 130.0);
  const NormalizationFrame frame;
  SkeletonFrame s = skeleton_at({0, 0, 2000});
  // Joint 1 sits where the frustum corner (W, H) meets the far face of the cube.
  const double far = 2000.0 + frame.depth_half_range_mm;
  s.joints[1] = Eigen::Vector3d((346.0 - 173.0) / 300.0 * far, (260.0 - 130.0) / 300.0 * far, far);
  // Joint 2 at pixel (0, 0) on the near face.
  const double near = 2000.0 - frame.depth_half_range_mm;
  s.joints[2] = Eigen::Vector3d(-173.0 / 300.0 * near, -130.0 / 300.0 * near, near);
  const NormalizedLabels n = normalize_labels(s, cam, frame);
  CHECK(n.head_depth_mm == 2000.0);
  CHECK(n.pose.joints[0].z() == 0.0);
  CHECK(n.pose.joints[1].x() == doctest::Approx(1.0));
  CHECK(n.pose.joints[1].y() == doctest::Approx(1.0));
  CHECK(n.pose.joints[1].z() == doctest::Approx(1.0));
  CHECK(n.pose.joints[2].x() == doctest::Approx(-1.0));
  CHECK(n.pose.joints[2].y() == doctest::Approx(-1.0));
  CHECK(n.pose.joints[2].z() == doctest::Approx(-1.0));

  const Pose3D back = denormalize(n.pose, cam, n.head_depth_mm, frame);
  for (std::size_t j = 0; j < kJointCount; ++j) CHECK((back.joints[j] - s.joints[j]).norm() < 1e-9 * 3000.0);
}

TEST_CASE("round trip over random cameras") {
  std::mt19937_64 rng(8);
  for (int i = 0; i < 50; ++i) {
    const CameraModel cam = oracle::random_camera(rng);
    const SkeletonFrame s = oracle::random_skeleton(cam, rng);
    const NormalizedLabels n = normalize_labels(s, cam);
    const Pose3D back = denormalize(n.pose, cam, n.head_depth_mm);
    for (std::size_t j = 0; j < kJointCount; ++j) {
      CHECK((back.joints[j] - s.joints[j]).norm() <= 1e-9 * std::max(1.0, s.joints[j].norm()));
    }
  }
}

TEST_CASE("heatmaps") {
  Pose3D pose;
  pose.normalized = true;
  pose.joints.assign(kJointCount, Eigen::Vector3d::Zero());
  pose.joints[3] = Eigen::Vector3d(0.31, -0.52, 0.77);
  pose.joints[4] = Eigen::Vector3d(-0.9, 0.9, -0.4);
  const HeatmapParams params{64, 2.0};
  const auto maps = make_heatmaps(pose, params);
  REQUIRE(maps.size() == kJointCount);
  for (std::size_t j = 0; j < kJointCount; ++j) {
    for (const Heatmap* h : {&maps[j].xy, &maps[j].xz, &maps[j].zy}) {
      double sum = 0.0;
      for (double v : h->values) sum += v;
      CHECK(sum == doctest::Approx(1.0).epsilon(1e-6));
    }
    const Eigen::Vector3d fused = fuse_planes(maps[j]);
    // Half a cell is 1/R in normalized units.
    CHECK((fused - pose.joints[j]).cwiseAbs().maxCoeff() <= 1.0 / 64.0);
  }
  const auto centre = soft_argmax(maps[0].xy);
  CHECK(std::abs(centre[0]) < 1e-12);
  CHECK(std::abs(centre[1]) < 1e-12);
  const Tensor3 t = heatmaps_to_tensor(maps);
  CHECK(t.channels == 3 * kJointCount);
  CHECK(t.width == 64);
  CHECK_THROWS_AS(make_heatmaps(pose, HeatmapParams{4, 2.0}), Error);
}

TEST_CASE("skeleton csv, camera file and nearest label") {
  std::vector<SkeletonFrame> frames;
  for (std::uint64_t t : {1000, 2000, 3000}) {
    SkeletonFrame s = skeleton_at({1.5, -2.25, 1000.0 + t});
    s.t_us = t;
    frames.push_back(s);
  }
  std::stringstream io;
  write_skeleton_csv(io, frames);
  const auto back = read_skeleton_csv(io);
  REQUIRE(back.size() == 3);
  CHECK(back[2].joints[12] == frames[2].joints[12]);
  CHECK(nearest_label(back, 1499).t_us == 1000);
  CHECK(nearest_label(back, 1500).t_us == 1000);
  CHECK(nearest_label(back, 1501).t_us == 2000);
  CHECK(nearest_label(back, 99999).t_us == 3000);

  std::stringstream cam_io;
  std::mt19937_64 rng(1);
  const CameraModel cam = oracle::random_camera(rng);
  write_camera(cam_io, cam);
  const CameraModel cam2 = read_camera(cam_io);
  CHECK(cam2.intrinsic == cam.intrinsic);
  CHECK(cam2.extrinsic == cam.extrinsic);
}
