// Copyright 2026 The evpose Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include <Eigen/Core>

namespace evpose {

inline constexpr std::size_t kJointCount = 13;

/// Names of the 13 skeleton joints, in storage order. Index 0 is the head, the
/// depth reference for label normalization.
struct JointSet {
  std::array<std::string, kJointCount> names{
      "head",    "shoulder_l", "shoulder_r", "elbow_l", "elbow_r", "hand_l", "hand_r",
      "hip_l",   "hip_r",      "knee_l",     "knee_r",  "foot_l",  "foot_r"};
  std::size_t head = 0;

  /// Index of `name`, or kJointCount when absent.
  std::size_t find(const std::string& name) const noexcept;
};

enum class CoordinateFrame { World, Camera };

struct SkeletonFrame {
  std::uint64_t t_us = 0;
  std::array<Eigen::Vector3d, kJointCount> joints{};  // millimetres
  CoordinateFrame frame = CoordinateFrame::World;
};

/// Pinhole camera: pixel = intrinsic * (extrinsic * [X; 1]) / depth.
struct CameraModel {
  Eigen::Matrix3d intrinsic = Eigen::Matrix3d::Identity();
  Eigen::Matrix<double, 3, 4> extrinsic = Eigen::Matrix<double, 3, 4>::Identity();

  /// Throws InvalidCamera unless the intrinsic is upper-triangular with positive focal
  /// lengths and every entry is finite.
  void validate() const;

  Eigen::Vector3d to_camera(const Eigen::Vector3d& world) const;
  Eigen::Vector3d to_world(const Eigen::Vector3d& camera) const;

  static CameraModel from_pinhole(double fx, double fy, double cx, double cy);
};

/// Text form: 9 intrinsic then 12 extrinsic floats, row-major, whitespace separated.
CameraModel read_camera(std::istream& in);
void write_camera(std::ostream& out, const CameraModel& cam);
CameraModel read_camera_file(const std::filesystem::path& path);
void write_camera_file(const std::filesystem::path& path, const CameraModel& cam);

/// CSV `t_us,joint_name,x_mm,y_mm,z_mm`; every timestamp must list all 13 joints of
/// `joints` exactly once. Frames come back sorted by time.
std::vector<SkeletonFrame> read_skeleton_csv(std::istream& in, const JointSet& joints = {});
void write_skeleton_csv(std::ostream& out, const std::vector<SkeletonFrame>& frames,
                        const JointSet& joints = {});

/// Label whose timestamp is closest to `t_us` (ties pick the earlier one).
/// `frames` must be sorted and non-empty.
const SkeletonFrame& nearest_label(const std::vector<SkeletonFrame>& frames, std::uint64_t t_us);

}  // namespace evpose
