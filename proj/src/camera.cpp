// Copyright 2026 The evpose Authors
// SPDX-License-Identifier: Apache-2.0

#include "evpose/camera.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <istream>
#include <iomanip>
#include <map>
#include <ostream>
#include <sstream>

#include <Eigen/LU>

#include "evpose/error.hpp"

namespace evpose {

std::size_t JointSet::find(const std::string& name) const noexcept {
  for (std::size_t i = 0; i < names.size(); ++i) {
    if (names[i] == name) return i;
  }
  return kJointCount;
}

void CameraModel::validate() const {
  if (!intrinsic.allFinite() || !extrinsic.allFinite()) {
    throw Error(Errc::InvalidCamera, "camera matrices must be finite");
  }
  if (intrinsic(1, 0) != 0.0 || intrinsic(2, 0) != 0.0 || intrinsic(2, 1) != 0.0) {
    throw Error(Errc::InvalidCamera, "intrinsic matrix must be upper-triangular");
  }
  if (!(intrinsic(0, 0) > 0.0) || !(intrinsic(1, 1) > 0.0) || !(intrinsic(2, 2) > 0.0)) {
    throw Error(Errc::InvalidCamera, "focal entries must be positive");
  }
  if (std::abs(extrinsic.leftCols<3>().determinant()) < 1e-12) {
    throw Error(Errc::InvalidCamera, "extrinsic rotation block is singular");
  }
}

Eigen::Vector3d CameraModel::to_camera(const Eigen::Vector3d& world) const {
  return extrinsic.leftCols<3>() * world + extrinsic.col(3);
}

Eigen::Vector3d CameraModel::to_world(const Eigen::Vector3d& camera) const {
  return extrinsic.leftCols<3>().lu().solve(camera - extrinsic.col(3));
}

CameraModel CameraModel::from_pinhole(double fx, double fy, double cx, double cy) {
  CameraModel cam;
  cam.intrinsic << fx, 0, cx, 0, fy, cy, 0, 0, 1;
  return cam;
}

CameraModel read_camera(std::istream& in) {
  CameraModel cam;
  for (int r = 0; r < 3; ++r)
    for (int c = 0; c < 3; ++c)
      if (!(in >> cam.intrinsic(r, c))) throw Error(Errc::Parse, "camera file: expected 9 intrinsic values");
  for (int r = 0; r < 3; ++r)
    for (int c = 0; c < 4; ++c)
      if (!(in >> cam.extrinsic(r, c))) throw Error(Errc::Parse, "camera file: expected 12 extrinsic values");
  cam.validate();
  return cam;
}

void write_camera(std::ostream& out, const CameraModel& cam) {
  out << std::setprecision(17);
  for (int r = 0; r < 3; ++r) {
    out << cam.intrinsic(r, 0) << ' ' << cam.intrinsic(r, 1) << ' ' << cam.intrinsic(r, 2) << '\n';
  }
  for (int r = 0; r < 3; ++r) {
    out << cam.extrinsic(r, 0) << ' ' << cam.extrinsic(r, 1) << ' ' << cam.extrinsic(r, 2) << ' '
        << cam.extrinsic(r, 3) << '\n';
  }
}

CameraModel read_camera_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(Errc::Io, "cannot open " + path.string());
  return read_camera(in);
}

void write_camera_file(const std::filesystem::path& path, const CameraModel& cam) {
  std::ofstream out(path);
  if (!out) throw Error(Errc::Io, "cannot write " + path.string());
  write_camera(out, cam);
}

std::vector<SkeletonFrame> read_skeleton_csv(std::istream& in, const JointSet& joints) {
  struct Partial {
    SkeletonFrame frame;
    std::array<bool, kJointCount> seen{};
  };
  std::map<std::uint64_t, Partial> by_time;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || (line_no == 1 && line.rfind("t_us", 0) == 0)) continue;
    std::array<std::string, 5> fields;
    std::istringstream ls(line);
    for (auto& field : fields) {
      if (!std::getline(ls, field, ',')) {
        throw Error(Errc::Parse, "skeleton csv line " + std::to_string(line_no) + ": expected 5 fields");
      }
    }
    const std::size_t j = joints.find(fields[1]);
    if (j == kJointCount) {
      throw Error(Errc::Parse, "skeleton csv line " + std::to_string(line_no) + ": unknown joint '" +
                                   fields[1] + "'");
    }
    try {
      const std::uint64_t t = std::stoull(fields[0]);
      auto& partial = by_time[t];
      if (partial.seen[j]) {
        throw Error(Errc::Parse, "skeleton csv line " + std::to_string(line_no) + ": duplicate joint");
      }
      partial.seen[j] = true;
      partial.frame.t_us = t;
      partial.frame.joints[j] = {std::stod(fields[2]), std::stod(fields[3]), std::stod(fields[4])};
      if (!partial.frame.joints[j].allFinite()) throw Error(Errc::NonFinite, "joint coordinate");
    } catch (const std::logic_error&) {
      throw Error(Errc::Parse, "skeleton csv line " + std::to_string(line_no) + ": bad number");
    }
  }
  std::vector<SkeletonFrame> frames;
  frames.reserve(by_time.size());
  for (auto& [t, partial] : by_time) {
    if (!std::all_of(partial.seen.begin(), partial.seen.end(), [](bool b) { return b; })) {
      throw Error(Errc::JointCountMismatch, "timestamp " + std::to_string(t) + " lacks joints");
    }
    frames.push_back(partial.frame);
  }
  return frames;
}

void write_skeleton_csv(std::ostream& out, const std::vector<SkeletonFrame>& frames,
                        const JointSet& joints) {
  out << "t_us,joint_name,x_mm,y_mm,z_mm\n" << std::setprecision(17);
  for (const auto& f : frames) {
    for (std::size_t j = 0; j < kJointCount; ++j) {
      out << f.t_us << ',' << joints.names[j] << ',' << f.joints[j].x() << ',' << f.joints[j].y()
          << ',' << f.joints[j].z() << '\n';
    }
  }
}

const SkeletonFrame& nearest_label(const std::vector<SkeletonFrame>& frames, std::uint64_t t_us) {
  if (frames.empty()) throw Error(Errc::EmptyInput, "no skeleton labels");
  auto it = std::lower_bound(frames.begin(), frames.end(), t_us,
                             [](const SkeletonFrame& f, std::uint64_t t) { return f.t_us < t; });
  if (it == frames.end()) return frames.back();
  if (it == frames.begin()) return *it;
  const auto prev = std::prev(it);
  return (t_us - prev->t_us) <= (it->t_us - t_us) ? *prev : *it;
}

}  // namespace evpose
