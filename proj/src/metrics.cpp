// Copyright 2026 The evpose Authors
// SPDX-License-Identifier: Apache-2.0

#include "evpose/metrics.hpp"

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <iomanip>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>

#include "evpose/error.hpp"

namespace evpose {
namespace {

void check_pair(const Pose3D& pred, const Pose3D& gt) {
  if (pred.joints.size() != kJointCount || gt.joints.size() != kJointCount) {
    throw Error(Errc::JointCountMismatch, "poses must have 13 joints (got " +
                                              std::to_string(pred.joints.size()) + " and " +
                                              std::to_string(gt.joints.size()) + ")");
  }
}

std::array<double, kJointCount> joint_errors(const Pose3D& pred, const Pose3D& gt) {
  check_pair(pred, gt);
  std::array<double, kJointCount> e{};
  for (std::size_t j = 0; j < kJointCount; ++j) e[j] = (pred.joints[j] - gt.joints[j]).norm();
  return e;
}

double pck_of(const std::array<double, kJointCount>& errors, double alpha) {
  std::size_t hits = 0;
  for (double e : errors) hits += e < alpha;
  return static_cast<double>(hits) / kJointCount;
}

double auc_of(const std::array<double, kJointCount>& errors) {
  double sum = 0.0;
  for (double alpha : auc_thresholds()) sum += pck_of(errors, alpha);
  return sum / kAucThresholdCount;
}

template <typename E, std::size_t N>
E parse_enum(const std::string& s, const std::array<std::pair<const char*, E>, N>& table, const char* what) {
  for (const auto& [name, value] : table) {
    if (s == name) return value;
  }
  throw Error(Errc::Parse, std::string("unknown ") + what + " '" + s + "'");
}

constexpr std::array<std::pair<const char*, Lighting>, 3> kLighting{
    {{"high", Lighting::High}, {"medium", Lighting::Medium}, {"low", Lighting::Low}}};
constexpr std::array<std::pair<const char*, Background>, 2> kBackground{
    {{"static", Background::Static}, {"dynamic", Background::Dynamic}}};
constexpr std::array<std::pair<const char*, View>, 4> kView{
    {{"front", View::Front}, {"back", View::Back}, {"left", View::Left}, {"right", View::Right}}};
constexpr std::array<std::pair<const char*, ConditionAxis>, 3> kAxis{
    {{"lighting", ConditionAxis::Lighting}, {"background", ConditionAxis::Background},
     {"view", ConditionAxis::View}}};

template <typename E, std::size_t N>
std::string name_of(E v, const std::array<std::pair<const char*, E>, N>& table) {
  for (const auto& [name, value] : table) {
    if (value == v) return name;
  }
  return "?";
}

std::string tag_of(const EvalRecord& r, ConditionAxis axis) {
  switch (axis) {
    case ConditionAxis::Lighting: return to_string(r.lighting);
    case ConditionAxis::Background: return to_string(r.background);
    case ConditionAxis::View: return to_string(r.view);
  }
  return "?";
}

struct Accumulator {
  std::size_t count = 0;
  double mpjpe = 0.0, pck = 0.0, auc = 0.0;

  void add(const std::array<double, kJointCount>& errors) {
    ++count;
    double sum = 0.0;
    for (double e : errors) sum += e;
    mpjpe += sum / kJointCount;
    pck += pck_of(errors, kPckThresholdMm);
    auc += auc_of(errors);
  }

  MetricRow row(std::string group) const {
    const double n = static_cast<double>(count);
    return MetricRow{std::move(group), count, mpjpe / n, pck / n, auc / n};
  }
};

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.9g", v);
  return buf;
}

}  // namespace

double mpjpe(const Pose3D& pred, const Pose3D& gt) {
  const auto e = joint_errors(pred, gt);
  double sum = 0.0;
  for (double v : e) sum += v;
  return sum / kJointCount;
}

double pck(const Pose3D& pred, const Pose3D& gt, double alpha_mm) {
  if (!(alpha_mm >= 0.0)) throw Error(Errc::InvalidArgument, "PCK threshold must be non-negative");
  return pck_of(joint_errors(pred, gt), alpha_mm);
}

std::array<double, kAucThresholdCount> auc_thresholds() {
  std::array<double, kAucThresholdCount> t{};
  for (std::size_t i = 0; i < kAucThresholdCount; ++i) {
    t[i] = kAucMaxThresholdMm * static_cast<double>(i) / static_cast<double>(kAucThresholdCount - 1);
  }
  return t;
}

double auc(const Pose3D& pred, const Pose3D& gt) { return auc_of(joint_errors(pred, gt)); }

OcclusionResult occlude(const ToreVolume& vol, const OcclusionParams& params, std::mt19937_64& rng) {
  if (!(params.probability >= 0.0 && params.probability <= 1.0)) {
    throw Error(Errc::InvalidArgument, "occlusion probability must lie in [0, 1]");
  }
  if (params.max_width < 1 || params.max_height < 1) {
    throw Error(Errc::InvalidArgument, "occlusion size limits must be >= 1");
  }
  OcclusionResult out{vol, std::nullopt};
  std::uniform_real_distribution<double> coin(0.0, 1.0);
  if (!(coin(rng) < params.probability)) return out;

  const int w = vol.geometry.width;
  const int h = vol.geometry.height;
  PixelRect r;
  r.width = std::uniform_int_distribution<int>(1, std::min(params.max_width, w))(rng);
  r.height = std::uniform_int_distribution<int>(1, std::min(params.max_height, h))(rng);
  r.x = std::uniform_int_distribution<int>(0, w - r.width)(rng);
  r.y = std::uniform_int_distribution<int>(0, h - r.height)(rng);
  for (std::size_t c = 0; c < vol.channels(); ++c) {
    for (int y = r.y; y < r.y + r.height; ++y) {
      float* row = out.volume.values.data() + out.volume.index(c, static_cast<std::size_t>(y), 0);
      std::fill(row + r.x, row + r.x + r.width, 0.0f);
    }
  }
  out.rect = r;
  return out;
}

std::string to_string(Lighting v) { return name_of(v, kLighting); }
std::string to_string(Background v) { return name_of(v, kBackground); }
std::string to_string(View v) { return name_of(v, kView); }
std::string to_string(ConditionAxis v) { return name_of(v, kAxis); }
Lighting parse_lighting(const std::string& s) { return parse_enum(s, kLighting, "lighting"); }
Background parse_background(const std::string& s) { return parse_enum(s, kBackground, "background"); }
View parse_view(const std::string& s) { return parse_enum(s, kView, "view"); }
ConditionAxis parse_axis(const std::string& s) { return parse_enum(s, kAxis, "condition axis"); }

EvalReport evaluate(std::span<const EvalRecord> records, std::span<const ConditionAxis> group_by) {
  if (records.empty()) throw Error(Errc::EmptyInput, "no evaluation records");
  Accumulator overall;
  std::map<std::string, Accumulator> groups;
  std::array<double, kJointCount> joint_sum{};
  for (const auto& r : records) {
    const auto errors = joint_errors(r.pred, r.gt);
    overall.add(errors);
    for (std::size_t j = 0; j < kJointCount; ++j) joint_sum[j] += errors[j];
    if (!group_by.empty()) {
      std::string key;
      for (ConditionAxis axis : group_by) {
        if (!key.empty()) key += ';';
        key += to_string(axis) + "=" + tag_of(r, axis);
      }
      groups[key].add(errors);
    }
  }
  EvalReport report;
  report.overall = overall.row("all");
  for (const auto& [key, acc] : groups) report.groups.push_back(acc.row(key));
  for (double s : joint_sum) report.per_joint_mpjpe.push_back(s / static_cast<double>(records.size()));
  return report;
}

void write_report_csv(std::ostream& out, const EvalReport& report, const JointSet& joints) {
  out << "section,group,count,mpjpe_mm,pck,auc\n";
  auto row = [&](const char* section, const MetricRow& r) {
    out << section << ',' << r.group << ',' << r.count << ',' << fmt(r.mpjpe_mm) << ',' << fmt(r.pck)
        << ',' << fmt(r.auc) << '\n';
  };
  row("overall", report.overall);
  for (const auto& g : report.groups) row("group", g);
  for (std::size_t j = 0; j < report.per_joint_mpjpe.size(); ++j) {
    out << "joint," << joints.names[j] << ',' << report.overall.count << ','
        << fmt(report.per_joint_mpjpe[j]) << ",,\n";
  }
}

void write_report_table(std::ostream& out, const EvalReport& report, const JointSet& joints) {
  out << std::left << std::setw(40) << "group" << std::right << std::setw(8) << "count" << std::setw(12)
      << "MPJPE(mm)" << std::setw(10) << "PCK" << std::setw(10) << "AUC" << '\n';
  auto row = [&](const MetricRow& r) {
    out << std::left << std::setw(40) << r.group << std::right << std::setw(8) << r.count << std::fixed
        << std::setprecision(2) << std::setw(12) << r.mpjpe_mm << std::setprecision(4) << std::setw(10)
        << r.pck << std::setw(10) << r.auc << '\n';
  };
  row(report.overall);
  for (const auto& g : report.groups) row(g);
  out << "\nper-joint MPJPE (mm)\n";
  for (std::size_t j = 0; j < report.per_joint_mpjpe.size(); ++j) {
    out << std::left << std::setw(14) << joints.names[j] << std::right << std::setprecision(2)
        << std::setw(10) << report.per_joint_mpjpe[j] << '\n';
  }
  out.unsetf(std::ios::floatfield);
}

Pose3D read_pose_csv(std::istream& in, const JointSet& joints) {
  Pose3D pose;
  pose.joints.assign(kJointCount, Eigen::Vector3d::Zero());
  std::array<bool, kJointCount> seen{};
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || (line_no == 1 && line.rfind("joint", 0) == 0)) continue;
    std::istringstream ls(line);
    std::string name, x, y, z;
    if (!std::getline(ls, name, ',') || !std::getline(ls, x, ',') || !std::getline(ls, y, ',') ||
        !std::getline(ls, z)) {
      throw Error(Errc::Parse, "pose csv line " + std::to_string(line_no) + ": expected joint,x,y,z");
    }
    const std::size_t j = joints.find(name);
    if (j == kJointCount || seen[j]) {
      throw Error(Errc::JointCountMismatch, "pose csv line " + std::to_string(line_no) +
                                                ": unknown or repeated joint '" + name + "'");
    }
    try {
      pose.joints[j] = {std::stod(x), std::stod(y), std::stod(z)};
    } catch (const std::logic_error&) {
      throw Error(Errc::Parse, "pose csv line " + std::to_string(line_no) + ": bad number");
    }
    seen[j] = true;
  }
  if (!std::all_of(seen.begin(), seen.end(), [](bool b) { return b; })) {
    throw Error(Errc::JointCountMismatch, "pose csv does not list all 13 joints");
  }
  return pose;
}

void write_pose_csv(std::ostream& out, const Pose3D& pose, const JointSet& joints) {
  if (pose.joints.size() != kJointCount) throw Error(Errc::JointCountMismatch, "pose must have 13 joints");
  out << "joint,x,y,z\n" << std::setprecision(17);
  for (std::size_t j = 0; j < kJointCount; ++j) {
    out << joints.names[j] << ',' << pose.joints[j].x() << ',' << pose.joints[j].y() << ','
        << pose.joints[j].z() << '\n';
  }
}

std::vector<SweepRow> threshold_sweep(std::span<const ToreVolume> frames, MaskPredictorBackend& backend,
                                      std::span<const double> betas, std::span<const BinaryMask> truth) {
  if (frames.empty() || betas.empty()) throw Error(Errc::EmptyInput, "sweep needs frames and thresholds");
  if (!truth.empty() && truth.size() != frames.size()) {
    throw Error(Errc::LengthMismatch, "need one ground-truth mask per frame");
  }
  std::vector<SweepRow> rows;
  for (double beta : betas) {
    const auto start = std::chrono::steady_clock::now();
    const ScheduleResult schedule = schedule_masks(frames, backend, beta);
    const auto stop = std::chrono::steady_clock::now();
    SweepRow row{beta, schedule.backend_calls, std::chrono::duration<double>(stop - start).count(), {}};
    if (!truth.empty()) {
      double mae = 0.0;
      for (std::size_t k = 0; k < frames.size(); ++k) {
        mae += 1.0 - mask_quality_ground_truth(schedule.steps[k].mask, truth[k]);
      }
      row.mask_mae = mae / static_cast<double>(frames.size());
    }
    rows.push_back(row);
  }
  return rows;
}

void write_sweep_csv(std::ostream& out, const std::vector<SweepRow>& rows) {
  out << "beta,backend_calls,seconds,mask_mae\n";
  for (const auto& r : rows) {
    out << fmt(r.beta) << ',' << r.backend_calls << ',' << fmt(r.seconds) << ',';
    if (r.mask_mae) out << fmt(*r.mask_mae);
    out << '\n';
  }
}

}  // namespace evpose
