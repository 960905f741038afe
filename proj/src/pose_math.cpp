// Copyright 2026 The evpose Authors
// SPDX-License-Identifier: Apache-2.0

#include "evpose/pose_math.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include <Eigen/LU>

#include "evpose/error.hpp"

namespace evpose {
namespace {

constexpr double kSimplexTolerance = 1e-6;

void check_sizes(std::size_t a, std::size_t b, const char* what) {
  if (a != b) throw Error(Errc::LengthMismatch, std::string(what) + ": operand sizes differ");
}

void check_distribution(std::span<const double> p) {
  double sum = 0.0;
  for (double v : p) {
    if (!(v >= 0.0) || !std::isfinite(v)) throw Error(Errc::InvalidDistribution, "negative or non-finite mass");
    sum += v;
  }
  if (std::abs(sum - 1.0) > kSimplexTolerance) {
    throw Error(Errc::InvalidDistribution, "mass sums to " + std::to_string(sum));
  }
}

double kl_term(double a, double m) { return a > 0.0 ? a * std::log(a / m) : 0.0; }

double clip(double p) { return std::clamp(p, kBceClip, 1.0 - kBceClip); }

void check_probabilities(std::span<const double> v, const char* what) {
  for (double x : v) {
    if (!(x >= 0.0 && x <= 1.0)) {
      throw Error(Errc::ProbabilityOutOfRange, std::string(what) + " outside [0, 1]");
    }
  }
}

// Weighted mass and coordinate sums of a grid, validated.
struct Moments {
  double mass = 0.0;
  double first = 0.0;
  double second = 0.0;
};

Moments moments(const Heatmap& h) {
  if (h.size == 0 || h.values.size() != h.size * h.size) {
    throw Error(Errc::InvalidArgument, "heatmap must be square and non-empty");
  }
  Moments m;
  for (std::size_t row = 0; row < h.size; ++row) {
    const double b = cell_center(row, h.size);
    for (std::size_t col = 0; col < h.size; ++col) {
      const double w = h.at(row, col);
      if (!(w >= 0.0) || !std::isfinite(w)) throw Error(Errc::InvalidDistribution, "negative heatmap entry");
      m.mass += w;
      m.first += w * cell_center(col, h.size);
      m.second += w * b;
    }
  }
  if (!(m.mass > 0.0)) throw Error(Errc::ZeroMass, "heatmap has no mass");
  return m;
}

}  // namespace

double cell_center(std::size_t k, std::size_t resolution) noexcept {
  return static_cast<double>(2 * k + 1) / static_cast<double>(resolution) - 1.0;
}

std::array<double, 2> soft_argmax(const Heatmap& h) {
  const Moments m = moments(h);
  return {m.first / m.mass, m.second / m.mass};
}

std::vector<double> soft_argmax_gradient(const Heatmap& h, int axis) {
  const Moments m = moments(h);
  const double mean = (axis == 0 ? m.first : m.second) / m.mass;
  std::vector<double> g(h.values.size());
  for (std::size_t row = 0; row < h.size; ++row) {
    for (std::size_t col = 0; col < h.size; ++col) {
      const double c = cell_center(axis == 0 ? col : row, h.size);
      g[row * h.size + col] = (c - mean) / m.mass;
    }
  }
  return g;
}

Eigen::Vector3d fuse_planes(const HeatmapTriplet& t) {
  const auto xy = soft_argmax(t.xy);
  const auto xz = soft_argmax(t.xz);
  const auto zy = soft_argmax(t.zy);
  return {xy[0], xy[1], 0.5 * (xz[1] + zy[0])};
}

double jsd_unnormalized(std::span<const double> p, std::span<const double> q) {
  check_sizes(p.size(), q.size(), "jsd");
  double sum = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    const double m = 0.5 * (p[i] + q[i]);
    if (m <= 0.0) continue;
    sum += 0.5 * kl_term(p[i], m) + 0.5 * kl_term(q[i], m);
  }
  return sum;
}

double jsd(std::span<const double> p, std::span<const double> q) {
  check_sizes(p.size(), q.size(), "jsd");
  check_distribution(p);
  check_distribution(q);
  return std::max(0.0, jsd_unnormalized(p, q));
}

std::vector<double> jsd_gradient_q(std::span<const double> p, std::span<const double> q) {
  check_sizes(p.size(), q.size(), "jsd gradient");
  std::vector<double> g(q.size());
  for (std::size_t i = 0; i < q.size(); ++i) g[i] = 0.5 * std::log(2.0 * q[i] / (p[i] + q[i]));
  return g;
}

double bce(std::span<const double> target, std::span<const double> predicted) {
  check_sizes(target.size(), predicted.size(), "bce");
  if (target.empty()) throw Error(Errc::EmptyInput, "bce of empty input");
  check_probabilities(target, "bce target");
  check_probabilities(predicted, "bce prediction");
  double sum = 0.0;
  for (std::size_t i = 0; i < target.size(); ++i) {
    const double p = clip(predicted[i]);
    sum -= target[i] * std::log(p) + (1.0 - target[i]) * std::log(1.0 - p);
  }
  return sum / static_cast<double>(target.size());
}

std::vector<double> bce_gradient(std::span<const double> target, std::span<const double> predicted) {
  check_sizes(target.size(), predicted.size(), "bce gradient");
  const double n = static_cast<double>(target.size());
  std::vector<double> g(target.size(), 0.0);
  for (std::size_t i = 0; i < target.size(); ++i) {
    const double p = predicted[i];
    if (p <= kBceClip || p >= 1.0 - kBceClip) continue;
    g[i] = (-(target[i] / p) + (1.0 - target[i]) / (1.0 - p)) / n;
  }
  return g;
}

double mse(std::span<const double> target, std::span<const double> predicted) {
  check_sizes(target.size(), predicted.size(), "mse");
  if (target.empty()) throw Error(Errc::EmptyInput, "mse of empty input");
  double sum = 0.0;
  for (std::size_t i = 0; i < target.size(); ++i) {
    const double d = predicted[i] - target[i];
    sum += d * d;
  }
  return sum / static_cast<double>(target.size());
}

std::vector<double> mse_gradient(std::span<const double> target, std::span<const double> predicted) {
  check_sizes(target.size(), predicted.size(), "mse gradient");
  const double n = static_cast<double>(target.size());
  std::vector<double> g(target.size());
  for (std::size_t i = 0; i < target.size(); ++i) g[i] = 2.0 * (predicted[i] - target[i]) / n;
  return g;
}

double soft_mask_score(const SoftMask& predicted, const BinaryMask& truth) {
  if (predicted.geometry != truth.geometry) throw Error(Errc::GeometryMismatch, "mask geometry differs");
  double abs_err = 0.0;
  for (std::size_t i = 0; i < truth.size(); ++i) {
    abs_err += std::abs(static_cast<double>(truth.pixels[i] ? 1 : 0) - predicted.pixels[i]);
  }
  return 1.0 - abs_err / static_cast<double>(truth.size());
}

MaskLossTerms mask_loss(const std::vector<SoftMask>& predicted, const std::vector<BinaryMask>& truth,
                        std::span<const double> predicted_scores) {
  if (predicted.empty()) throw Error(Errc::EmptyInput, "mask series is empty");
  if (predicted.size() != truth.size() || predicted.size() != predicted_scores.size()) {
    throw Error(Errc::LengthMismatch, "mask series, truth and scores must have equal length");
  }
  std::vector<double> targets, probs;
  std::vector<double> score_truth;
  MaskLossTerms terms;
  for (std::size_t k = 0; k < predicted.size(); ++k) {
    if (predicted[k].geometry != truth[k].geometry) {
      throw Error(Errc::GeometryMismatch, "mask geometry differs at index " + std::to_string(k));
    }
    for (std::size_t i = 0; i < truth[k].size(); ++i) {
      targets.push_back(truth[k].pixels[i] ? 1.0 : 0.0);
      probs.push_back(predicted[k].pixels[i]);
    }
    score_truth.push_back(soft_mask_score(predicted[k], truth[k]));
  }
  terms.bce_series = bce(targets, probs);
  const std::size_t n0 = truth[0].size();
  terms.bce_current = bce(std::span(targets).first(n0), std::span(probs).first(n0));
  terms.mse_scores = mse(score_truth, predicted_scores);
  terms.total = terms.bce_series + terms.bce_current + terms.mse_scores;
  return terms;
}

HpeLossTerms hpe_loss(const std::vector<BlockOutput>& blocks,
                      const std::vector<HeatmapTriplet>& truth_heatmaps, const Pose3D& truth_pose) {
  if (blocks.empty()) throw Error(Errc::EmptyInput, "no prediction blocks");
  const std::size_t joints = truth_pose.joints.size();
  if (truth_heatmaps.size() != joints) {
    throw Error(Errc::JointCountMismatch, "ground-truth heatmaps and pose disagree on joint count");
  }
  HpeLossTerms terms;
  for (const auto& block : blocks) {
    if (block.pose.joints.size() != joints || block.heatmaps.size() != joints) {
      throw Error(Errc::JointCountMismatch, "block joint count differs from ground truth");
    }
    for (std::size_t j = 0; j < joints; ++j) {
      terms.geometric += (block.pose.joints[j] - truth_pose.joints[j]).norm();
      const auto& h = truth_heatmaps[j];
      const auto& hh = block.heatmaps[j];
      terms.divergence += jsd(h.xy.values, hh.xy.values) + jsd(h.xz.values, hh.xz.values) +
                          jsd(h.zy.values, hh.zy.values);
    }
  }
  terms.total = terms.geometric + terms.divergence;
  return terms;
}

double gradient_check(const ScalarFn& f, const GradientFn& gradient, std::span<const double> point,
                      double step) {
  if (!(step >= 1e-6 && step <= 1e-3)) {
    throw Error(Errc::InvalidArgument, "finite-difference step must lie in [1e-6, 1e-3]");
  }
  const std::vector<double> analytic = gradient(point);
  check_sizes(analytic.size(), point.size(), "gradient_check");
  std::vector<double> x(point.begin(), point.end());
  double worst = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double saved = x[i];
    x[i] = saved + step;
    const double up = f(x);
    x[i] = saved - step;
    const double down = f(x);
    x[i] = saved;
    const double fd = (up - down) / (2.0 * step);
    if (!std::isfinite(up) || !std::isfinite(down) || !std::isfinite(analytic[i])) {
      throw Error(Errc::NonFinite, "non-finite value at coordinate " + std::to_string(i));
    }
    worst = std::max(worst, std::abs(analytic[i] - fd) / (std::abs(fd) + 1e-8));
  }
  return worst;
}

Pose3D denormalize(const Pose3D& pose, const CameraModel& cam, double head_depth_mm,
                   const NormalizationFrame& frame) {
  if (!(head_depth_mm > 0.0) || !std::isfinite(head_depth_mm)) {
    throw Error(Errc::InvalidDepth, "head depth must be positive");
  }
  cam.validate();
  const Eigen::Matrix3d k_inv = cam.intrinsic.inverse();
  const double w = frame.image.width;
  const double h = frame.image.height;
  Pose3D out;
  out.joints.reserve(pose.joints.size());
  for (const auto& n : pose.joints) {
    if (!n.allFinite()) throw Error(Errc::NonFinite, "normalized joint is not finite");
    const double depth = head_depth_mm + n.z() * frame.depth_half_range_mm;
    if (!(depth > 0.0)) throw Error(Errc::InvalidDepth, "joint depth is not positive");
    const Eigen::Vector3d pixel((n.x() + 1.0) * 0.5 * w, (n.y() + 1.0) * 0.5 * h, 1.0);
    const Eigen::Vector3d ray = k_inv * pixel;
    out.joints.push_back(cam.to_world(ray * (depth / ray.z())));
  }
  return out;
}

}  // namespace evpose
