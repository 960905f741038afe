// Copyright 2026 The evpose Authors
// SPDX-License-Identifier: Apache-2.0

#include <algorithm>
#include <cmath>
#include <vector>

#include "evpose/error.hpp"
#include "evpose/gating.hpp"

namespace evpose {
namespace {

// Separable square max/min filter. `outside` is the value assumed beyond the border.
BinaryMask square_filter(const BinaryMask& m, int radius, bool is_max, std::uint8_t outside) {
  if (radius <= 0) return m;
  const int w = m.geometry.width;
  const int h = m.geometry.height;
  auto pick = [is_max](std::uint8_t a, std::uint8_t b) { return is_max ? std::max(a, b) : std::min(a, b); };
  BinaryMask tmp(m.geometry);
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      std::uint8_t acc = is_max ? 0 : 1;
      for (int dx = -radius; dx <= radius; ++dx) {
        const int xx = x + dx;
        acc = pick(acc, (xx < 0 || xx >= w) ? outside : m.at(static_cast<std::size_t>(xx), static_cast<std::size_t>(y)));
      }
      tmp.at(static_cast<std::size_t>(x), static_cast<std::size_t>(y)) = acc;
    }
  }
  BinaryMask out(m.geometry);
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      std::uint8_t acc = is_max ? 0 : 1;
      for (int dy = -radius; dy <= radius; ++dy) {
        const int yy = y + dy;
        acc = pick(acc, (yy < 0 || yy >= h) ? outside : tmp.at(static_cast<std::size_t>(x), static_cast<std::size_t>(yy)));
      }
      out.at(static_cast<std::size_t>(x), static_cast<std::size_t>(y)) = acc;
    }
  }
  return out;
}

}  // namespace

BinaryMask dilate(const BinaryMask& m, int radius) { return square_filter(m, radius, true, 0); }

BinaryMask erode(const BinaryMask& m, int radius) { return square_filter(m, radius, false, 1); }

BinaryMask largest_component(const BinaryMask& m) {
  const int w = m.geometry.width;
  const int h = m.geometry.height;
  std::vector<int> label(m.size(), -1);
  std::vector<std::size_t> stack;
  int best = -1;
  std::size_t best_size = 0;
  int next = 0;
  for (std::size_t start = 0; start < m.size(); ++start) {
    if (!m.pixels[start] || label[start] >= 0) continue;
    std::size_t count = 0;
    stack.push_back(start);
    label[start] = next;
    while (!stack.empty()) {
      const std::size_t p = stack.back();
      stack.pop_back();
      ++count;
      const int px = static_cast<int>(p % static_cast<std::size_t>(w));
      const int py = static_cast<int>(p / static_cast<std::size_t>(w));
      for (int dy = -1; dy <= 1; ++dy) {
        for (int dx = -1; dx <= 1; ++dx) {
          const int nx = px + dx, ny = py + dy;
          if (nx < 0 || ny < 0 || nx >= w || ny >= h) continue;
          const std::size_t q = static_cast<std::size_t>(ny) * static_cast<std::size_t>(w) + static_cast<std::size_t>(nx);
          if (m.pixels[q] && label[q] < 0) {
            label[q] = next;
            stack.push_back(q);
          }
        }
      }
    }
    if (count > best_size) {
      best_size = count;
      best = next;
    }
    ++next;
  }
  BinaryMask out(m.geometry);
  if (best < 0) return out;
  for (std::size_t i = 0; i < m.size(); ++i) out.pixels[i] = label[i] == best ? 1 : 0;
  return out;
}

ReferenceMaskBackend::ReferenceMaskBackend(ReferenceBackendParams params) : params_(params) {
  if (params_.horizon == 0) throw Error(Errc::EmptyPlan, "reference backend horizon must be >= 1");
  if (!(params_.activity_percentile >= 0.0 && params_.activity_percentile <= 1.0)) {
    throw Error(Errc::InvalidArgument, "activity percentile must lie in [0, 1]");
  }
  if (params_.closing_radius < 0 || params_.grow_per_step < 0) {
    throw Error(Errc::InvalidArgument, "morphology radii must be non-negative");
  }
}

MaskPlan ReferenceMaskBackend::predict(const ToreVolume& vol, std::size_t frame_index) {
  const std::size_t plane = vol.plane_size();
  std::vector<float> activity(plane, 0.0f);
  for (std::size_t c = 0; c < vol.channels(); ++c) {
    const float* row = vol.values.data() + c * plane;
    for (std::size_t i = 0; i < plane; ++i) activity[i] = std::max(activity[i], row[i]);
  }

  std::vector<float> active;
  double total = 0.0;
  for (float a : activity) {
    if (a > 0.0f) {
      active.push_back(a);
      total += a;
    }
  }

  MaskPlan plan;
  plan.issued_at = frame_index;
  BinaryMask current(vol.geometry);
  double score = params_.score_floor;
  if (!active.empty()) {
    const auto rank = static_cast<std::size_t>(
        std::floor(params_.activity_percentile * static_cast<double>(active.size() - 1)));
    std::nth_element(active.begin(), active.begin() + static_cast<std::ptrdiff_t>(rank), active.end());
    const float threshold = active[rank];
    for (std::size_t i = 0; i < plane; ++i) current.pixels[i] = activity[i] > 0.0f && activity[i] >= threshold;
    current = largest_component(erode(dilate(current, params_.closing_radius), params_.closing_radius));
    double captured = 0.0;
    for (std::size_t i = 0; i < plane; ++i) {
      if (current.pixels[i]) captured += activity[i];
    }
    score = captured / total;
  }

  for (std::size_t d = 0; d < params_.horizon; ++d) {
    plan.masks.push_back(d == 0 ? current : dilate(current, static_cast<int>(d) * params_.grow_per_step));
    const double decayed = active.empty() ? params_.score_floor
                                          : score * std::pow(params_.score_decay, static_cast<double>(d));
    plan.scores.push_back(std::clamp(std::max(decayed, params_.score_floor), 0.0, 1.0));
  }
  return plan;
}

}  // namespace evpose
