// Copyright 2026 The evpose Authors
// SPDX-License-Identifier: Apache-2.0

#include "evpose/baselines.hpp"

#include <algorithm>
#include <cmath>

#include "evpose/error.hpp"

namespace evpose {
namespace {

__extension__ typedef unsigned __int128 u128;

void check_window(const TimeWindow& w) {
  if (w.duration() == 0) throw Error(Errc::ZeroWindow, "window must have positive duration");
}

bool inside(const Event& e, const TimeWindow& w) { return e.t >= w.begin_us && e.t < w.end_us; }

}  // namespace

VoxelGrid build_voxel_grid(const EventStream& s, TimeWindow window, std::size_t bins) {
  check_window(window);
  if (bins == 0) throw Error(Errc::ZeroBins, "voxel grid needs at least one bin");
  const SensorGeometry& g = s.geometry();
  VoxelGrid grid{g, bins, std::vector<std::int32_t>(bins * g.pixel_count(), 0)};
  const u128 duration = window.duration();
  for (const Event& e : s) {
    if (!inside(e, window)) continue;
    const auto b = static_cast<std::size_t>(
        (static_cast<u128>(e.t - window.begin_us) * bins) / duration);
    grid.values[(b * g.height + e.y) * g.width + e.x] += static_cast<std::int32_t>(e.polarity);
  }
  return grid;
}

CountFrame build_count_frame(const EventStream& s, TimeWindow window) {
  check_window(window);
  const SensorGeometry& g = s.geometry();
  CountFrame frame{g, std::vector<std::uint32_t>(2 * g.pixel_count(), 0)};
  for (const Event& e : s) {
    if (!inside(e, window)) continue;
    ++frame.counts[(static_cast<std::size_t>(polarity_index(e.polarity)) * g.height + e.y) *
                       g.width + e.x];
  }
  return frame;
}

TimeSurface build_time_surface(const EventStream& s, std::uint64_t t_query_us) {
  const SensorGeometry& g = s.geometry();
  TimeSurface ts{g, t_query_us, std::vector<std::int64_t>(2 * g.pixel_count(), -1)};
  for (const Event& e : s) {
    if (e.t > t_query_us) continue;
    auto& slot = ts.latest[(static_cast<std::size_t>(polarity_index(e.polarity)) * g.height + e.y) *
                               g.width + e.x];
    slot = std::max(slot, static_cast<std::int64_t>(e.t));
  }
  return ts;
}

Tensor3 VoxelGrid::to_tensor() const {
  Tensor3 t{static_cast<std::uint32_t>(bins), geometry.height, geometry.width, {}};
  t.data.assign(values.begin(), values.end());
  return t;
}

Tensor3 CountFrame::to_tensor() const {
  Tensor3 t{2, geometry.height, geometry.width, {}};
  t.data.assign(counts.begin(), counts.end());
  return t;
}

Tensor3 TimeSurface::to_tensor(double decay_us) const {
  Tensor3 t{2, geometry.height, geometry.width, std::vector<float>(latest.size(), 0.0f)};
  for (std::size_t i = 0; i < latest.size(); ++i) {
    if (latest[i] < 0) continue;
    const double age = static_cast<double>(query_time_us) - static_cast<double>(latest[i]);
    t.data[i] = static_cast<float>(std::exp(-age / decay_us));
  }
  return t;
}

}  // namespace evpose
