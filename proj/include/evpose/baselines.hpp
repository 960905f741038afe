// Copyright 2026 The evpose Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "evpose/event_core.hpp"
#include "evpose/tensor_io.hpp"

// Comparison representations: voxel grid, per-polarity count frame and time surface.

namespace evpose {

struct TimeWindow {
  std::uint64_t begin_us = 0;  // inclusive
  std::uint64_t end_us = 0;    // exclusive
  std::uint64_t duration() const noexcept { return end_us > begin_us ? end_us - begin_us : 0; }
};

/// B temporal bins of signed (+1/-1 per event) counts per pixel.
struct VoxelGrid {
  SensorGeometry geometry;
  std::size_t bins = 0;
  std::vector<std::int32_t> values;  // [bin][y][x]

  std::int32_t at(std::size_t b, std::size_t y, std::size_t x) const noexcept {
    return values[(b * geometry.height + y) * geometry.width + x];
  }
  Tensor3 to_tensor() const;
};

/// Per-polarity event counts; plane 0 positive, plane 1 negative.
struct CountFrame {
  SensorGeometry geometry;
  std::vector<std::uint32_t> counts;  // [polarity][y][x]

  std::uint32_t at(int pol, std::size_t y, std::size_t x) const noexcept {
    return counts[(static_cast<std::size_t>(pol) * geometry.height + y) * geometry.width + x];
  }
  Tensor3 to_tensor() const;
};

/// Latest timestamp per pixel and polarity, -1 where nothing fired.
struct TimeSurface {
  SensorGeometry geometry;
  std::uint64_t query_time_us = 0;
  std::vector<std::int64_t> latest;  // [polarity][y][x]

  std::int64_t at(int pol, std::size_t y, std::size_t x) const noexcept {
    return latest[(static_cast<std::size_t>(pol) * geometry.height + y) * geometry.width + x];
  }
  /// exp(-(t_query - t) / decay_us), 0 where nothing fired.
  Tensor3 to_tensor(double decay_us) const;
};

inline constexpr std::size_t kDefaultVoxelBins = 4;

/// Events outside the window are ignored. Bin b covers
/// [begin + b*D/B, begin + (b+1)*D/B) with D the window duration.
VoxelGrid build_voxel_grid(const EventStream& s, TimeWindow window,
                           std::size_t bins = kDefaultVoxelBins);
CountFrame build_count_frame(const EventStream& s, TimeWindow window);
/// Considers events with t <= t_query_us.
TimeSurface build_time_surface(const EventStream& s, std::uint64_t t_query_us);

}  // namespace evpose
