// Copyright 2026 The evpose Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "evpose/event_core.hpp"
#include "evpose/tensor_io.hpp"

namespace evpose {

struct ToreParams {
  std::size_t depth = 4;              // K, timestamps kept per pixel and polarity
  std::uint64_t tau_us = 5'000'000;   // oldest age that still contributes
};

/// Modified TORE value of an event `age_us` old:
///   v = ln(max(age, 1)),  v' = clamp(1 - v / ln(tau), 0, 0.7) / 0.7
/// Newest events map to 1, events at least tau old map to 0.
double tore_value(double age_us, double tau_us) noexcept;

/// Per-pixel, per-polarity FIFOs of the K most recent absolute timestamps.
class ToreState {
 public:
  ToreState(SensorGeometry geometry, ToreParams params = {});

  /// Pushes e.t to the front of its FIFO, dropping the oldest entry when full.
  /// Throws OutOfBounds or TimeRegression (e.t earlier than the latest ingested event).
  void ingest(const Event& e);
  void ingest(const EventStream& s);

  /// Stored timestamps at (x, y, polarity), newest first.
  std::span<const std::uint64_t> fifo(std::uint16_t x, std::uint16_t y, Polarity p) const;

  const SensorGeometry& geometry() const noexcept { return geometry_; }
  const ToreParams& params() const noexcept { return params_; }
  std::uint64_t latest_us() const noexcept { return latest_; }
  bool empty() const noexcept { return !any_; }

 private:
  std::size_t slot(std::size_t pixel, int pol) const noexcept { return pixel * 2 + pol; }

  SensorGeometry geometry_;
  ToreParams params_;
  std::vector<std::uint64_t> stamps_;  // [pixel][polarity][k], k = 0 newest
  std::vector<std::uint8_t> counts_;   // [pixel][polarity]
  std::uint64_t latest_ = 0;
  bool any_ = false;
};

/// Dense 2K-channel volume. Channel `polarity_index(p) * K + k` holds the value of the
/// k-th most recent event of polarity p at each pixel.
struct ToreVolume {
  SensorGeometry geometry;
  std::size_t depth = 0;
  std::uint64_t query_time_us = 0;
  std::vector<float> values;  // [channel][y][x]

  std::size_t channels() const noexcept { return 2 * depth; }
  std::size_t plane_size() const noexcept { return geometry.pixel_count(); }
  std::size_t index(std::size_t c, std::size_t y, std::size_t x) const noexcept {
    return (c * geometry.height + y) * geometry.width + x;
  }
  float at(std::size_t c, std::size_t y, std::size_t x) const noexcept {
    return values[index(c, y, x)];
  }

  Tensor3 to_tensor() const;
  static ToreVolume from_tensor(const Tensor3& t, std::uint64_t query_time_us = 0);

  friend bool operator==(const ToreVolume&, const ToreVolume&) = default;
};

/// Volume of `state` as seen at `t_query_us`. Throws TimeRegression when the query
/// precedes the latest ingested event and InvalidTau when tau <= 1 us.
ToreVolume tore_materialize(const ToreState& state, std::uint64_t t_query_us);

/// One-pass batch construction; bitwise equal to ingesting `s` event by event and
/// materializing at `t_query_us`.
ToreVolume build_tore(const EventStream& s, ToreParams params, std::uint64_t t_query_us);

struct MonotoneWitness {
  bool holds = true;
  std::size_t entries_checked = 0;
  std::size_t violations = 0;
  double max_increase = 0.0;  // largest v'(t2) - v'(t1) seen, 0 when monotone
};

/// Materializes at t1 < t2 and confirms no entry grew.
MonotoneWitness tore_monotone_check(const ToreState& state, std::uint64_t t1_us,
                                    std::uint64_t t2_us);

}  // namespace evpose
