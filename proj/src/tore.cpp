// Copyright 2026 The evpose Authors
// SPDX-License-Identifier: Apache-2.0

#include "evpose/tore.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "evpose/error.hpp"

namespace evpose {
namespace {

constexpr double kSaturation = 0.7;

void check_params(const ToreParams& params) {
  if (params.tau_us <= 1) throw Error(Errc::InvalidTau, "tau must exceed 1 us");
  if (params.depth == 0 || params.depth > 255) {
    throw Error(Errc::InvalidArgument, "FIFO depth must be in [1, 255]");
  }
}

// Writes the values of one newest-first FIFO into its channels.
void emit_fifo(ToreVolume& vol, std::size_t pixel, int pol, const std::uint64_t* stamps,
               std::size_t count, std::uint64_t t_query, double tau) {
  for (std::size_t k = 0; k < count; ++k) {
    const double age = static_cast<double>(t_query - stamps[k]);
    const std::size_t c = static_cast<std::size_t>(pol) * vol.depth + k;
    vol.values[c * vol.plane_size() + pixel] = static_cast<float>(tore_value(age, tau));
  }
}

ToreVolume empty_volume(SensorGeometry g, std::size_t depth, std::uint64_t t_query) {
  ToreVolume vol;
  vol.geometry = g;
  vol.depth = depth;
  vol.query_time_us = t_query;
  vol.values.assign(2 * depth * g.pixel_count(), 0.0f);
  return vol;
}

}  // namespace

double tore_value(double age_us, double tau_us) noexcept {
  const double v = std::log(std::max(age_us, 1.0));
  const double flipped = 1.0 - v / std::log(tau_us);
  return std::clamp(flipped, 0.0, kSaturation) / kSaturation;
}

ToreState::ToreState(SensorGeometry geometry, ToreParams params)
    : geometry_(geometry), params_(params) {
  geometry_.validate();
  check_params(params_);
  stamps_.assign(geometry_.pixel_count() * 2 * params_.depth, 0);
  counts_.assign(geometry_.pixel_count() * 2, 0);
}

void ToreState::ingest(const Event& e) {
  if (!geometry_.contains(e.x, e.y)) {
    throw Error(Errc::OutOfBounds, "event at (" + std::to_string(e.x) + ", " +
                                       std::to_string(e.y) + ") outside sensor");
  }
  if (any_ && e.t < latest_) {
    throw Error(Errc::TimeRegression, "event t=" + std::to_string(e.t) +
                                          " precedes latest t=" + std::to_string(latest_));
  }
  const std::size_t s = slot(std::size_t{e.y} * geometry_.width + e.x, polarity_index(e.polarity));
  std::uint64_t* fifo = stamps_.data() + s * params_.depth;
  const std::size_t n = counts_[s];
  const std::size_t keep = std::min(n, params_.depth - 1);
  std::copy_backward(fifo, fifo + keep, fifo + keep + 1);
  fifo[0] = e.t;
  counts_[s] = static_cast<std::uint8_t>(keep + 1);
  latest_ = e.t;
  any_ = true;
}

void ToreState::ingest(const EventStream& s) {
  if (s.geometry() != geometry_) throw Error(Errc::GeometryMismatch, "stream geometry differs");
  for (const Event& e : s) ingest(e);
}

std::span<const std::uint64_t> ToreState::fifo(std::uint16_t x, std::uint16_t y,
                                               Polarity p) const {
  if (!geometry_.contains(x, y)) throw Error(Errc::OutOfBounds, "fifo query outside sensor");
  const std::size_t s = slot(std::size_t{y} * geometry_.width + x, polarity_index(p));
  return {stamps_.data() + s * params_.depth, counts_[s]};
}

Tensor3 ToreVolume::to_tensor() const {
  return Tensor3{static_cast<std::uint32_t>(channels()), geometry.height, geometry.width, values};
}

ToreVolume ToreVolume::from_tensor(const Tensor3& t, std::uint64_t query_time_us) {
  if (t.channels == 0 || t.channels % 2 != 0 || t.width == 0 || t.height == 0 ||
      t.width > 0xFFFF || t.height > 0xFFFF) {
    throw Error(Errc::InvalidArgument, "tensor is not a 2K-channel TORE volume");
  }
  ToreVolume vol;
  vol.geometry = SensorGeometry{static_cast<std::uint16_t>(t.width),
                                static_cast<std::uint16_t>(t.height)};
  vol.depth = t.channels / 2;
  vol.query_time_us = query_time_us;
  vol.values = t.data;
  return vol;
}

ToreVolume tore_materialize(const ToreState& state, std::uint64_t t_query_us) {
  const ToreParams& params = state.params();
  check_params(params);
  if (!state.empty() && t_query_us < state.latest_us()) {
    throw Error(Errc::TimeRegression, "query time precedes the latest ingested event");
  }
  const SensorGeometry& g = state.geometry();
  ToreVolume vol = empty_volume(g, params.depth, t_query_us);
  const double tau = static_cast<double>(params.tau_us);
  for (std::uint16_t y = 0; y < g.height; ++y) {
    for (std::uint16_t x = 0; x < g.width; ++x) {
      const std::size_t pixel = std::size_t{y} * g.width + x;
      for (Polarity p : {Polarity::Positive, Polarity::Negative}) {
        const auto fifo = state.fifo(x, y, p);
        emit_fifo(vol, pixel, polarity_index(p), fifo.data(), fifo.size(), t_query_us, tau);
      }
    }
  }
  return vol;
}

ToreVolume build_tore(const EventStream& s, ToreParams params, std::uint64_t t_query_us) {
  check_params(params);
  const SensorGeometry& g = s.geometry();
  const auto events = s.events();
  for (std::size_t i = 1; i < events.size(); ++i) {
    if (events[i].t < events[i - 1].t) {
      throw Error(Errc::TimeRegression, "stream is not time ordered at event " + std::to_string(i));
    }
  }
  if (!events.empty() && t_query_us < events.back().t) {
    throw Error(Errc::TimeRegression, "query time precedes the last event");
  }

  // Walking backwards, the first K hits per slot are exactly the FIFO contents.
  const std::size_t depth = params.depth;
  std::vector<std::uint64_t> stamps(g.pixel_count() * 2 * depth);
  std::vector<std::uint8_t> counts(g.pixel_count() * 2, 0);
  for (auto it = events.rbegin(); it != events.rend(); ++it) {
    const std::size_t slot =
        (std::size_t{it->y} * g.width + it->x) * 2 + static_cast<std::size_t>(polarity_index(it->polarity));
    if (counts[slot] < depth) stamps[slot * depth + counts[slot]++] = it->t;
  }

  ToreVolume vol = empty_volume(g, depth, t_query_us);
  const double tau = static_cast<double>(params.tau_us);
  for (std::size_t slot = 0; slot < counts.size(); ++slot) {
    emit_fifo(vol, slot / 2, static_cast<int>(slot % 2), stamps.data() + slot * depth, counts[slot],
              t_query_us, tau);
  }
  return vol;
}

MonotoneWitness tore_monotone_check(const ToreState& state, std::uint64_t t1_us,
                                    std::uint64_t t2_us) {
  if (t2_us <= t1_us) throw Error(Errc::InvalidArgument, "monotone check needs t1 < t2");
  const ToreVolume a = tore_materialize(state, t1_us);
  const ToreVolume b = tore_materialize(state, t2_us);
  MonotoneWitness w;
  w.entries_checked = a.values.size();
  for (std::size_t i = 0; i < a.values.size(); ++i) {
    const double grow = static_cast<double>(b.values[i]) - a.values[i];
    if (grow > 0.0) {
      w.holds = false;
      ++w.violations;
      w.max_increase = std::max(w.max_increase, grow);
    }
  }
  return w;
}

}  // namespace evpose
