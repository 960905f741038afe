// Copyright 2026 The evpose Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "evpose/event_core.hpp"

namespace evpose {

/// Row-major single-channel image over a sensor geometry.
template <typename T>
struct Image {
  SensorGeometry geometry;
  std::vector<T> pixels;

  Image() = default;
  Image(SensorGeometry g, T fill = T{}) : geometry(g), pixels(g.pixel_count(), fill) {}
  Image(SensorGeometry g, std::vector<T> data) : geometry(g), pixels(std::move(data)) {}

  T& at(std::size_t x, std::size_t y) noexcept { return pixels[y * geometry.width + x]; }
  const T& at(std::size_t x, std::size_t y) const noexcept { return pixels[y * geometry.width + x]; }
  std::size_t size() const noexcept { return pixels.size(); }

  friend bool operator==(const Image&, const Image&) = default;
};

using GrayImage = Image<double>;          // intensity in [0, 1]
using SoftMask = Image<float>;            // per-pixel probability in [0, 1]
using BinaryMask = Image<std::uint8_t>;   // 1 = foreground

}  // namespace evpose
