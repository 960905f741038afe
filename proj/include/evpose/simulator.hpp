// Copyright 2026 The evpose Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

#include "evpose/event_core.hpp"
#include "evpose/image.hpp"

namespace evpose {

/// Rendered grayscale video. Frame k is stamped start_us + round(k * 1e6 / fps).
struct FrameSequence {
  SensorGeometry geometry;
  double fps = 0.0;
  std::uint64_t start_us = 0;
  std::vector<GrayImage> frames;

  std::uint64_t frame_time_us(std::size_t k) const;
  void validate() const;
};

struct MaskSequence {
  SensorGeometry geometry;
  double fps = 0.0;
  std::vector<BinaryMask> masks;
};

struct PixelCoord {
  std::uint16_t x = 0;
  std::uint16_t y = 0;
};

struct PixelModelParams {
  double theta_pos = 0.2;         // log-intensity step per ON event
  double theta_neg = 0.2;         // log-intensity step per OFF event
  double leak_rate_hz = 0.1;      // intensity-independent noise rate per pixel
  double shot_noise_scale = 1.0;  // extra rate (Hz) at full darkness, scaled by (1 - I)
  double eps = 1e-3;              // floor inside ln(I + eps)
  std::uint64_t seed = 0;
  std::vector<PixelCoord> hot_pixels;
  double hot_pixel_rate_hz = 100.0;

  void validate(SensorGeometry g) const;
};

/// Rec.601 luma.
double rec601_luma(double r, double g, double b) noexcept;
/// Interleaved RGB in [0, 1] to gray.
GrayImage rgb_to_gray(SensorGeometry g, std::span<const double> rgb);

/// out = mask * fg + (1 - mask) * bg, frame by frame.
FrameSequence composite(const FrameSequence& fg, const MaskSequence& fg_masks,
                        const FrameSequence& bg);

/// Inserts factor - 1 linearly blended frames between neighbours; fps scales by factor.
FrameSequence interpolate_linear(const FrameSequence& f, unsigned factor);

/// Noise rate (Hz) of one pixel at intensity I: leak + shot_noise_scale * (1 - I).
double noise_rate_hz(const PixelModelParams& p, double intensity) noexcept;

/// Per-pixel log-intensity threshold model. Each pixel remembers the level of its last
/// event; a change of n full thresholds between two frames emits n events whose
/// timestamps interpolate linearly to the crossing levels. Sub-threshold residue carries
/// over to later frames. Poisson noise with random polarity is added per inter-frame
/// interval at the rate of the interval's first frame. Output is time sorted and a pure
/// function of (f, p).
EventStream frames_to_events(const FrameSequence& f, const PixelModelParams& p);

// Directory layout: numbered *.pgm (or 8-bit *.raw) frames plus manifest.json holding
// {"fps": ..., "width": ..., "height": ..., "start_us": optional}.
FrameSequence read_frame_directory(const std::filesystem::path& dir);
MaskSequence read_mask_directory(const std::filesystem::path& dir);
void write_frame_directory(const std::filesystem::path& dir, const FrameSequence& f);
void write_mask_directory(const std::filesystem::path& dir, const MaskSequence& m);

}  // namespace evpose
