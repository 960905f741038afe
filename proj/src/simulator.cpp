// Copyright 2026 The evpose Authors
// SPDX-License-Identifier: Apache-2.0

#include "evpose/simulator.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <random>
#include <string>
#include <tuple>

#include <json.hpp>

#include "evpose/error.hpp"
#include "evpose/image_io.hpp"

namespace evpose {
namespace {

// Crossing counts tolerate this much relative shortfall so that an exact multiple of
// the threshold is not lost to rounding in ln().
constexpr double kCrossingSlack = 1e-9;

std::uint64_t splitmix64(std::uint64_t x) noexcept {
  x += 0x9E3779B97F4A7C15ull;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
  return x ^ (x >> 31);
}

void require_same(const FrameSequence& a, SensorGeometry g, double fps, std::size_t n,
                  const char* what) {
  if (a.geometry != g) throw Error(Errc::GeometryMismatch, std::string(what) + " geometry differs");
  if (a.fps != fps) throw Error(Errc::FpsMismatch, std::string(what) + " fps differs");
  if (a.frames.size() != n) throw Error(Errc::LengthMismatch, std::string(what) + " length differs");
}

struct Manifest {
  SensorGeometry geometry;
  double fps = 0.0;
  std::uint64_t start_us = 0;
};

Manifest read_manifest(const std::filesystem::path& dir) {
  const auto path = dir / "manifest.json";
  std::ifstream in(path);
  if (!in) throw Error(Errc::Io, "cannot open " + path.string());
  nlohmann::json j;
  try {
    in >> j;
    Manifest m;
    m.fps = j.at("fps").get<double>();
    m.geometry.width = j.at("width").get<std::uint16_t>();
    m.geometry.height = j.at("height").get<std::uint16_t>();
    m.start_us = j.value("start_us", std::uint64_t{0});
    return m;
  } catch (const nlohmann::json::exception& e) {
    throw Error(Errc::Parse, path.string() + ": " + e.what());
  }
}

void write_manifest(const std::filesystem::path& dir, SensorGeometry g, double fps,
                    std::uint64_t start_us) {
  nlohmann::json j{{"fps", fps}, {"width", g.width}, {"height", g.height}, {"start_us", start_us}};
  std::ofstream out(dir / "manifest.json");
  if (!out) throw Error(Errc::Io, "cannot write manifest in " + dir.string());
  out << j.dump(2) << '\n';
}

GrayImage read_raw8(const std::filesystem::path& path, SensorGeometry g) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(Errc::Io, "cannot open " + path.string());
  std::vector<char> bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  if (bytes.size() != g.pixel_count()) {
    throw Error(Errc::TruncatedRecord, path.string() + ": raw frame size does not match manifest");
  }
  GrayImage img(g);
  for (std::size_t i = 0; i < bytes.size(); ++i) {
    img.pixels[i] = static_cast<std::uint8_t>(bytes[i]) / 255.0;
  }
  return img;
}

std::vector<GrayImage> read_images(const std::filesystem::path& dir, SensorGeometry g) {
  auto files = list_files(dir, ".pgm");
  const bool raw = files.empty();
  if (raw) files = list_files(dir, ".raw");
  std::vector<GrayImage> images;
  images.reserve(files.size());
  for (const auto& f : files) {
    images.push_back(raw ? read_raw8(f, g) : read_pgm(f));
    if (images.back().geometry != g) {
      throw Error(Errc::GeometryMismatch, f.string() + " does not match the manifest geometry");
    }
  }
  return images;
}

std::string numbered(const char* prefix, std::size_t k) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%s%06zu.pgm", prefix, k);
  return buf;
}

}  // namespace

std::uint64_t FrameSequence::frame_time_us(std::size_t k) const {
  return start_us + static_cast<std::uint64_t>(std::llround(static_cast<double>(k) * 1e6 / fps));
}

void FrameSequence::validate() const {
  geometry.validate();
  if (!(fps > 0.0) || !std::isfinite(fps)) throw Error(Errc::InvalidArgument, "fps must be positive");
  for (const auto& f : frames) {
    if (f.geometry != geometry || f.size() != geometry.pixel_count()) {
      throw Error(Errc::GeometryMismatch, "frame geometry differs from its sequence");
    }
  }
}

void PixelModelParams::validate(SensorGeometry g) const {
  if (!(theta_pos > 0.0) || !(theta_neg > 0.0)) {
    throw Error(Errc::InvalidArgument, "contrast thresholds must be positive");
  }
  if (!(leak_rate_hz >= 0.0) || !(shot_noise_scale >= 0.0) || !(hot_pixel_rate_hz >= 0.0)) {
    throw Error(Errc::InvalidArgument, "noise rates must be non-negative");
  }
  if (!(eps > 0.0 && eps < 1.0)) throw Error(Errc::InvalidArgument, "eps must lie in (0, 1)");
  for (const auto& hp : hot_pixels) {
    if (!g.contains(hp.x, hp.y)) throw Error(Errc::OutOfBounds, "hot pixel outside sensor");
  }
}

double rec601_luma(double r, double g, double b) noexcept { return 0.299 * r + 0.587 * g + 0.114 * b; }

GrayImage rgb_to_gray(SensorGeometry g, std::span<const double> rgb) {
  if (rgb.size() != 3 * g.pixel_count()) throw Error(Errc::LengthMismatch, "RGB buffer size");
  GrayImage img(g);
  for (std::size_t i = 0; i < img.size(); ++i) {
    img.pixels[i] = rec601_luma(rgb[3 * i], rgb[3 * i + 1], rgb[3 * i + 2]);
  }
  return img;
}

FrameSequence composite(const FrameSequence& fg, const MaskSequence& fg_masks,
                        const FrameSequence& bg) {
  fg.validate();
  require_same(bg, fg.geometry, fg.fps, fg.frames.size(), "background");
  if (fg_masks.geometry != fg.geometry) throw Error(Errc::GeometryMismatch, "mask geometry differs");
  if (fg_masks.fps != fg.fps) throw Error(Errc::FpsMismatch, "mask fps differs");
  if (fg_masks.masks.size() != fg.frames.size()) throw Error(Errc::LengthMismatch, "mask count differs");

  FrameSequence out{fg.geometry, fg.fps, fg.start_us, {}};
  out.frames.reserve(fg.frames.size());
  for (std::size_t k = 0; k < fg.frames.size(); ++k) {
    const auto& mask = fg_masks.masks[k];
    if (mask.geometry != fg.geometry) throw Error(Errc::GeometryMismatch, "mask geometry differs");
    GrayImage frame(fg.geometry);
    for (std::size_t i = 0; i < frame.size(); ++i) {
      const double m = mask.pixels[i] ? 1.0 : 0.0;
      frame.pixels[i] = m * fg.frames[k].pixels[i] + (1.0 - m) * bg.frames[k].pixels[i];
    }
    out.frames.push_back(std::move(frame));
  }
  return out;
}

FrameSequence interpolate_linear(const FrameSequence& f, unsigned factor) {
  if (factor == 0) throw Error(Errc::InvalidArgument, "interpolation factor must be >= 1");
  f.validate();
  if (factor == 1 || f.frames.size() < 2) {
    FrameSequence out = f;
    out.fps = f.fps * factor;
    return out;
  }
  FrameSequence out{f.geometry, f.fps * factor, f.start_us, {}};
  out.frames.reserve((f.frames.size() - 1) * factor + 1);
  for (std::size_t k = 0; k + 1 < f.frames.size(); ++k) {
    const auto& a = f.frames[k];
    const auto& b = f.frames[k + 1];
    out.frames.push_back(a);
    for (unsigned j = 1; j < factor; ++j) {
      const double w = static_cast<double>(j) / factor;
      GrayImage mid(f.geometry);
      for (std::size_t i = 0; i < mid.size(); ++i) {
        mid.pixels[i] = (1.0 - w) * a.pixels[i] + w * b.pixels[i];
      }
      out.frames.push_back(std::move(mid));
    }
  }
  out.frames.push_back(f.frames.back());
  return out;
}

double noise_rate_hz(const PixelModelParams& p, double intensity) noexcept {
  return p.leak_rate_hz + p.shot_noise_scale * (1.0 - std::clamp(intensity, 0.0, 1.0));
}

EventStream frames_to_events(const FrameSequence& f, const PixelModelParams& p) {
  if (f.frames.size() < 2) throw Error(Errc::EmptySequence, "need at least two frames");
  f.validate();
  p.validate(f.geometry);

  const SensorGeometry g = f.geometry;
  const std::size_t n_frames = f.frames.size();
  std::vector<std::uint64_t> stamps(n_frames);
  for (std::size_t k = 0; k < n_frames; ++k) stamps[k] = f.frame_time_us(k);

  std::vector<std::uint8_t> hot(g.pixel_count(), 0);
  for (const auto& hp : p.hot_pixels) hot[std::size_t{hp.y} * g.width + hp.x] = 1;

  std::vector<Event> events;
  for (std::uint16_t y = 0; y < g.height; ++y) {
    for (std::uint16_t x = 0; x < g.width; ++x) {
      const std::size_t pixel = std::size_t{y} * g.width + x;
      std::mt19937_64 rng(splitmix64(p.seed ^ splitmix64(pixel + 1)));
      double reference = std::log(f.frames[0].pixels[pixel] + p.eps);

      for (std::size_t k = 0; k + 1 < n_frames; ++k) {
        const double i0 = f.frames[k].pixels[pixel];
        const double l0 = std::log(i0 + p.eps);
        const double l1 = std::log(f.frames[k + 1].pixels[pixel] + p.eps);
        const double t0 = static_cast<double>(stamps[k]);
        const double span = static_cast<double>(stamps[k + 1] - stamps[k]);

        const double diff = l1 - reference;
        const bool up = diff > 0.0;
        const double theta = up ? p.theta_pos : p.theta_neg;
        const auto crossings =
            static_cast<std::int64_t>(std::floor(std::abs(diff) / theta + kCrossingSlack));
        const double step = up ? theta : -theta;
        for (std::int64_t j = 1; j <= crossings; ++j) {
          const double level = reference + static_cast<double>(j) * step;
          double frac = l1 != l0 ? (level - l0) / (l1 - l0) : 1.0;
          frac = std::clamp(frac, 0.0, 1.0);
          events.push_back(Event{static_cast<std::uint64_t>(std::llround(t0 + frac * span)), x, y,
                                 up ? Polarity::Positive : Polarity::Negative});
        }
        reference += static_cast<double>(crossings) * step;

        double rate = noise_rate_hz(p, i0);
        if (hot[pixel]) rate += p.hot_pixel_rate_hz;
        const double lambda = rate * span * 1e-6;
        if (lambda > 0.0 && stamps[k + 1] > stamps[k]) {
          const auto n = std::poisson_distribution<std::int64_t>(lambda)(rng);
          std::uniform_int_distribution<std::uint64_t> when(stamps[k], stamps[k + 1] - 1);
          std::bernoulli_distribution on(0.5);
          for (std::int64_t j = 0; j < n; ++j) {
            const std::uint64_t t = when(rng);
            events.push_back(Event{t, x, y, on(rng) ? Polarity::Positive : Polarity::Negative});
          }
        }
      }
    }
  }

  std::sort(events.begin(), events.end(), [](const Event& a, const Event& b) {
    return std::tie(a.t, a.y, a.x, a.polarity) < std::tie(b.t, b.y, b.x, b.polarity);
  });
  return EventStream(g, std::move(events));
}

FrameSequence read_frame_directory(const std::filesystem::path& dir) {
  const Manifest m = read_manifest(dir);
  FrameSequence f{m.geometry, m.fps, m.start_us, read_images(dir, m.geometry)};
  f.validate();
  return f;
}

MaskSequence read_mask_directory(const std::filesystem::path& dir) {
  const Manifest m = read_manifest(dir);
  MaskSequence seq{m.geometry, m.fps, {}};
  for (auto& img : read_images(dir, m.geometry)) {
    BinaryMask mask(img.geometry);
    for (std::size_t i = 0; i < img.size(); ++i) mask.pixels[i] = img.pixels[i] > 0.0 ? 1 : 0;
    seq.masks.push_back(std::move(mask));
  }
  return seq;
}

void write_frame_directory(const std::filesystem::path& dir, const FrameSequence& f) {
  std::filesystem::create_directories(dir);
  write_manifest(dir, f.geometry, f.fps, f.start_us);
  for (std::size_t k = 0; k < f.frames.size(); ++k) write_pgm(dir / numbered("frame_", k), f.frames[k]);
}

void write_mask_directory(const std::filesystem::path& dir, const MaskSequence& m) {
  std::filesystem::create_directories(dir);
  write_manifest(dir, m.geometry, m.fps, 0);
  for (std::size_t k = 0; k < m.masks.size(); ++k) write_mask_pgm(dir / numbered("mask_", k), m.masks[k]);
}

}  // namespace evpose
