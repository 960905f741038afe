// Copyright 2026 The evpose Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

namespace evpose::cli {

/// Every tunable of every subcommand. Rendered as `key = value` lines; parse(render(c)) == c.
struct RunConfig {
  // shared
  std::string output = "out";
  std::uint64_t seed = 0;

  // simulate
  std::string frames_dir;
  std::string masks_dir;
  std::string background_dir;
  std::string skeleton_csv;
  std::string camera_file;
  std::uint32_t interpolate = 1;
  double theta_pos = 0.2;
  double theta_neg = 0.2;
  double leak_rate_hz = 0.1;
  double shot_noise_scale = 1.0;
  double eps = 1e-3;
  double hot_pixel_rate_hz = 100.0;
  std::string hot_pixels;  // "x:y,x:y"
  std::uint32_t heatmap_resolution = 64;
  double heatmap_sigma = 2.0;
  double depth_half_range_mm = 1000.0;

  // tore
  std::string events;
  std::uint64_t window_us = 20'000;
  std::uint64_t origin_us = 0;
  std::uint64_t span_us = 0;
  std::uint32_t depth = 4;
  std::uint64_t tau_us = 5'000'000;
  double occlusion_prob = 0.0;
  bool text_dump = false;

  // filter
  std::string tore_dir;
  std::string external_masks_dir;
  std::string truth_masks_dir;
  double beta = 0.9;
  std::uint32_t horizon = 4;
  std::string sweep_betas;  // "0,0.5,1"

  // eval
  std::string manifest;
  std::string group_by;  // "lighting,view"

  // bench
  std::uint64_t bench_events = 2'000'000;
  std::uint32_t bench_windows = 50;

  friend bool operator==(const RunConfig&, const RunConfig&) = default;
};

/// Keys in rendering order.
std::vector<std::string> config_keys();

/// Assigns one key from its text form. Throws Error(Config) for unknown keys or bad values.
void set_config_value(RunConfig& c, const std::string& key, const std::string& value);
std::string get_config_value(const RunConfig& c, const std::string& key);

/// `key = value` lines; '#' starts a comment. Later lines override earlier ones.
RunConfig parse_config(std::istream& in, RunConfig base = {});
RunConfig parse_config_file(const std::string& path, RunConfig base = {});
std::string render_config(const RunConfig& c);

std::vector<double> split_doubles(const std::string& list);
std::vector<std::string> split_list(const std::string& list);

}  // namespace evpose::cli
