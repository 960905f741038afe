// Copyright 2026 The evpose Authors
// SPDX-License-Identifier: Apache-2.0

#include "evpose/cli/run_config.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <istream>
#include <map>
#include <sstream>
#include <variant>

#include "evpose/error.hpp"

namespace evpose::cli {
namespace {

using FieldPtr = std::variant<std::string RunConfig::*, std::uint64_t RunConfig::*,
                              std::uint32_t RunConfig::*, double RunConfig::*, bool RunConfig::*>;

const std::vector<std::pair<std::string, FieldPtr>>& fields() {
  static const std::vector<std::pair<std::string, FieldPtr>> table{
      {"output", &RunConfig::output},
      {"seed", &RunConfig::seed},
      {"frames_dir", &RunConfig::frames_dir},
      {"masks_dir", &RunConfig::masks_dir},
      {"background_dir", &RunConfig::background_dir},
      {"skeleton_csv", &RunConfig::skeleton_csv},
      {"camera_file", &RunConfig::camera_file},
      {"interpolate", &RunConfig::interpolate},
      {"theta_pos", &RunConfig::theta_pos},
      {"theta_neg", &RunConfig::theta_neg},
      {"leak_rate_hz", &RunConfig::leak_rate_hz},
      {"shot_noise_scale", &RunConfig::shot_noise_scale},
      {"eps", &RunConfig::eps},
      {"hot_pixel_rate_hz", &RunConfig::hot_pixel_rate_hz},
      {"hot_pixels", &RunConfig::hot_pixels},
      {"heatmap_resolution", &RunConfig::heatmap_resolution},
      {"heatmap_sigma", &RunConfig::heatmap_sigma},
      {"depth_half_range_mm", &RunConfig::depth_half_range_mm},
      {"events", &RunConfig::events},
      {"window_us", &RunConfig::window_us},
      {"origin_us", &RunConfig::origin_us},
      {"span_us", &RunConfig::span_us},
      {"depth", &RunConfig::depth},
      {"tau_us", &RunConfig::tau_us},
      {"occlusion_prob", &RunConfig::occlusion_prob},
      {"text_dump", &RunConfig::text_dump},
      {"tore_dir", &RunConfig::tore_dir},
      {"external_masks_dir", &RunConfig::external_masks_dir},
      {"truth_masks_dir", &RunConfig::truth_masks_dir},
      {"beta", &RunConfig::beta},
      {"horizon", &RunConfig::horizon},
      {"sweep_betas", &RunConfig::sweep_betas},
      {"manifest", &RunConfig::manifest},
      {"group_by", &RunConfig::group_by},
      {"bench_events", &RunConfig::bench_events},
      {"bench_windows", &RunConfig::bench_windows},
  };
  return table;
}

const FieldPtr& lookup(const std::string& key) {
  for (const auto& [name, ptr] : fields()) {
    if (name == key) return ptr;
  }
  throw Error(Errc::Config, "unknown config key '" + key + "'");
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

template <typename T>
T parse_unsigned(const std::string& key, const std::string& v) {
  T out{};
  const auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc{} || p != v.data() + v.size()) {
    throw Error(Errc::Config, "config key '" + key + "': expected an unsigned integer, got '" + v + "'");
  }
  return out;
}

double parse_double(const std::string& key, const std::string& v) {
  try {
    std::size_t used = 0;
    const double d = std::stod(v, &used);
    if (used != v.size()) throw std::invalid_argument(v);
    return d;
  } catch (const std::logic_error&) {
    throw Error(Errc::Config, "config key '" + key + "': expected a number, got '" + v + "'");
  }
}

}  // namespace

std::vector<std::string> config_keys() {
  std::vector<std::string> keys;
  for (const auto& f : fields()) keys.push_back(f.first);
  return keys;
}

void set_config_value(RunConfig& c, const std::string& key, const std::string& value) {
  std::visit(
      [&](auto ptr) {
        using T = std::remove_reference_t<decltype(c.*ptr)>;
        if constexpr (std::is_same_v<T, std::string>) {
          c.*ptr = value;
        } else if constexpr (std::is_same_v<T, bool>) {
          if (value == "true" || value == "1") c.*ptr = true;
          else if (value == "false" || value == "0") c.*ptr = false;
          else throw Error(Errc::Config, "config key '" + key + "': expected true/false");
        } else if constexpr (std::is_same_v<T, double>) {
          c.*ptr = parse_double(key, value);
        } else {
          c.*ptr = parse_unsigned<T>(key, value);
        }
      },
      lookup(key));
}

std::string get_config_value(const RunConfig& c, const std::string& key) {
  return std::visit(
      [&](auto ptr) -> std::string {
        using T = std::remove_cvref_t<decltype(c.*ptr)>;
        if constexpr (std::is_same_v<T, std::string>) {
          return c.*ptr;
        } else if constexpr (std::is_same_v<T, bool>) {
          return c.*ptr ? "true" : "false";
        } else if constexpr (std::is_same_v<T, double>) {
          char buf[40];
          std::snprintf(buf, sizeof(buf), "%.17g", c.*ptr);
          return buf;
        } else {
          return std::to_string(c.*ptr);
        }
      },
      lookup(key));
}

RunConfig parse_config(std::istream& in, RunConfig base) {
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.resize(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw Error(Errc::Config, "config line " + std::to_string(line_no) + ": expected key = value");
    }
    set_config_value(base, trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
  }
  return base;
}

RunConfig parse_config_file(const std::string& path, RunConfig base) {
  std::ifstream in(path);
  if (!in) throw Error(Errc::Config, "cannot open config file " + path);
  return parse_config(in, std::move(base));
}

std::string render_config(const RunConfig& c) {
  std::ostringstream os;
  for (const auto& [key, ptr] : fields()) os << key << " = " << get_config_value(c, key) << '\n';
  return os.str();
}

std::vector<std::string> split_list(const std::string& list) {
  std::vector<std::string> out;
  std::stringstream ss(list);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

std::vector<double> split_doubles(const std::string& list) {
  std::vector<double> out;
  for (const auto& item : split_list(list)) out.push_back(parse_double("list", item));
  return out;
}

}  // namespace evpose::cli
