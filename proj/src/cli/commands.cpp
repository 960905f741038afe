// Copyright 2026 The evpose Authors
// SPDX-License-Identifier: Apache-2.0

#include "evpose/cli/commands.hpp"

#include <chrono>
#include <cstdio>
#include <fstream>
#include <random>
#include <sstream>

#include <json.hpp>

#include "evpose/error.hpp"
#include "evpose/event_core.hpp"
#include "evpose/fixtures.hpp"
#include "evpose/gating.hpp"
#include "evpose/image_io.hpp"
#include "evpose/labels.hpp"
#include "evpose/simulator.hpp"
#include "evpose/tore.hpp"

namespace evpose::cli {
namespace fs = std::filesystem;
namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

void require_path(const std::string& value, const char* key, bool directory) {
  if (value.empty()) throw Error(Errc::Config, std::string("missing required setting '") + key + "'");
  const bool ok = directory ? fs::is_directory(value) : fs::is_regular_file(value);
  if (!ok) throw Error(Errc::Config, std::string(key) + " = '" + value + "' does not exist");
}

void optional_path(const std::string& value, const char* key, bool directory) {
  if (!value.empty()) require_path(value, key, directory);
}

fs::path prepare_output(const RunConfig& c) {
  if (c.output.empty()) throw Error(Errc::Config, "missing required setting 'output'");
  fs::create_directories(c.output);
  return c.output;
}

std::string numbered(const char* prefix, std::size_t k, const char* ext) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%s%06zu%s", prefix, k, ext);
  return buf;
}

std::ofstream open_out(const fs::path& path) {
  std::ofstream out(path);
  if (!out) throw Error(Errc::Io, "cannot write " + path.string());
  return out;
}

std::vector<PixelCoord> parse_hot_pixels(const std::string& list) {
  std::vector<PixelCoord> out;
  for (const auto& item : split_list(list)) {
    const auto colon = item.find(':');
    if (colon == std::string::npos) throw Error(Errc::Config, "hot pixel '" + item + "' is not x:y");
    try {
      out.push_back(PixelCoord{static_cast<std::uint16_t>(std::stoul(item.substr(0, colon))),
                               static_cast<std::uint16_t>(std::stoul(item.substr(colon + 1)))});
    } catch (const std::logic_error&) {
      throw Error(Errc::Config, "hot pixel '" + item + "' is not x:y");
    }
  }
  return out;
}

nlohmann::json config_json(const RunConfig& c) {
  nlohmann::json j = nlohmann::json::object();
  for (const auto& key : config_keys()) j[key] = get_config_value(c, key);
  return j;
}

// Serves masks read from disk: the plan issued at frame k holds masks k .. k+N-1
// (clamped to the last file). Scores come from scores.csv (`offset,score`) when present,
// else 1.
class DirectoryMaskBackend final : public MaskPredictorBackend {
 public:
  DirectoryMaskBackend(const fs::path& dir, std::size_t horizon) : horizon_(horizon) {
    for (const auto& f : list_files(dir, ".pgm")) masks_.push_back(read_mask_pgm(f));
    if (masks_.empty()) throw Error(Errc::EmptyInput, "no masks in " + dir.string());
    scores_.assign(horizon_, 1.0);
    std::ifstream in(dir / "scores.csv");
    std::string line;
    while (in && std::getline(in, line)) {
      unsigned offset = 0;
      double score = 0.0;
      if (std::sscanf(line.c_str(), "%u,%lf", &offset, &score) == 2 && offset < horizon_) {
        scores_[offset] = score;
      }
    }
  }

  std::size_t horizon() const override { return horizon_; }

  MaskPlan predict(const ToreVolume&, std::size_t frame_index) override {
    MaskPlan plan;
    plan.issued_at = frame_index;
    for (std::size_t d = 0; d < horizon_; ++d) {
      plan.masks.push_back(masks_[std::min(frame_index + d, masks_.size() - 1)]);
      plan.scores.push_back(scores_[d]);
    }
    return plan;
  }

 private:
  std::size_t horizon_;
  std::vector<BinaryMask> masks_;
  std::vector<double> scores_;
};

}  // namespace

SimulateResult cmd_simulate(const RunConfig& c) {
  require_path(c.frames_dir, "frames_dir", true);
  optional_path(c.masks_dir, "masks_dir", true);
  optional_path(c.background_dir, "background_dir", true);
  optional_path(c.skeleton_csv, "skeleton_csv", false);
  optional_path(c.camera_file, "camera_file", false);
  if (!c.background_dir.empty() && c.masks_dir.empty()) {
    throw Error(Errc::Config, "background_dir requires masks_dir");
  }
  if (c.skeleton_csv.empty() != c.camera_file.empty()) {
    throw Error(Errc::Config, "skeleton_csv and camera_file must be given together");
  }
  if (c.interpolate == 0) throw Error(Errc::Config, "interpolate must be >= 1");
  if (c.window_us == 0) throw Error(Errc::Config, "window_us must be positive");
  const fs::path out = prepare_output(c);

  FrameSequence frames = read_frame_directory(c.frames_dir);
  if (!c.background_dir.empty()) {
    frames = composite(frames, read_mask_directory(c.masks_dir), read_frame_directory(c.background_dir));
  }
  frames = interpolate_linear(frames, c.interpolate);

  PixelModelParams params;
  params.theta_pos = c.theta_pos;
  params.theta_neg = c.theta_neg;
  params.leak_rate_hz = c.leak_rate_hz;
  params.shot_noise_scale = c.shot_noise_scale;
  params.eps = c.eps;
  params.seed = c.seed;
  params.hot_pixel_rate_hz = c.hot_pixel_rate_hz;
  params.hot_pixels = parse_hot_pixels(c.hot_pixels);
  const EventStream events = frames_to_events(frames, params);

  SimulateResult result;
  result.events_path = out / "events.evt1";
  result.event_count = events.size();
  write_stream_file(result.events_path, events);

  if (!c.skeleton_csv.empty()) {
    std::ifstream skel_in(c.skeleton_csv);
    const auto labels = read_skeleton_csv(skel_in);
    if (labels.empty()) throw Error(Errc::EmptyInput, "skeleton csv holds no frames");
    const CameraModel cam = read_camera_file(c.camera_file);
    {
      auto skel_out = open_out(out / "skeleton.csv");
      write_skeleton_csv(skel_out, labels);
    }
    write_camera_file(out / "camera.txt", cam);

    const NormalizationFrame frame{frames.geometry, c.depth_half_range_mm};
    const HeatmapParams hp{c.heatmap_resolution, c.heatmap_sigma};
    const JointSet joints;
    fs::create_directories(out / "heatmaps");
    auto norm_out = open_out(out / "labels_normalized.csv");
    norm_out << "window,t_end_us,label_t_us,head_depth_mm,joint,x,y,z\n";
    const std::uint64_t first = frames.frame_time_us(0);
    const std::uint64_t last = frames.frame_time_us(frames.frames.size() - 1);
    const std::uint64_t windows = (last - first) / c.window_us;
    for (std::uint64_t k = 0; k < windows; ++k) {
      const std::uint64_t t_end = first + (k + 1) * c.window_us;
      const SkeletonFrame& label = nearest_label(labels, t_end);
      const NormalizedLabels norm = normalize_labels(label, cam, frame, joints);
      write_tensor_file(out / "heatmaps" / numbered("heatmap_", k, ".tore"),
                        heatmaps_to_tensor(make_heatmaps(norm.pose, hp)));
      char buf[160];
      for (std::size_t j = 0; j < kJointCount; ++j) {
        const auto& p = norm.pose.joints[j];
        std::snprintf(buf, sizeof(buf), "%.17g,%s,%.17g,%.17g,%.17g", norm.head_depth_mm,
                      joints.names[j].c_str(), p.x(), p.y(), p.z());
        norm_out << k << ',' << t_end << ',' << label.t_us << ',' << buf << '\n';
      }
    }
    result.heatmap_windows = static_cast<std::size_t>(windows);
  }

  nlohmann::json manifest{{"command", "simulate"},
                          {"seed", c.seed},
                          {"frames", frames.frames.size()},
                          {"fps", frames.fps},
                          {"event_count", result.event_count},
                          {"heatmap_windows", result.heatmap_windows},
                          {"config", config_json(c)}};
  open_out(out / "manifest.json") << manifest.dump(2) << '\n';
  return result;
}

ToreResult cmd_tore(const RunConfig& c) {
  require_path(c.events, "events", false);
  if (c.window_us == 0) throw Error(Errc::Config, "window_us must be positive");
  if (c.tau_us <= 1) throw Error(Errc::InvalidTau, "tau_us must exceed 1");
  if (!(c.occlusion_prob >= 0.0 && c.occlusion_prob <= 1.0)) {
    throw Error(Errc::Config, "occlusion_prob must lie in [0, 1]");
  }
  const fs::path out = prepare_output(c);
  const EventStream events = read_stream_file(c.events);
  const auto slices = slice_constant_time(events, c.window_us, c.origin_us);
  const std::uint64_t declared = (c.span_us + c.window_us - 1) / c.window_us;
  const std::size_t windows = std::max<std::size_t>(slices.size(), static_cast<std::size_t>(declared));

  ToreState state(events.geometry(), ToreParams{c.depth, c.tau_us});
  std::mt19937_64 rng(c.seed);
  const OcclusionParams occ{80, 80, c.occlusion_prob};
  ToreResult result;
  for (std::size_t k = 0; k < windows; ++k) {
    std::size_t count = 0;
    if (k < slices.size()) {
      state.ingest(slices[k].events);
      count = slices[k].events.size();
    }
    const std::uint64_t t_end = c.origin_us + (k + 1) * c.window_us;
    ToreVolume vol = tore_materialize(state, t_end);
    if (c.occlusion_prob > 0.0) vol = occlude(vol, occ, rng).volume;
    const fs::path path = out / numbered("tore_", k, ".tore");
    write_tensor_file(path, vol.to_tensor());
    if (c.text_dump) {
      auto txt = open_out(out / numbered("tore_", k, ".txt"));
      write_tensor_text(txt, vol.to_tensor());
    }
    result.tensors.push_back(path);
    result.events_per_window.push_back(count);
  }
  return result;
}

FilterResult cmd_filter(const RunConfig& c) {
  require_path(c.tore_dir, "tore_dir", true);
  optional_path(c.external_masks_dir, "external_masks_dir", true);
  optional_path(c.truth_masks_dir, "truth_masks_dir", true);
  if (!(c.beta >= 0.0 && c.beta <= 1.0)) throw Error(Errc::Config, "beta must lie in [0, 1]");
  if (c.horizon == 0) throw Error(Errc::Config, "horizon must be >= 1");
  const fs::path out = prepare_output(c);

  std::vector<ToreVolume> volumes;
  for (const auto& f : list_files(c.tore_dir, ".tore")) volumes.push_back(ToreVolume::from_tensor(read_tensor_file(f)));
  if (volumes.empty()) throw Error(Errc::EmptyInput, "no .tore tensors in " + c.tore_dir);

  std::unique_ptr<MaskPredictorBackend> backend;
  if (!c.external_masks_dir.empty()) {
    backend = std::make_unique<DirectoryMaskBackend>(c.external_masks_dir, c.horizon);
  } else {
    ReferenceBackendParams params;
    params.horizon = c.horizon;
    backend = std::make_unique<ReferenceMaskBackend>(params);
  }

  const ScheduleResult schedule = schedule_masks(volumes, *backend, c.beta);
  for (std::size_t k = 0; k < volumes.size(); ++k) {
    write_tensor_file(out / numbered("masked_", k, ".tore"), apply_mask(volumes[k], schedule.steps[k].mask).to_tensor());
  }
  {
    auto csv = open_out(out / "schedule.csv");
    write_schedule_csv(csv, schedule);
  }

  FilterResult result{volumes.size(), schedule.backend_calls, {}};
  if (!c.sweep_betas.empty()) {
    std::vector<BinaryMask> truth;
    if (!c.truth_masks_dir.empty()) {
      for (const auto& f : list_files(c.truth_masks_dir, ".pgm")) truth.push_back(read_mask_pgm(f));
    }
    const auto betas = split_doubles(c.sweep_betas);
    result.sweep = threshold_sweep(volumes, *backend, betas, truth);
    auto csv = open_out(out / "sweep.csv");
    write_sweep_csv(csv, result.sweep);
  }
  return result;
}

EvalReport cmd_eval(const RunConfig& c) {
  require_path(c.manifest, "manifest", false);
  const fs::path out = prepare_output(c);
  std::vector<ConditionAxis> axes;
  for (const auto& a : split_list(c.group_by)) {
    try {
      axes.push_back(parse_axis(a));
    } catch (const Error&) {
      throw Error(Errc::Config, "group_by: unknown axis '" + a + "'");
    }
  }

  const fs::path manifest_path = c.manifest;
  std::ifstream in(manifest_path);
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw Error(Errc::Parse, manifest_path.string() + ": " + e.what());
  }
  const fs::path base = manifest_path.parent_path();
  auto load_pose = [&](const std::string& rel) {
    const fs::path p = fs::path(rel).is_absolute() ? fs::path(rel) : base / rel;
    std::ifstream pin(p);
    if (!pin) throw Error(Errc::Io, "cannot open pose file " + p.string());
    return read_pose_csv(pin);
  };

  std::vector<EvalRecord> records;
  try {
    for (const auto& r : j.at("records")) {
      EvalRecord rec;
      rec.frame_id = r.value("frame", std::to_string(records.size()));
      rec.pred = load_pose(r.at("pred").get<std::string>());
      rec.gt = load_pose(r.at("gt").get<std::string>());
      rec.lighting = parse_lighting(r.value("lighting", "high"));
      rec.background = parse_background(r.value("background", "static"));
      rec.view = parse_view(r.value("view", "front"));
      records.push_back(std::move(rec));
    }
  } catch (const nlohmann::json::exception& e) {
    throw Error(Errc::Parse, manifest_path.string() + ": " + e.what());
  }

  const EvalReport report = evaluate(records, axes);
  {
    auto csv = open_out(out / "report.csv");
    write_report_csv(csv, report);
  }
  auto txt = open_out(out / "report.txt");
  write_report_table(txt, report);
  return report;
}

BenchReport cmd_bench(const RunConfig& c) {
  if (c.bench_events == 0) throw Error(Errc::Config, "bench_events must be positive");
  if (c.window_us == 0) throw Error(Errc::Config, "window_us must be positive");
  // About one event per microsecond, a busy DAVIS346 scene.
  const EventStream fixture = random_stream(kDavis346, c.bench_events, c.bench_events, c.seed);
  const auto blob = serialize_stream(fixture);

  BenchReport r;
  r.events = c.bench_events;

  auto start = Clock::now();
  const EventStream parsed = parse_stream(blob);
  r.parse_seconds = seconds_since(start);

  ToreState state(parsed.geometry(), ToreParams{c.depth, c.tau_us});
  start = Clock::now();
  state.ingest(parsed);
  r.ingest_seconds = seconds_since(start);

  r.windows = c.bench_windows;
  start = Clock::now();
  double checksum = 0.0;
  for (std::uint64_t k = 0; k < r.windows; ++k) {
    const ToreVolume v = tore_materialize(state, state.latest_us() + k * c.window_us);
    checksum += v.values[k % v.values.size()];
  }
  r.materialize_seconds = seconds_since(start);
  (void)checksum;

  const double n = static_cast<double>(r.events);
  r.parse_events_per_second = n / r.parse_seconds;
  r.ingest_events_per_second = n / r.ingest_seconds;
  r.parse_ingest_events_per_second = n / (r.parse_seconds + r.ingest_seconds);
  r.windows_per_second = r.windows ? static_cast<double>(r.windows) / r.materialize_seconds : 0.0;

  if (!c.output.empty()) {
    const fs::path out = prepare_output(c);
    nlohmann::json j{{"events", r.events},
                     {"parse_seconds", r.parse_seconds},
                     {"parse_events_per_second", r.parse_events_per_second},
                     {"ingest_seconds", r.ingest_seconds},
                     {"ingest_events_per_second", r.ingest_events_per_second},
                     {"parse_ingest_events_per_second", r.parse_ingest_events_per_second},
                     {"windows", r.windows},
                     {"materialize_seconds", r.materialize_seconds},
                     {"windows_per_second", r.windows_per_second},
                     {"seed", c.seed}};
    open_out(out / "bench.json") << j.dump(2) << '\n';
  }
  return r;
}

int exit_code_for(const std::exception& e) noexcept {
  if (const auto* err = dynamic_cast<const Error*>(&e)) {
    switch (err->code()) {
      case Errc::Config: return 2;
      case Errc::InvalidArgument: return 2;
      default: return 3;
    }
  }
  return 4;
}

}  // namespace evpose::cli
