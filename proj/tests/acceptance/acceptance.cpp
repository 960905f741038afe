// Copyright 2026 The evpose Authors
// SPDX-License-Identifier: Apache-2.0

// Acceptance suite. Prints one PASS/FAIL line per criterion and exits non-zero if
// any criterion fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include <unistd.h>

#include "../support/oracles.hpp"
#include "evpose/cli/commands.hpp"
#include "evpose/error.hpp"
#include "evpose/event_core.hpp"
#include "evpose/fixtures.hpp"
#include "evpose/gating.hpp"
#include "evpose/labels.hpp"
#include "evpose/metrics.hpp"
#include "evpose/pose_math.hpp"
#include "evpose/simulator.hpp"
#include "evpose/tore.hpp"

namespace {

using namespace evpose;
namespace fs = std::filesystem;
using Clock = std::chrono::steady_clock;

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof(buf), f, args...);
  return buf;
}

double elapsed(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

// 1. Streaming TORE equals per-pixel brute force, bitwise, on 1000 random streams.
Outcome tore_oracle_equivalence() {
  const auto start = Clock::now();
  std::mt19937_64 rng(101);
  std::uniform_int_distribution<std::size_t> count(0, 100'000);
  std::uniform_int_distribution<std::uint64_t> duration(1, 20'000'000);
  const std::size_t depths[] = {1, 2, 3, 4, 6, 8};
  const std::uint64_t taus[] = {5'000'000, 100'000, 12'345'678};
  std::size_t mismatched = 0;
  std::size_t events = 0;
  for (int trial = 0; trial < 1000; ++trial) {
    const std::uint64_t dur = duration(rng);
    const EventStream s = random_stream(kDavis346, count(rng), dur, rng(), rng() % 1000);
    const ToreParams params{depths[trial % 6], trial % 4 == 0 ? taus[(trial / 4) % 3] : 5'000'000};
    const std::uint64_t last = s.empty() ? 0 : s.events().back().t;
    const std::uint64_t tq = last + rng() % (2 * params.tau_us);
    ToreState state(kDavis346, params);
    state.ingest(s);
    const ToreVolume vol = tore_materialize(state, tq);
    const auto expected =
        oracle::tore_brute_force(s, params.depth, static_cast<double>(params.tau_us), tq);
    if (!oracle::same_bits(vol.values, expected)) ++mismatched;
    events += s.size();
  }
  const double secs = elapsed(start);
  return {mismatched == 0 && secs <= 120.0,
          fmt("1000 streams, %zu events, %zu mismatching, %.1f s (limit 120 s)", events, mismatched, secs)};
}

// 2. Boundary constants of the TORE transform.
Outcome tore_boundaries() {
  const double tau = 5e6;
  const double at_one = tore_value(1.0, tau);
  const double at_tau = tore_value(tau, tau);
  const double edge = std::pow(tau, 0.3);
  const double at_edge = tore_value(edge, tau);
  const double exponent = 0.3 * std::log(tau);

  // Same constants through the integer pipeline.
  ToreState state(SensorGeometry{2, 1});
  state.ingest(Event{10, 0, 0, Polarity::Positive});
  const ToreVolume v1 = tore_materialize(state, 11);
  state.ingest(Event{15, 1, 0, Polarity::Negative});
  const ToreVolume v2 = tore_materialize(state, 15 + 5'000'000);

  const bool ok = at_one == 1.0 && at_tau == 0.0 && std::abs(at_edge - 1.0) <= 1e-6 &&
                  std::abs(exponent - 4.63) < 0.005 && v1.at(0, 0, 0) == 1.0f && v2.at(4, 0, 1) == 0.0f;
  return {ok, fmt("v(1us)=%.17g v(tau)=%.17g v(tau^0.3)=%.17g exponent=%.4f", at_one, at_tau, at_edge,
                  exponent)};
}

// 3. Noise-free simulator on log-linear ramps.
Outcome simulator_conservation() {
  std::mt19937_64 rng(303);
  const SensorGeometry g{24, 16};
  const double thresholds[][2] = {{0.2, 0.2}, {0.15, 0.3}, {0.37, 0.11}};
  std::size_t count_errors = 0;
  std::size_t total = 0;
  double worst_dt = 0.0;
  double frame_interval = 0.0;
  for (const auto& th : thresholds) {
    PixelModelParams p;
    p.theta_pos = th[0];
    p.theta_neg = th[1];
    p.leak_rate_hz = 0.0;
    p.shot_noise_scale = 0.0;
    const auto ramp = oracle::make_ramp(g, 41, 200.0, p.eps, rng);
    const EventStream s = frames_to_events(ramp.frames, p);
    const double t_end = static_cast<double>(ramp.frames.frame_time_us(40));
    frame_interval = 1e6 / ramp.frames.fps;

    std::vector<std::vector<std::uint64_t>> per_pixel(g.pixel_count());
    for (const Event& e : s) per_pixel[std::size_t{e.y} * g.width + e.x].push_back(e.t);
    for (std::size_t i = 0; i < g.pixel_count(); ++i) {
      const double l0 = std::log(ramp.frames.frames.front().pixels[i] + p.eps);
      const double l1 = std::log(ramp.frames.frames.back().pixels[i] + p.eps);
      const double theta = l1 > l0 ? p.theta_pos : p.theta_neg;
      const auto expected = static_cast<std::size_t>(std::floor(std::abs(l1 - l0) / theta));
      if (per_pixel[i].size() != expected) ++count_errors;
      total += expected;
      for (std::size_t j = 0; j < std::min(expected, per_pixel[i].size()); ++j) {
        const double analytic = (static_cast<double>(j + 1) * theta / std::abs(l1 - l0)) * t_end;
        worst_dt = std::max(worst_dt, std::abs(static_cast<double>(per_pixel[i][j]) - analytic));
      }
    }
  }
  return {count_errors == 0 && worst_dt <= frame_interval,
          fmt("%zu expected events, %zu pixel count mismatches, worst |dt| %.3f us (limit %.0f us)", total,
              count_errors, worst_dt, frame_interval)};
}

// 4. Noise rate at dark vs bright constant intensity.
Outcome noise_monotonicity() {
  const SensorGeometry g{16, 16};
  PixelModelParams p;
  p.leak_rate_hz = 0.0;
  p.shot_noise_scale = 1.0;
  p.seed = 404;
  auto constant = [&](double intensity) {
    FrameSequence f{g, 10.0, 0, {}};
    for (int k = 0; k <= 600; ++k) f.frames.emplace_back(g, intensity);
    return frames_to_events(f, p).size();
  };
  const double seconds = 60.0;
  const double n_lo = static_cast<double>(constant(0.1));
  const double n_hi = static_cast<double>(constant(0.9));
  const double mu_lo = (p.leak_rate_hz + p.shot_noise_scale * 0.9) * seconds * g.pixel_count();
  const double mu_hi = (p.leak_rate_hz + p.shot_noise_scale * 0.1) * seconds * g.pixel_count();
  const double factor = mu_lo / mu_hi;
  const double ratio = n_lo / n_hi;
  const double ratio_sigma = factor * std::sqrt(1.0 / mu_lo + 1.0 / mu_hi);
  const bool ok = std::abs(n_lo - mu_lo) <= 3.0 * std::sqrt(mu_lo) &&
                  std::abs(n_hi - mu_hi) <= 3.0 * std::sqrt(mu_hi) &&
                  std::abs(ratio - factor) <= 3.0 * ratio_sigma;
  return {ok, fmt("n(I=0.1)=%.0f (mu %.0f) n(I=0.9)=%.0f (mu %.0f) ratio %.3f vs %.3f +- %.3f (3 sigma)", n_lo,
                  mu_lo, n_hi, mu_hi, ratio, factor, 3.0 * ratio_sigma)};
}

// 5. EVT1 files round-trip bit-exactly.
Outcome format_round_trip() {
  std::mt19937_64 rng(505);
  const fs::path dir = fs::temp_directory_path() / ("evpose_accept_" + std::to_string(::getpid()));
  fs::create_directories(dir);
  std::size_t failures = 0;
  for (int trial = 0; trial < 1000; ++trial) {
    const SensorGeometry g{static_cast<std::uint16_t>(1 + rng() % 1024),
                           static_cast<std::uint16_t>(1 + rng() % 1024)};
    const EventStream s = random_stream(g, rng() % 3000, 1 + rng() % 10'000'000, rng(), rng() >> 20);
    const auto bytes = oracle::evt1_bytes(s);
    const fs::path path = dir / "rt.evt1";
    {
      std::ofstream out(path, std::ios::binary);
      out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
    }
    const EventStream back = read_stream_file(path);
    write_stream_file(path, back);
    std::ifstream in(path, std::ios::binary);
    const std::vector<std::uint8_t> again((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    if (!(back == s) || again != bytes || serialize_stream(back) != bytes) ++failures;
  }
  fs::remove_all(dir);
  return {failures == 0, fmt("1000 files, %zu failures", failures)};
}

Pose3D zero_pose() {
  Pose3D p;
  p.joints.assign(kJointCount, Eigen::Vector3d::Zero());
  return p;
}

// 6. Metric constants.
Outcome metric_exactness() {
  const Pose3D gt = zero_pose();
  Pose3D one = zero_pose();
  one.joints[5] = Eigen::Vector3d(3.0, 4.0, 0.0);
  const double m = mpjpe(one, gt);

  Pose3D near = zero_pose();
  Pose3D far = zero_pose();
  for (auto& j : near.joints) j = Eigen::Vector3d(0.0, 100.0, 0.0);
  for (auto& j : far.joints) j = Eigen::Vector3d(0.0, 0.0, 200.0);
  const double pck_near = pck(near, gt);
  const double pck_far = pck(far, gt);

  const auto th = auc_thresholds();
  bool grid = th.size() == 30;
  for (std::size_t i = 0; i < th.size(); ++i) grid = grid && th[i] == 500.0 * static_cast<double>(i) / 29.0;
  grid = grid && th.front() == 0.0 && th.back() == 500.0;
  const double perfect = auc(gt, gt);

  const bool ok = m == 5.0 / 13.0 && pck_near == 1.0 && pck_far == 0.0 && grid && perfect == 29.0 / 30.0;
  return {ok, fmt("mpjpe=%.17g (5/13=%.17g) pck={%g,%g} thresholds=%zu grid_ok=%d auc(perfect)=%.17g", m,
                  5.0 / 13.0, pck_near, pck_far, th.size(), grid ? 1 : 0, perfect)};
}

// 7. Analytic gradients against central differences.
Outcome gradient_checks() {
  std::mt19937_64 rng(707);
  std::uniform_real_distribution<double> unit(0.05, 1.0);
  std::uniform_real_distribution<double> prob(0.02, 0.98);
  double worst[4] = {0, 0, 0, 0};
  const std::size_t r = 8;
  const std::size_t n = 16;
  for (int trial = 0; trial < 100; ++trial) {
    // soft-argmax over an 8x8 heatmap, both axes
    std::vector<double> h(r * r);
    for (auto& v : h) v = unit(rng);
    for (int axis = 0; axis < 2; ++axis) {
      auto f = [&](std::span<const double> x) {
        Heatmap hm(r);
        hm.values.assign(x.begin(), x.end());
        return soft_argmax(hm)[static_cast<std::size_t>(axis)];
      };
      auto g = [&](std::span<const double> x) {
        Heatmap hm(r);
        hm.values.assign(x.begin(), x.end());
        return soft_argmax_gradient(hm, axis);
      };
      worst[0] = std::max(worst[0], gradient_check(f, g, h, 1e-5));
    }

    std::vector<double> p(n), q(n), target(n), pred(n), ytarget(n);
    double sp = 0.0, sq = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      p[i] = unit(rng);
      q[i] = unit(rng);
      sp += p[i];
      sq += q[i];
      target[i] = rng() % 2 ? 1.0 : 0.0;
      pred[i] = prob(rng);
      ytarget[i] = prob(rng) * 2.0 - 1.0;
    }
    for (std::size_t i = 0; i < n; ++i) {
      p[i] /= sp;
      q[i] /= sq;
    }
    worst[1] = std::max(worst[1], gradient_check([&](std::span<const double> x) { return jsd_unnormalized(p, x); },
                                                 [&](std::span<const double> x) { return jsd_gradient_q(p, x); },
                                                 q, 1e-6));
    worst[2] = std::max(worst[2], gradient_check([&](std::span<const double> x) { return bce(target, x); },
                                                 [&](std::span<const double> x) { return bce_gradient(target, x); },
                                                 pred, 1e-6));
    worst[3] = std::max(worst[3], gradient_check([&](std::span<const double> x) { return mse(ytarget, x); },
                                                 [&](std::span<const double> x) { return mse_gradient(ytarget, x); },
                                                 pred, 1e-6));
  }
  const bool ok = worst[0] <= 1e-4 && worst[1] <= 1e-4 && worst[2] <= 1e-4 && worst[3] <= 1e-4;
  return {ok, fmt("worst relative deviation: soft-argmax %.2e, jsd %.2e, bce %.2e, mse %.2e (limit 1e-4)",
                  worst[0], worst[1], worst[2], worst[3])};
}

// Returns the same score table for every plan it issues.
class TableBackend final : public MaskPredictorBackend {
 public:
  TableBackend(SensorGeometry g, std::vector<double> scores) : g_(g), scores_(std::move(scores)) {}
  std::size_t horizon() const override { return scores_.size(); }
  MaskPlan predict(const ToreVolume&, std::size_t frame) override {
    MaskPlan plan;
    plan.issued_at = frame;
    plan.masks.assign(scores_.size(), BinaryMask(g_, 1));
    plan.scores = scores_;
    return plan;
  }

 private:
  SensorGeometry g_;
  std::vector<double> scores_;
};

// 8. Scheduler extremes and monotonicity in beta.
Outcome scheduler_extremes() {
  const SensorGeometry g{4, 4};
  std::mt19937_64 rng(808);
  std::uniform_real_distribution<double> score(0.0, 0.999999);
  std::size_t extreme_failures = 0;
  std::size_t monotone_failures = 0;
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t horizon = 1 + rng() % 8;
    const std::size_t frames = 1 + rng() % 60;
    std::vector<double> scores(horizon);
    for (auto& s : scores) s = score(rng);
    ToreVolume vol{g, 1, 0, std::vector<float>(2 * g.pixel_count(), 0.0f)};
    const std::vector<ToreVolume> seq(frames, vol);
    TableBackend backend(g, scores);
    const std::size_t at0 = schedule_masks(seq, backend, 0.0).backend_calls;
    const std::size_t at1 = schedule_masks(seq, backend, 1.0).backend_calls;
    if (at0 != (frames + horizon - 1) / horizon || at1 != frames) ++extreme_failures;
    std::size_t previous = 0;
    for (int b = 0; b <= 100; ++b) {
      const std::size_t calls = schedule_masks(seq, backend, b / 100.0).backend_calls;
      if (calls < previous) ++monotone_failures;
      previous = calls;
    }
  }
  return {extreme_failures == 0 && monotone_failures == 0,
          fmt("100 score tables, %zu extreme-case failures, %zu monotonicity breaks over 101 betas",
              extreme_failures, monotone_failures)};
}

// 9. Occlusion rectangles and frequency.
Outcome occlusion_fidelity() {
  const SensorGeometry g = kDavis346;
  const ToreVolume vol{g, 1, 0, std::vector<float>(2 * g.pixel_count(), 1.0f)};
  std::string detail;
  bool ok = true;
  for (double prob : {0.8, 1.0}) {
    std::mt19937_64 rng(prob == 1.0 ? 909 : 908);
    const OcclusionParams params{80, 80, prob};
    std::size_t hits = 0;
    std::size_t bad_rects = 0;
    for (int i = 0; i < 10'000; ++i) {
      const OcclusionResult r = occlude(vol, params, rng);
      if (!r.rect) continue;
      ++hits;
      const PixelRect& q = *r.rect;
      if (q.width < 1 || q.height < 1 || q.width > 80 || q.height > 80 || q.x < 0 || q.y < 0 ||
          q.x + q.width > g.width || q.y + q.height > g.height) {
        ++bad_rects;
      }
      if (i % 500 == 0) {
        std::size_t zeros = 0;
        for (float v : r.volume.values) zeros += v == 0.0f;
        if (zeros != 2u * static_cast<std::size_t>(q.width * q.height)) ++bad_rects;
      }
    }
    const double n = 10'000.0;
    const double sigma = std::sqrt(n * prob * (1.0 - prob));
    const bool band = std::abs(static_cast<double>(hits) - n * prob) <= 3.0 * sigma;
    ok = ok && band && bad_rects == 0;
    detail += fmt("p=%.1f: %zu/10000 occluded (expect %.0f +- %.1f), %zu bad rects; ", prob, hits, n * prob,
                  3.0 * sigma, bad_rects);
  }
  return {ok, detail};
}

// 10. normalize then denormalize recovers the world skeleton.
Outcome normalization_round_trip() {
  std::mt19937_64 rng(1010);
  double worst = 0.0;
  std::size_t head_not_zero = 0;
  for (int trial = 0; trial < 1000; ++trial) {
    const CameraModel cam = oracle::random_camera(rng);
    const SkeletonFrame s = oracle::random_skeleton(cam, rng);
    const NormalizedLabels n = normalize_labels(s, cam);
    if (n.pose.joints[0].z() != 0.0) ++head_not_zero;
    const Pose3D back = denormalize(n.pose, cam, n.head_depth_mm);
    for (std::size_t j = 0; j < kJointCount; ++j) {
      const double scale = std::max(s.joints[j].norm(), cam.to_camera(s.joints[j]).z());
      worst = std::max(worst, (back.joints[j] - s.joints[j]).norm() / scale);
    }
  }
  return {worst <= 1e-9 && head_not_zero == 0,
          fmt("1000 skeletons, worst relative error %.2e (limit 1e-9), %zu non-zero head depths", worst,
              head_not_zero)};
}

// 11. TORE windows at 20 to 150 FPS over one stream.
Outcome rate_flexibility() {
  const EventStream s = random_stream(kDavis346, 100'000, 1'000'000, 1111, 0);
  const ToreParams params{};
  std::string failures;
  std::size_t total_windows = 0;
  for (int fps : {20, 25, 30, 50, 60, 75, 100, 120, 150}) {
    const std::uint64_t window = static_cast<std::uint64_t>(std::llround(1e6 / fps));
    const auto slices = slice_constant_time(s, window);
    std::size_t partitioned = 0;
    bool ok = true;
    ToreState state(kDavis346, params);
    std::vector<std::uint32_t> seen(2 * kDavis346.pixel_count(), 0);
    for (std::size_t k = 0; k < slices.size(); ++k) {
      const auto& sl = slices[k];
      ok = ok && sl.begin_us == k * window && sl.end_us == (k + 1) * window;
      for (const Event& e : sl.events) {
        ok = ok && e.t >= sl.begin_us && e.t < sl.end_us;
        ++seen[static_cast<std::size_t>(polarity_index(e.polarity)) * kDavis346.pixel_count() +
               std::size_t{e.y} * kDavis346.width + e.x];
      }
      partitioned += sl.events.size();
      state.ingest(sl.events);
      const ToreVolume v = tore_materialize(state, sl.end_us);
      const std::size_t plane = v.plane_size();
      for (std::size_t pol = 0; pol < 2 && ok; ++pol) {
        for (std::size_t px = 0; px < plane; ++px) {
          const std::size_t n_hist = seen[pol * plane + px];
          float previous = 1.0f;
          for (std::size_t c = 0; c < v.depth; ++c) {
            const float x = v.values[(pol * v.depth + c) * plane + px];
            const bool in_range = std::isfinite(x) && x >= 0.0f && x <= 1.0f;
            const bool support = x == 0.0f || c < n_hist;
            if (!in_range || !support || x > previous) ok = false;
            previous = x;
          }
        }
      }
      ++total_windows;
    }
    if (partitioned != s.size()) ok = false;
    if (!ok) failures += std::to_string(fps) + " ";
  }
  return {failures.empty(), fmt("%zu windows over 9 rates, failing rates: [%s]", total_windows, failures.c_str())};
}

// 12. Parse + ingest throughput and report consistency.
Outcome throughput() {
  cli::RunConfig c;
  c.output.clear();
  c.seed = 12;
  c.bench_events = 2'000'000;
  c.bench_windows = 20;
  const cli::BenchReport a = cli::cmd_bench(c);
  const cli::BenchReport b = cli::cmd_bench(c);
  auto close = [](double x, double y) { return std::abs(x - y) <= 1e-9 * std::abs(y); };
  const double n = static_cast<double>(a.events);
  const bool consistent =
      a.events == c.bench_events && b.events == a.events && a.windows == c.bench_windows &&
      close(a.parse_events_per_second, n / a.parse_seconds) &&
      close(a.ingest_events_per_second, n / a.ingest_seconds) &&
      close(a.parse_ingest_events_per_second, n / (a.parse_seconds + a.ingest_seconds)) &&
      close(a.windows_per_second, static_cast<double>(a.windows) / a.materialize_seconds) &&
      a.parse_ingest_events_per_second > 0.0;
  const double best = std::max(a.parse_ingest_events_per_second, b.parse_ingest_events_per_second);
  return {consistent && best >= 1e6,
          fmt("parse+ingest %.3g ev/s (target 1e6), parse %.3g ev/s, ingest %.3g ev/s, %.3g windows/s, consistent=%d",
              best, a.parse_events_per_second, a.ingest_events_per_second, a.windows_per_second, consistent ? 1 : 0)};
}

}  // namespace

int main() {
  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria{
      {"tore oracle equivalence", tore_oracle_equivalence},
      {"tore boundary constants", tore_boundaries},
      {"simulator conservation", simulator_conservation},
      {"noise monotonicity", noise_monotonicity},
      {"evt1 round trip", format_round_trip},
      {"metric exactness", metric_exactness},
      {"gradient checks", gradient_checks},
      {"scheduler extremes and monotonicity", scheduler_extremes},
      {"occlusion protocol", occlusion_fidelity},
      {"normalization round trip", normalization_round_trip},
      {"representation rate flexibility", rate_flexibility},
      {"throughput", throughput},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    std::printf("%s %2zu %s: %s\n", o.pass ? "PASS" : "FAIL", i + 1, criteria[i].first, o.detail.c_str());
    std::fflush(stdout);
    failed += o.pass ? 0 : 1;
  }
  std::printf("%d of %zu criteria failed\n", failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
