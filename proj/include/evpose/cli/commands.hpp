// Copyright 2026 The evpose Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "evpose/cli/run_config.hpp"
#include "evpose/metrics.hpp"

namespace evpose::cli {

struct SimulateResult {
  std::filesystem::path events_path;
  std::size_t event_count = 0;
  std::size_t heatmap_windows = 0;
};

/// Frames (+ optional mask/background compositing) to EVT1 events, plus label files when
/// a skeleton CSV and camera are configured. Writes manifest.json with the resolved config.
SimulateResult cmd_simulate(const RunConfig& config);

struct ToreResult {
  std::vector<std::filesystem::path> tensors;
  std::vector<std::size_t> events_per_window;
};

/// One TORE tensor per window, materialized at each window's end with history carried
/// across windows.
ToreResult cmd_tore(const RunConfig& config);

struct FilterResult {
  std::size_t frames = 0;
  std::size_t backend_calls = 0;
  std::vector<SweepRow> sweep;
};

/// Masks each tensor of tore_dir under the early-exit scheduler; writes masked tensors,
/// schedule.csv and, when sweep_betas is set, sweep.csv.
FilterResult cmd_filter(const RunConfig& config);

/// Reads the evaluation manifest, writes report.csv and report.txt.
EvalReport cmd_eval(const RunConfig& config);

struct BenchReport {
  std::uint64_t events = 0;
  double parse_seconds = 0.0;
  double parse_events_per_second = 0.0;
  double ingest_seconds = 0.0;
  double ingest_events_per_second = 0.0;
  double parse_ingest_events_per_second = 0.0;
  std::uint64_t windows = 0;
  double materialize_seconds = 0.0;
  double windows_per_second = 0.0;
};

/// Throughput of EVT1 parsing, TORE ingest and materialization on a seeded fixture.
BenchReport cmd_bench(const RunConfig& config);

/// Maps an exception to the process exit code: 2 config, 3 data, 4 internal.
int exit_code_for(const std::exception& e) noexcept;

}  // namespace evpose::cli
