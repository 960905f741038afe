// Copyright 2026 The evpose Authors
// SPDX-License-Identifier: Apache-2.0

// evpose command line: simulate, tore, filter, eval, bench.

#include <algorithm>
#include <cstdio>
#include <iostream>
#include <map>
#include <string>

#include <CLI11.hpp>

#include "evpose/cli/commands.hpp"
#include "evpose/cli/run_config.hpp"
#include "evpose/error.hpp"

namespace {

using evpose::cli::RunConfig;

std::string flag_name(std::string key) {
  std::replace(key.begin(), key.end(), '_', '-');
  return "--" + key;
}

struct Sub {
  CLI::App* app = nullptr;
  std::map<std::string, std::string> values;
  std::map<std::string, CLI::Option*> options;
};

Sub add_subcommand(CLI::App& root, const std::string& name, const std::string& help) {
  Sub s;
  s.app = root.add_subcommand(name, help);
  const RunConfig defaults;
  for (const auto& key : evpose::cli::config_keys()) {
    auto* opt = s.app->add_option(flag_name(key), s.values[key],
                                  "config key " + key + " (default " + evpose::cli::get_config_value(defaults, key) + ")");
    s.options[key] = opt;
  }
  return s;
}

RunConfig resolve(const Sub& s, const std::string& config_path) {
  RunConfig c;
  if (!config_path.empty()) c = evpose::cli::parse_config_file(config_path);
  for (const auto& [key, opt] : s.options) {
    if (opt->count() > 0) evpose::cli::set_config_value(c, key, s.values.at(key));
  }
  return c;
}

int run(const std::string& name, const RunConfig& c) {
  if (name == "simulate") {
    const auto r = evpose::cli::cmd_simulate(c);
    std::printf("wrote %zu events to %s, %zu heatmap windows\n", r.event_count, r.events_path.string().c_str(),
                r.heatmap_windows);
  } else if (name == "tore") {
    const auto r = evpose::cli::cmd_tore(c);
    std::printf("wrote %zu tensors to %s\n", r.tensors.size(), c.output.c_str());
  } else if (name == "filter") {
    const auto r = evpose::cli::cmd_filter(c);
    std::printf("frames %zu, backend calls %zu\n", r.frames, r.backend_calls);
  } else if (name == "eval") {
    const auto r = evpose::cli::cmd_eval(c);
    std::printf("n=%zu mpjpe_mm=%.3f pck=%.4f auc=%.4f\n", r.overall.count, r.overall.mpjpe_mm, r.overall.pck,
                r.overall.auc);
  } else if (name == "bench") {
    const auto r = evpose::cli::cmd_bench(c);
    std::printf("parse %.3g ev/s, ingest %.3g ev/s, parse+ingest %.3g ev/s, materialize %.3g windows/s\n",
                r.parse_events_per_second, r.ingest_events_per_second, r.parse_ingest_events_per_second,
                r.windows_per_second);
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"evpose: event camera pose preprocessing toolkit"};
  app.require_subcommand(1);
  std::string config_path;
  bool show_manifest = false;
  app.add_option("--config", config_path, "key = value config file")->check(CLI::ExistingFile);
  app.add_flag("--manifest", show_manifest, "print the resolved configuration and exit");
  app.fallthrough();

  std::vector<Sub> subs;
  subs.push_back(add_subcommand(app, "simulate", "frames to events, plus heatmap labels"));
  subs.push_back(add_subcommand(app, "tore", "events to TORE tensors per window"));
  subs.push_back(add_subcommand(app, "filter", "mask scheduling over TORE tensors"));
  subs.push_back(add_subcommand(app, "eval", "pose metrics from a record manifest"));
  subs.push_back(add_subcommand(app, "bench", "parse and TORE throughput"));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  try {
    for (const auto& s : subs) {
      if (!s.app->parsed()) continue;
      const RunConfig c = resolve(s, config_path);
      if (show_manifest) {
        std::cout << evpose::cli::render_config(c);
        return 0;
      }
      return run(s.app->get_name(), c);
    }
  } catch (const std::exception& e) {
    std::fprintf(stderr, "evpose: %s\n", e.what());
    return evpose::cli::exit_code_for(e);
  }
  return 4;
}
