// Copyright 2026 The qesc developers
//
// Licensed under the Apache License, Version 2.0 (the "License"); you may
// not use this file except in compliance with the License. You may obtain
// a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS, WITHOUT
// WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied. See the
// License for the specific language governing permissions and limitations
// under the License.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "qesc/csv.hpp"
#include "qesc/loop.hpp"
#include "qesc/run_config.hpp"
#include "qesc/version.hpp"

namespace {

namespace fs = std::filesystem;

constexpr int kExitOk = 0;
constexpr int kExitRuntime = 1;
constexpr int kExitUsage = 2;

struct CommonArgs {
  std::string config_path;
  std::string out_dir = ".";
  std::uint64_t seed = 0;
  bool seed_set = false;
};

void add_common(CLI::App& cmd, CommonArgs& args) {
  cmd.add_option("--config", args.config_path, "run configuration (JSON)")
      ->required();
  cmd.add_option("--out-dir", args.out_dir, "directory for CSV outputs");
  cmd.add_option("--seed", args.seed, "override master_seed from the config")
      ->each([&args](const std::string&) { args.seed_set = true; });
}

qesc::RunConfig load_config(const CommonArgs& args) {
  qesc::RunConfig config = qesc::load_run_config(args.config_path);
  if (args.seed_set) config.loop.master_seed = args.seed;
  return config;
}

fs::path open_output(const CommonArgs& args, const std::string& name,
                     std::ofstream& out) {
  fs::create_directories(args.out_dir);
  const fs::path path = fs::path(args.out_dir) / name;
  out.open(path);
  if (!out)
    throw std::runtime_error("cannot write '" + path.string() + "'");
  return path;
}

int run_simulate(const CommonArgs& args) {
  const qesc::RunConfig config = load_config(args);
  const qesc::LoopResult result = qesc::run_closed_loop(config.loop);

  std::ofstream trace_file;
  const fs::path trace_path = open_output(args, "trace.csv", trace_file);
  qesc::write_trace_csv(trace_file, config, result);

  std::ofstream esc_file;
  const fs::path esc_path = open_output(args, "esc_trace.csv", esc_file);
  qesc::write_esc_trace_csv(esc_file, config, result);

  std::cout << "simulate: duration_hours="
            << qesc::format_double(config.loop.duration_hours)
            << " calibrations=" << result.calibrations
            << " charged_minutes="
            << qesc::format_double(result.charged_seconds / 60.0) << "\n";
  std::cout << "errors: controlled="
            << qesc::format_double(result.mean_controlled)
            << " uncontrolled="
            << qesc::format_double(result.mean_uncontrolled)
            << " suppression=" << qesc::format_double(result.suppression)
            << "\n";
  if (result.g2e_clamp_events > 0)
    std::cout << "warning: g2e clamped at the floor "
              << result.g2e_clamp_events << " times\n";
  std::cout << "wrote " << trace_path.string() << " and " << esc_path.string()
            << "\n";
  return kExitOk;
}

int run_grid(const CommonArgs& args, const std::string& space_path) {
  const qesc::RunConfig config = load_config(args);
  const std::vector<qesc::GridCell> cells = qesc::load_grid_space(space_path);
  const std::vector<qesc::GridResult> results =
      qesc::grid_search(cells, config.loop);

  std::ofstream grid_file;
  const fs::path grid_path = open_output(args, "grid.csv", grid_file);
  qesc::write_grid_csv(grid_file, config, results);

  for (const qesc::GridResult& row : results) {
    std::cout << "cell interval="
              << qesc::format_double(row.cell.calibration_interval_minutes)
              << "min circuits=" << row.cell.circuits_per_depth
              << " shots=" << row.cell.shots_per_circuit
              << " iterations=" << row.cell.iterations_per_calibration
              << " n_t=" << row.cell.n_t << ": ";
    if (row.status == "ok")
      std::cout << "runtime_min_per_hour="
                << qesc::format_double(row.runtime_min_per_hour)
                << " suppression=" << qesc::format_double(row.suppression)
                << "\n";
    else
      std::cout << "failed: " << row.status << "\n";
  }
  std::cout << "wrote " << grid_path.string() << "\n";
  return kExitOk;
}

int run_offset_demo(const CommonArgs& args) {
  qesc::RunConfig config = load_config(args);
  config.loop.reference_eval_per_iteration = true;

  // Solve the per-shot overhead so one iteration (n_t dither evaluations
  // plus the reference) costs the target wall-clock time.
  qesc::DrbDesign bare = config.loop.drb;
  bare.per_shot_overhead_seconds = 0.0;
  const double gate_seconds = qesc::drb_runtime_seconds(bare, 1);
  const int evals_per_iteration = config.loop.schedule.n_t + 1;
  const double target_eval_seconds =
      config.offset_demo.target_iteration_minutes * 60.0 /
      evals_per_iteration;
  int shots_per_eval = 0;
  for (int depth_count = 0;
       depth_count < static_cast<int>(config.loop.drb.depths.size());
       ++depth_count)
    shots_per_eval +=
        config.loop.drb.circuits_per_depth * config.loop.drb.shots_per_circuit;
  const double overhead =
      std::max(0.0, (target_eval_seconds - gate_seconds) / shots_per_eval);
  config.loop.drb.per_shot_overhead_seconds = overhead;

  const qesc::LoopResult result = qesc::run_closed_loop(config.loop);

  std::ofstream demo_file;
  const fs::path demo_path = open_output(args, "offset_demo.csv", demo_file);
  qesc::write_offset_demo_csv(demo_file, config, result);

  if (!result.references.empty()) {
    std::ofstream drb_file;
    const fs::path drb_path =
        open_output(args, "reference_drb.csv", drb_file);
    qesc::write_drb_csv(drb_file, config, result.references.back().estimate);
    std::cout << "wrote " << drb_path.string() << "\n";
  }

  const double iteration_minutes =
      qesc::drb_runtime_seconds(config.loop.drb, evals_per_iteration) / 60.0;
  std::cout << "offset-demo: calibrated per_shot_overhead_seconds="
            << qesc::format_double(overhead)
            << " iteration_minutes=" << qesc::format_double(iteration_minutes)
            << "\n";
  std::cout << "initial offsets: psi1="
            << qesc::format_double(config.loop.initial_offsets(qesc::kKnobPsi1))
            << " psi2="
            << qesc::format_double(config.loop.initial_offsets(qesc::kKnobPsi2))
            << "\n";
  std::cout << "final bases: g1g2="
            << qesc::format_double(result.final_bases(qesc::kKnobG1G2))
            << " psi1="
            << qesc::format_double(result.final_bases(qesc::kKnobPsi1))
            << " psi2="
            << qesc::format_double(result.final_bases(qesc::kKnobPsi2))
            << "\n";
  std::cout << "residuals: psi1="
            << qesc::format_double(
                   std::abs(result.final_bases(qesc::kKnobPsi1)))
            << " psi2="
            << qesc::format_double(
                   std::abs(result.final_bases(qesc::kKnobPsi2)))
            << "\n";
  std::cout << "wrote " << demo_path.string() << "\n";
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{std::string(qesc::kToolName) +
               " - closed-loop two-qubit gate calibration simulator"};
  app.set_version_flag("--version", std::string(qesc::kToolVersion));
  app.require_subcommand(1);

  CommonArgs simulate_args;
  CLI::App* simulate =
      app.add_subcommand("simulate", "run one closed-loop drift simulation");
  add_common(*simulate, simulate_args);

  CommonArgs grid_args;
  std::string space_path;
  CLI::App* grid = app.add_subcommand(
      "grid", "sweep controller hyperparameters over one drift trajectory");
  add_common(*grid, grid_args);
  grid->add_option("--space", space_path, "grid cells (JSON)")->required();

  CommonArgs demo_args;
  CLI::App* demo = app.add_subcommand(
      "offset-demo", "recover injected static phase offsets");
  add_common(*demo, demo_args);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& error) {
    const int code = app.exit(error);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (simulate->parsed()) return run_simulate(simulate_args);
    if (grid->parsed()) return run_grid(grid_args, space_path);
    if (demo->parsed()) return run_offset_demo(demo_args);
  } catch (const qesc::ConfigError& error) {
    std::cerr << "error: " << error.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& error) {
    std::cerr << "error: " << error.what() << "\n";
    return kExitRuntime;
  }
  return kExitUsage;
}
