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

#include "qesc/csv.hpp"

#include <charconv>
#include <system_error>

#include "qesc/version.hpp"

namespace qesc {

std::string format_double(double value) {
  char buffer[64];
  const std::to_chars_result result =
      std::to_chars(buffer, buffer + sizeof buffer, value);
  if (result.ec != std::errc())
    throw std::runtime_error("format_double: conversion failed");
  return std::string(buffer, result.ptr);
}

void write_csv_preamble(std::ostream& out, const RunConfig& config) {
  const SeedSet seeds = seed_set(config.loop.master_seed);
  out << "# " << kToolName << " " << kToolVersion << "\n";
  out << "# config_hash: " << config.config_hash << "\n";
  out << "# seeds: master=" << seeds.master << " drift=" << seeds.drift
      << " drb=" << seeds.drb << " esc=" << seeds.esc << "\n";
}

void write_trace_csv(std::ostream& out, const RunConfig& config,
                     const LoopResult& result) {
  write_csv_preamble(out, config);
  out << "time_hours,controlled_error,uncontrolled_error,g1g2,psi1,psi2,"
         "q0_g2e,q0_psi_2q,q1_g2e,q1_psi_2q,objective_last\n";
  for (const LoopSample& s : result.samples) {
    out << format_double(s.t_seconds / 3600.0) << ","
        << format_double(s.controlled_error) << ","
        << format_double(s.uncontrolled_error);
    for (double base : s.knob_bases) out << "," << format_double(base);
    for (double latent : s.latents) out << "," << format_double(latent);
    out << "," << format_double(s.objective_last) << "\n";
  }
}

void write_esc_trace_csv(std::ostream& out, const RunConfig& config,
                         const LoopResult& result) {
  write_csv_preamble(out, config);
  out << "calibration,iteration,knob,base,xi,delta\n";
  for (const EscTraceRow& row : result.esc_rows) {
    out << row.calibration << "," << row.iteration << "," << row.knob << ","
        << format_double(row.base_before) << "," << format_double(row.xi)
        << "," << format_double(row.delta) << "\n";
  }
}

void write_grid_csv(std::ostream& out, const RunConfig& config,
                    std::span<const GridResult> results) {
  write_csv_preamble(out, config);
  out << "calibration_interval_minutes,circuits_per_depth,shots_per_circuit,"
         "iterations_per_calibration,n_t,runtime_min_per_hour,suppression,"
         "mean_controlled_error,mean_uncontrolled_error,status\n";
  for (const GridResult& row : results) {
    out << format_double(row.cell.calibration_interval_minutes) << ","
        << row.cell.circuits_per_depth << "," << row.cell.shots_per_circuit
        << "," << row.cell.iterations_per_calibration << "," << row.cell.n_t
        << "," << format_double(row.runtime_min_per_hour) << ","
        << format_double(row.suppression) << ","
        << format_double(row.mean_controlled) << ","
        << format_double(row.mean_uncontrolled) << "," << row.status << "\n";
  }
}

void write_offset_demo_csv(std::ostream& out, const RunConfig& config,
                           const LoopResult& result) {
  write_csv_preamble(out, config);
  out << "iteration,sim_minutes,g1g2,psi1,psi2,reference_p,"
         "reference_p_std_error\n";
  for (const ReferenceSample& reference : result.references) {
    out << reference.iteration << ","
        << format_double(reference.t_seconds / 60.0);
    for (double base : reference.knob_bases) out << "," << format_double(base);
    out << "," << format_double(reference.estimate.fit.p) << ","
        << format_double(reference.estimate.fit.p_std_error) << "\n";
  }
}

void write_drb_csv(std::ostream& out, const RunConfig& config,
                   const DrbEstimate& estimate) {
  write_csv_preamble(out, config);
  out << "depth,mean_success,std_error,p,p_std_error,low_confidence\n";
  for (std::size_t j = 0; j < estimate.depths.size(); ++j) {
    out << estimate.depths[j] << ","
        << format_double(estimate.depth_means[j]) << ","
        << format_double(std::sqrt(estimate.depth_variances[j])) << ","
        << format_double(estimate.fit.p) << ","
        << format_double(estimate.fit.p_std_error) << ","
        << (estimate.fit.low_confidence ? 1 : 0) << "\n";
  }
}

}  // namespace qesc
