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

#pragma once

#include <ostream>
#include <span>
#include <string>

#include "qesc/loop.hpp"
#include "qesc/run_config.hpp"

namespace qesc {

// Shortest decimal string that round-trips the value; locale-independent.
std::string format_double(double value);

// '#'-prefixed header lines: tool version, config hash, named seeds.
void write_csv_preamble(std::ostream& out, const RunConfig& config);

// time_hours, controlled_error, uncontrolled_error, knob bases, latent drift
// values, last objective.
void write_trace_csv(std::ostream& out, const RunConfig& config,
                     const LoopResult& result);

// calibration, iteration, knob, base, xi, delta.
void write_esc_trace_csv(std::ostream& out, const RunConfig& config,
                         const LoopResult& result);

void write_grid_csv(std::ostream& out, const RunConfig& config,
                    std::span<const GridResult> results);

// iteration, sim_minutes, knob bases, reference p estimate.
void write_offset_demo_csv(std::ostream& out, const RunConfig& config,
                           const LoopResult& result);

// depth, mean_success, std_error columns plus the fit summary per row.
void write_drb_csv(std::ostream& out, const RunConfig& config,
                   const DrbEstimate& estimate);

}  // namespace qesc
