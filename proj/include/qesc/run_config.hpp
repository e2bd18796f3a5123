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

#include <filesystem>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "qesc/loop.hpp"

namespace qesc {

// Invalid or missing configuration fields; the message names the JSON path.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct OffsetDemoOptions {
  double target_iteration_minutes = 9.5;
};

struct RunConfig {
  LoopConfig loop;
  OffsetDemoOptions offset_demo;
  std::string config_hash;  // FNV-1a of the canonical JSON dump
};

// Named sub-seeds derived from the master seed; recorded in output headers.
struct SeedSet {
  std::uint64_t master = 0;
  std::uint64_t drift = 0;
  std::uint64_t drb = 0;
  std::uint64_t esc = 0;
};

SeedSet seed_set(std::uint64_t master_seed);

std::string fnv1a64_hex(std::string_view text);

RunConfig parse_run_config(const std::string& json_text);
RunConfig load_run_config(const std::filesystem::path& path);

std::vector<GridCell> parse_grid_space(const std::string& json_text);
std::vector<GridCell> load_grid_space(const std::filesystem::path& path);

}  // namespace qesc
