// Copyright 2026 The wfslab Authors. All Rights Reserved.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <filesystem>
#include <string>

#include "wfslab/experiment.hpp"

namespace wfslab {

// Simulation settings read from a sectioned key=value file:
//
//   [cohort]
//   participants = 6
//   seed = 1
//
// Unknown sections or keys, malformed values and failed range checks raise
// ConfigError naming the file and line.
struct SimulationConfig {
  CohortConfig cohort;
};

SimulationConfig parse_config(const std::string& text, const std::string& origin = "<config>");
SimulationConfig load_config(const std::filesystem::path& path);

/// Throws ConfigError on out-of-range settings.
void validate_config(const SimulationConfig& config);

/// The defaults as a config file, one key per setting.
std::string default_config_text();

}  // namespace wfslab
