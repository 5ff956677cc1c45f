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

#include <doctest.h>

#include <filesystem>
#include <fstream>

#include "wfslab/config.hpp"

using namespace wfslab;

namespace {

std::string error_of(const std::string& text) {
  try {
    parse_config(text, "t.cfg");
  } catch (const ConfigError& e) {
    return e.what();
  }
  return {};
}

}  // namespace

TEST_CASE("defaults survive a print and parse cycle") {
  const auto cfg = parse_config(default_config_text());
  const SimulationConfig fresh;
  const auto& a = cfg.cohort;
  const auto& b = fresh.cohort;
  CHECK(a.participants == b.participants);
  CHECK(a.base_seed == b.base_seed);
  CHECK(a.wfs_first == b.wfs_first);
  CHECK(a.session.agent.probe_step == b.session.agent.probe_step);
  CHECK(a.session.agent.cue_noise_itd == b.session.agent.cue_noise_itd);
  CHECK(a.session.misalignment.sigma_rotation == doctest::Approx(b.session.misalignment.sigma_rotation));
  CHECK(a.session.models.array.speakers.size() == 64);
  CHECK(a.session.models.wfs_mode == RenderMode::Static);
  CHECK(a.session.models.rolloff.max_distance == 650.0);
  CHECK(a.session.timing.guess_timeout == 30.0);
  CHECK(a.session.models.driving.static_subarray->rule == StaticSubarray::Rule::NearestSide);
}

TEST_CASE("settings are applied") {
  const auto cfg = parse_config(R"(
# comment
[cohort]
participants = 3
seed = 40
out = runs

[agent]
policy = oracle
walk_speed = 1.2

[render]
mode = user_dependent
static_subarray = 2
itd_model = first_arrival

[array]
side_length = 3
speakers_per_side = 8
center_x = 0.5

[demographics]
vr_experience = none
)");
  const auto& c = cfg.cohort;
  CHECK(c.participants == 3);
  CHECK(c.base_seed == 40);
  CHECK(c.out_dir == "runs");
  CHECK(c.session.policy == AgentPolicy::Oracle);
  CHECK(c.session.agent.walk_speed == 1.2);
  CHECK(c.session.models.wfs_mode == RenderMode::UserDependent);
  CHECK(c.session.models.driving.static_subarray->side == 2);
  CHECK(c.session.models.cues.itd_model == ItdModel::FirstArrival);
  CHECK(c.session.models.array.speakers.size() == 32);
  CHECK(c.session.geometry.walkable.min.isApprox(Vec2(-1.0, -1.5)));
  CHECK(c.demographics.vr_experience == VrExperience::None);
}

TEST_CASE("errors carry file and line") {
  CHECK(error_of("[cohort]\nparticipants = 2\nbogus = 1\n").starts_with("t.cfg:3:"));
  CHECK(error_of("[nowhere]\n").starts_with("t.cfg:1:"));
  CHECK(error_of("participants = 2\n").starts_with("t.cfg:1:"));
  CHECK(error_of("[cohort]\nparticipants = two\n").starts_with("t.cfg:2:"));
  CHECK(error_of("[cohort]\nparticipants = 2\nparticipants = 3\n").find("duplicate") != std::string::npos);
  CHECK(error_of("[cohort\n").find("unterminated") != std::string::npos);
  CHECK(error_of("[render]\nmode = fancy\n").starts_with("t.cfg:2:"));
}

TEST_CASE("range checks") {
  CHECK_FALSE(error_of("[cohort]\nparticipants = 0\n").empty());
  CHECK_FALSE(error_of("[cohort]\nparticipants = 2\nwfs_first = 3\n").empty());
  CHECK_FALSE(error_of("[agent]\nhand_dropout = 1.5\n").empty());
  CHECK_FALSE(error_of("[rolloff]\nmin_distance = 5\nmax_distance = 1\n").empty());
  CHECK_FALSE(error_of("[array]\nspeakers_per_side = 1\n").empty());
  CHECK_FALSE(error_of("[render]\nhalf_aperture_deg = 120\n").empty());
  CHECK(error_of("[render]\nhalf_aperture_deg = 90\n").empty());
}

TEST_CASE("config files") {
  const auto file = std::filesystem::temp_directory_path() / "wfslab_test.cfg";
  std::ofstream(file) << "[cohort]\nparticipants = 2\n";
  CHECK(load_config(file).cohort.participants == 2);
  std::filesystem::remove(file);
  CHECK_THROWS_AS(load_config(file), ConfigError);
}
