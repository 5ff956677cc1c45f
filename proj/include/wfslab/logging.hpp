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
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "wfslab/session.hpp"

namespace wfslab {

enum class VrExperience { None, Casual, Regular, Enthusiast };

std::string_view to_string(VrExperience v);
bool parse(std::string_view text, VrExperience& out);

struct Demographics {
  std::string participant_id;
  int age = 0;
  std::string gender;
  VrExperience vr_experience = VrExperience::None;
};

// One row of session.csv.
struct SessionLogRow {
  std::string participant_id;
  int trial = 0;
  int block = 0;
  System system = System::WFS;
  Environment environment = Environment::Blank;
  Sound sound = Sound::Telephone;
  Movement movement = Movement::Static;
  Vec3 source = Vec3::Zero();
  std::optional<Vec2> trajectory_end;
  std::optional<double> trajectory_duration;
  Vec2 rendered_start = Vec2::Zero();
  Vec2 rendered_end = Vec2::Zero();
  Vec3 guess = Vec3::Zero();
  double guess_time = 0.0;
  double onset_time = 0.0;
  double score = 0.0;
  bool timed_out = false;
  int clamp_events = 0;

  [[nodiscard]] Vec2 target() const { return trajectory_end.value_or(horizontal(source)); }
  bool operator==(const SessionLogRow&) const = default;
};

SessionLogRow make_log_row(const std::string& participant_id, const TrialSpec& spec,
                           const TrialResult& result);

inline constexpr std::string_view kSessionLogHeader =
    "participant,trial,block,system,environment,sound,movement,source_x,source_y,source_z,"
    "end_x,end_y,duration,render_x,render_y,render_end_x,render_end_y,guess_x,guess_y,guess_z,"
    "guess_time,onset_time,score,timed_out,clamp_events";

inline constexpr std::string_view kTrackingHeader =
    "t,hmd_x,hmd_y,hmd_z,hmd_qw,hmd_qx,hmd_qy,hmd_qz,"
    "left_x,left_y,left_z,left_qw,left_qx,left_qy,left_qz,"
    "right_x,right_y,right_z,right_qw,right_qx,right_qy,right_qz";

inline constexpr std::string_view kDemographicsHeader = "participant,age,gender,vr_experience";

/// logs/<participant_id>_<seed>/
std::filesystem::path session_log_dir(const std::filesystem::path& root, const SessionPlan& plan);

void write_session_log(const std::vector<SessionLogRow>& rows, const std::filesystem::path& file);
void write_session_log(const SessionPlan& plan, const std::vector<TrialResult>& results,
                       const std::filesystem::path& dir);
std::vector<SessionLogRow> read_session_log(const std::filesystem::path& file);

/// pos_round_<trial_nr>.csv; hands with lost tracking are written as the sentinel.
std::filesystem::path write_tracking(int trial_nr, const std::vector<TrackingSample>& samples,
                                     const std::filesystem::path& dir,
                                     std::string_view prefix = "pos_round_");
/// All rows as written; sentinel hands come back with valid == false.
std::vector<TrackingSample> read_tracking(const std::filesystem::path& file);

void write_demographics(const Demographics& dems, const std::filesystem::path& dir);
Demographics read_demographics(const std::filesystem::path& file);

struct PoseSample {
  double t = 0.0;
  Vec3 position = Vec3::Zero();
  Quat rotation = Quat::Identity();
};

// Tracking of one trial after sentinel filtering: hand streams omit lost samples.
struct TrialTracking {
  std::vector<PoseSample> hmd;
  std::vector<PoseSample> left_hand;
  std::vector<PoseSample> right_hand;
};

TrialTracking filter_invalid(const std::vector<TrackingSample>& samples);

struct SessionLog {
  std::string participant_id;
  std::optional<Demographics> demographics;
  std::vector<SessionLogRow> trials;
  std::vector<TrialTracking> tracking;  // parallel to trials
};

/// Loads session.csv, every pos_round file it references and dems.csv if present.
SessionLog read_session(const std::filesystem::path& dir);

/// Every directory under `root` holding a session.csv, sorted by name.
std::vector<std::filesystem::path> find_session_dirs(const std::filesystem::path& root);

}  // namespace wfslab
