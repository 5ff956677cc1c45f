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

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Geometry>

#include "wfslab/calibration.hpp"
#include "wfslab/geometry.hpp"
#include "wfslab/listener.hpp"
#include "wfslab/rng.hpp"
#include "wfslab/wavefield.hpp"

namespace wfslab {

enum class Sound { Telephone, Piano, Birdsong };
enum class System { WFS, Stereo };
enum class Environment { Blank, Indoors, Outdoors };
enum class Movement { Static, Dynamic };

inline constexpr Sound kSounds[] = {Sound::Telephone, Sound::Piano, Sound::Birdsong};
inline constexpr System kSystems[] = {System::WFS, System::Stereo};
inline constexpr Environment kEnvironments[] = {Environment::Blank, Environment::Indoors,
                                                Environment::Outdoors};

std::string_view to_string(Sound s);
std::string_view to_string(System s);
std::string_view to_string(Environment e);
std::string_view to_string(Movement m);

// Return false for unknown names.
bool parse(std::string_view text, Sound& out);
bool parse(std::string_view text, System& out);
bool parse(std::string_view text, Environment& out);
bool parse(std::string_view text, Movement& out);

inline System other(System s) { return s == System::WFS ? System::Stereo : System::WFS; }

struct SoundAsset {
  Sound id = Sound::Telephone;
  double duration = 0.0;  // s
};

/// Telephone 6.12 s, piano 6.861 s, birdsong 2 min 39.362 s.
SoundAsset sound_asset(Sound id);

// Shared geometry of the experiment room.
struct ExperimentGeometry {
  Rect walkable = Rect::centered_square(Vec2::Zero(), 2.0);
  double height = 1.6;
};

inline constexpr double kTrajectoryLength = 2.0;
inline constexpr double kMinTrajectoryDuration = 1.0;
inline constexpr double kMaxTrajectoryDuration = 3.0;

struct Trajectory {
  Vec2 start = Vec2::Zero();
  Vec2 end = Vec2::Zero();
  double duration = 1.0;

  [[nodiscard]] Vec2 at(double t) const;
};

/// Draws start and direction uniformly, keeping the first 2 m segment that stays inside.
Trajectory random_trajectory(Rng& rng, const Rect& area);
/// Fixed start; directions are rejection-sampled. Throws PlacementError when
/// no direction fits within 1000 draws.
Trajectory random_trajectory(Rng& rng, const Rect& area, const Vec2& start);

struct TrialSpec {
  int index = 0;  // 1-based position in the session
  int block = 0;  // 1-based; tutorial trials use block 0
  System system = System::WFS;
  Environment environment = Environment::Blank;
  Sound sound = Sound::Telephone;
  Movement movement = Movement::Static;
  Vec3 source_start = Vec3::Zero();
  std::optional<Trajectory> trajectory;
  bool tutorial = false;

  [[nodiscard]] double sound_duration() const { return sound_asset(sound).duration; }
  /// Static trials: the source; dynamic trials: where the source comes to rest.
  [[nodiscard]] Vec2 target() const;
  [[nodiscard]] Vec2 source_at(double t_since_onset) const;
};

struct SessionPlan {
  std::string participant_id;
  std::uint64_t seed = 0;
  System first_system = System::WFS;
  std::vector<TrialSpec> trials;
  std::vector<TrialSpec> tutorial;
};

inline constexpr int kStaticTrials = 36;
inline constexpr int kDynamicTrials = 18;
inline constexpr int kTrialsPerSession = kStaticTrials + kDynamicTrials;
inline constexpr int kStaticBlockSize = 6;
inline constexpr int kDynamicBlockSize = 9;
inline constexpr int kTutorialTrials = 4;

/// Per system half: one static block per environment (2 trials per sound),
/// then a dynamic block (3 trials per sound, blank room). Trials are shuffled
/// within blocks only.
SessionPlan generate_session(const std::string& participant_id, std::uint64_t seed,
                             System first_system, const ExperimentGeometry& geometry = {},
                             bool with_tutorial = false);

/// Throws InvalidArgument describing the first violated design invariant.
void validate_plan(const SessionPlan& plan, const ExperimentGeometry& geometry = {});

/// Session definition file: comment header, then one line per trial.
void write_session_file(std::ostream& out, const SessionPlan& plan);
void write_session_file(const std::filesystem::path& path, const SessionPlan& plan);
SessionPlan read_session_file(std::istream& in, const std::string& origin = "<session>");
SessionPlan read_session_file(const std::filesystem::path& path);

using Quat = Eigen::Quaterniond;

struct HandSample {
  Vec3 position = Vec3::Zero();
  Quat rotation = Quat::Identity();
  bool valid = true;
};

struct TrackingSample {
  double t = 0.0;  // session-relative
  Vec3 hmd_position = Vec3::Zero();
  Quat hmd_rotation = Quat::Identity();
  HandSample left_hand;
  HandSample right_hand;
};

/// Head orientation for a yaw about +z (0 faces +y).
Quat yaw_quaternion(double yaw);

/// Lost tracking is logged as the zero vector with the identity rotation.
HandSample invalid_hand();
bool is_sentinel(const HandSample& hand);

struct TrialResult {
  int spec_index = 0;
  Vec3 guess = Vec3::Zero();
  double guess_time = 0.0;  // s after sound onset
  Vec2 target = Vec2::Zero();
  double score = 0.0;       // horizontal guess-to-target distance
  double onset_time = 0.0;  // session-relative
  Vec2 rendered_start = Vec2::Zero();
  Vec2 rendered_end = Vec2::Zero();
  bool timed_out = false;
  int clamp_events = 0;
};

inline double score_of(const Vec3& guess, const Vec2& target) {
  return (horizontal(guess) - target).norm();
}

}  // namespace wfslab
