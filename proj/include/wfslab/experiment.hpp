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
#include <string>
#include <vector>

#include "wfslab/agent.hpp"
#include "wfslab/calibration.hpp"
#include "wfslab/listener.hpp"
#include "wfslab/logging.hpp"
#include "wfslab/session.hpp"
#include "wfslab/wavefield.hpp"

namespace wfslab {

inline constexpr double kTrackingRate = 50.0;  // Hz
inline constexpr double kTrackingStep = 1.0 / kTrackingRate;

// Acoustic models used to render a trial to the listener.
struct RenderModels {
  SpeakerArray array = build_square_array(2.0, 16, 1.6, Vec3(0.0, 0.0, 0.0));
  DrivingOptions driving = default_driving();
  RenderMode wfs_mode = RenderMode::Static;
  CueOptions cues;
  StereoRolloff rolloff;

  static DrivingOptions default_driving() {
    DrivingOptions o;
    o.static_subarray = StaticSubarray::nearest();
    return o;
  }
};

struct TrialTiming {
  double onset_delay = 1.0;     // s of idle tracking before the sound starts
  double guess_timeout = 30.0;  // s allowed after the sound ends
  double feedback = 2.0;        // s of tracking after the guess
};

// What the listener hears in one trial: the (possibly moving) source, moved by
// the calibration error when the WFS system renders it.
class TrialSensor final : public Sensor {
 public:
  TrialSensor(const TrialSpec& spec, const RenderModels& models,
              const RigidTransform2D& misalignment);

  [[nodiscard]] std::optional<Percept> sense(const ListenerState& listener,
                                             double t_since_onset) const override;

  /// Where the playback system places the source at time t.
  [[nodiscard]] Vec3 rendered_source(double t_since_onset) const;

 private:
  const TrialSpec& spec_;
  const RenderModels& models_;
  RigidTransform2D perceived_;
};

struct TrialOutcome {
  TrialResult result;
  std::vector<TrackingSample> samples;
};

/// Runs Idle -> Playing -> AwaitingGuess -> Feedback for one trial. `start_tick`
/// counts 50 Hz ticks since session start and is advanced past the trial.
TrialOutcome run_trial(const TrialSpec& spec, Agent& agent, const RenderModels& models,
                       const RigidTransform2D& misalignment, const TrialTiming& timing,
                       const TrialContext& context, Rng& rng, std::int64_t& start_tick);

struct SessionConfig {
  ExperimentGeometry geometry;
  RenderModels models;
  TrialTiming timing;
  AgentParams agent;
  AgentPolicy policy = AgentPolicy::Search;
  MisalignmentModel misalignment;
};

struct SessionRun {
  SessionPlan plan;
  RigidTransform2D misalignment;
  std::vector<TrialResult> results;
  std::vector<std::vector<TrackingSample>> tracking;
  std::vector<TrialResult> tutorial_results;
  std::vector<std::vector<TrackingSample>> tutorial_tracking;
};

/// One participant: a search agent per system sharing a single body.
SessionRun run_session(const SessionPlan& plan, const SessionConfig& config);

/// session.csv, pos_round_<N>.csv per trial and dems.csv; tutorial trials go to
/// tutorial_session.csv and tutorial_pos_round_<N>.csv so analyses skip them.
void write_session_run(const SessionRun& run, const Demographics& dems,
                       const std::filesystem::path& dir);

struct CohortConfig {
  int participants = 6;
  std::uint64_t base_seed = 1;
  int wfs_first = -1;  // participants starting with WFS; negative means two thirds
  bool tutorial = false;
  SessionConfig session;
  // Written to every dems.csv; the participant id is filled in per session.
  Demographics demographics{"", 25, "unspecified", VrExperience::Casual};
  std::filesystem::path out_dir = "logs";
};

/// Participant i gets seed base_seed + i and id "P<i+1>"; the first `wfs_first`
/// participants start with WFS. Returns the log directory of each participant.
std::vector<std::filesystem::path> run_cohort(const CohortConfig& config);

/// Plans run_cohort would execute, without running them.
std::vector<SessionPlan> cohort_plans(const CohortConfig& config);

}  // namespace wfslab
