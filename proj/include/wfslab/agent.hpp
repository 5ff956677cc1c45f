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
#include <memory>
#include <optional>
#include <vector>

#include "wfslab/listener.hpp"
#include "wfslab/rng.hpp"
#include "wfslab/session.hpp"

namespace wfslab {

struct AgentParams {
  double walk_speed = 0.8;         // m/s
  double turn_speed = kPi;         // rad/s
  double probe_step = 0.15;        // m
  double cue_noise_itd = 20e-6;    // s, per measurement
  double cue_noise_level = 1.0;    // dB, per measurement
  double commit_threshold = 0.1;   // m
  double max_search_time = 20.0;   // s after onset
  double reaction_time = 0.3;      // s before the first measurement
  double reach_duration = 1.0;     // pinch-and-hold placement
  double arm_reach = 0.45;         // m, horizontal head-to-guess distance for placing
  double lean_back = 0.12;         // m the head retreats while the hand reaches
  double hand_dropout = 0.02;      // fraction of samples with lost hand tracking
  double learning_decay = 1.0;     // per-trial noise multiplier (stereo); 1 disables
  std::uint64_t seed = 1;
};

enum class Phase { Orient, Explore, Refine, Commit };

struct AgentState {
  ListenerState listener;
  Vec3 right_hand = Vec3::Zero();
  Vec3 left_hand = Vec3::Zero();
  Phase phase = Phase::Orient;
  LocalizationEstimate belief;
  std::vector<BearingObservation> observation_log;
};

// What an agent hears at one instant.
struct Percept {
  BinauralCue cue;
  double level_db = 0.0;
};

class Sensor {
 public:
  virtual ~Sensor() = default;
  /// Empty when nothing is audible (sound over, or the listener sits on an emitter).
  [[nodiscard]] virtual std::optional<Percept> sense(const ListenerState& listener,
                                                     double t_since_onset) const = 0;
};

struct TrialContext {
  Movement movement = Movement::Static;
  System system = System::WFS;
  Rect walkable;       // head positions are kept inside this rectangle
  Rect guess_area;     // guesses are clamped into this rectangle
  double height = 1.6;
  int trial_number = 0;  // 0-based count of analyzed trials before this one
  Vec2 true_target = Vec2::Zero();  // read only by OracleAgent
};

/// Rest position of a hand beside the body.
Vec3 rest_hand_position(const ListenerState& listener, bool right);

// Reach toward a guess: the hand travels from its rest pose to the guess while
// the head leans back away from it.
struct Reach {
  Vec3 hand_start = Vec3::Zero();
  Vec3 head_start = Vec3::Zero();
  Vec3 guess = Vec3::Zero();
  double lean_back = 0.12;

  [[nodiscard]] Vec3 hand_at(double u) const;
  [[nodiscard]] Vec3 head_at(double u) const;
};

/// Right-hand positions for a stream of head states; samples with an active
/// reach progress `u` follow the reach.
std::vector<Vec3> hand_trajectory(const std::vector<ListenerState>& heads,
                                  const std::vector<std::optional<std::pair<Reach, double>>>& reaches);

class Agent {
 public:
  explicit Agent(const AgentParams& params);
  virtual ~Agent() = default;

  virtual void begin_trial(const TrialContext& context);
  /// Advances by dt while the trial awaits a guess; returns the guess once placed.
  std::optional<Vec3> step(double dt, double t_since_onset, const Sensor& sensor);
  /// Guess used when the trial times out.
  [[nodiscard]] virtual Vec3 forced_guess() const;
  /// Stands still with hands at rest (before onset and during feedback).
  void idle(double dt);

  void place(const Vec3& head, double yaw);
  [[nodiscard]] const AgentState& state() const { return state_; }
  [[nodiscard]] const AgentParams& params() const { return params_; }

 protected:
  virtual std::optional<Vec3> act(double dt, double t_since_onset, const Sensor& sensor) = 0;

  /// Moves toward a horizontal target at walking speed; true once there.
  bool walk_toward(const Vec2& target, double dt);
  /// Turns toward a heading at turning speed; true once aligned.
  bool turn_toward(double heading, double dt);
  /// Starts the placing motion, walking closer first if out of reach.
  void begin_commit(const Vec2& guess);
  /// Drives the commit phase; returns the guess when the reach completes.
  std::optional<Vec3> advance_commit(double dt);
  [[nodiscard]] Vec2 clamp_guess(const Vec2& p) const;
  [[nodiscard]] Vec2 head2() const { return horizontal(state_.listener.head_position); }

  AgentParams params_;
  AgentState state_;
  TrialContext context_;
  Rng rng_;

 private:
  void clamp_hands();

  std::optional<Vec2> commit_target_;
  std::optional<Reach> reach_;
  double reach_progress_ = 0.0;
};

// Guesses the true target at the first opportunity.
class OracleAgent final : public Agent {
 public:
  using Agent::Agent;

 protected:
  std::optional<Vec3> act(double dt, double t_since_onset, const Sensor& sensor) override;
};

// Loudness-gradient search: axis-wise probes, line search along the estimated
// gradient, commit once successive loudness peaks agree.
class StereoSearchAgent final : public Agent {
 public:
  explicit StereoSearchAgent(const AgentParams& params);
  void begin_trial(const TrialContext& context) override;
  [[nodiscard]] Vec3 forced_guess() const override;

 protected:
  std::optional<Vec3> act(double dt, double t_since_onset, const Sensor& sensor) override;

 private:
  std::optional<double> measure(const Sensor& sensor, double t);
  void plan_probes();
  void start_line_search();
  void record_peak(const Vec2& peak, double level, bool moved);

  double noise_scale_ = 1.0;
  Vec2 base_ = Vec2::Zero();
  double base_level_ = 0.0;
  double probe_ = 0.15;
  double stride_ = 0.3;
  std::vector<Vec2> waypoints_;
  std::vector<double> probe_levels_;
  std::vector<Vec2> probe_points_;
  Vec2 line_dir_ = Vec2::Zero();
  Vec2 line_last_ = Vec2::Zero();
  double line_last_level_ = 0.0;
  std::optional<Vec2> last_peak_;
  Vec2 best_ = Vec2::Zero();
  double best_level_ = -1e300;
  bool measured_start_ = false;
  // Loudness is averaged over a short dwell at each measuring point.
  static constexpr int kDwellSamples = 10;
  double dwell_sum_ = 0.0;
  int dwell_count_ = 0;
};

// Direction-first search: take a bearing, shift parallel to the array side the
// sound appears to come from, and triangulate from the collected bearings.
class WfsSearchAgent final : public Agent {
 public:
  explicit WfsSearchAgent(const AgentParams& params);
  void begin_trial(const TrialContext& context) override;
  [[nodiscard]] Vec3 forced_guess() const override;

  /// Guess when triangulation fails: halfway from the listener to where the
  /// current bearing ray leaves the guess area.
  [[nodiscard]] Vec2 fallback_guess() const;

 protected:
  std::optional<Vec3> act(double dt, double t_since_onset, const Sensor& sensor) override;

 private:
  std::optional<double> noisy_bearing(const Sensor& sensor, double t);
  void plan_parallel_sweep();
  bool try_triangulate();

  enum class Stage { Wait, FirstLook, TurnProbe, SecondLook, Sweep, Approach, Done };
  Stage stage_ = Stage::Wait;
  double first_bearing_ = 0.0;
  double first_yaw_ = 0.0;
  double probe_yaw_ = 0.0;
  std::vector<Vec2> waypoints_;
  std::optional<Vec2> estimate_;
  int sweeps_ = 0;
};

/// Front/back disambiguation from two bearings taken at yaws differing by a
/// known turn: picks the candidate pair that agrees best.
double resolve_front_back(double bearing_a, double yaw_a, double bearing_b, double yaw_b);

enum class AgentPolicy { Oracle, Search };

/// Search policy suited to the trial's playback system.
std::unique_ptr<Agent> make_agent(AgentPolicy policy, System system, const AgentParams& params);

}  // namespace wfslab
