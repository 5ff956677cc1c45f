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

#include "wfslab/agent.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "wfslab/errors.hpp"

namespace wfslab {

namespace {

// Sources stop moving within this time after onset.
constexpr double kMotionSettleTime = kMaxTrajectoryDuration;

double smoothstep(double u) {
  u = std::clamp(u, 0.0, 1.0);
  return u * u * (3.0 - 2.0 * u);
}

// Distance along a ray from inside `r` to its boundary.
double exit_distance(const Rect& r, const Vec2& origin, const Vec2& dir) {
  double t = std::numeric_limits<double>::infinity();
  for (int axis = 0; axis < 2; ++axis) {
    if (dir[axis] > 1e-12) t = std::min(t, (r.max[axis] - origin[axis]) / dir[axis]);
    if (dir[axis] < -1e-12) t = std::min(t, (r.min[axis] - origin[axis]) / dir[axis]);
  }
  return std::max(t, 0.0);
}

}  // namespace

Vec3 rest_hand_position(const ListenerState& listener, bool right) {
  const Vec2 side = listener.right() * (right ? 0.2 : -0.2);
  const Vec2 front = listener.facing() * 0.25;
  const Vec3& h = listener.head_position;
  return {h.x() + side.x() + front.x(), h.y() + side.y() + front.y(), h.z() - 0.4};
}

Vec3 Reach::hand_at(double u) const {
  if (u >= 1.0) return guess;
  return hand_start + smoothstep(u) * (guess - hand_start);
}

Vec3 Reach::head_at(double u) const {
  Vec2 away = horizontal(head_start) - horizontal(guess);
  if (away.norm() < 1e-9) return head_start;
  away.normalize();
  const Vec2 shift = away * (lean_back * smoothstep(u));
  return head_start + Vec3(shift.x(), shift.y(), 0.0);
}

std::vector<Vec3> hand_trajectory(
    const std::vector<ListenerState>& heads,
    const std::vector<std::optional<std::pair<Reach, double>>>& reaches) {
  if (heads.size() != reaches.size()) throw InvalidArgument("stream lengths differ");
  std::vector<Vec3> out;
  out.reserve(heads.size());
  for (std::size_t i = 0; i < heads.size(); ++i) {
    out.push_back(reaches[i] ? reaches[i]->first.hand_at(reaches[i]->second)
                             : rest_hand_position(heads[i], true));
  }
  return out;
}

double resolve_front_back(double bearing_a, double yaw_a, double bearing_b, double yaw_b) {
  const auto mirror = [](double bearing, double yaw) {
    return wrap_angle(2.0 * yaw + kPi - bearing);
  };
  const double a[2] = {bearing_a, mirror(bearing_a, yaw_a)};
  const double b[2] = {bearing_b, mirror(bearing_b, yaw_b)};
  double best = std::numeric_limits<double>::infinity();
  double chosen = bearing_b;
  for (double ca : a) {
    for (double cb : b) {
      const double d = angle_between(ca, cb);
      if (d < best - 1e-12) {
        best = d;
        chosen = wrap_angle(ca + 0.5 * wrap_angle(cb - ca));
      }
    }
  }
  return chosen;
}

// ---------------------------------------------------------------------------

Agent::Agent(const AgentParams& params) : params_(params), rng_(params.seed) {
  if (!(params.walk_speed > 0.0)) throw InvalidArgument("walk speed must be positive");
  for (double v : {params.probe_step, params.cue_noise_itd, params.cue_noise_level,
                   params.commit_threshold, params.max_search_time, params.hand_dropout}) {
    if (v < 0.0) throw InvalidArgument("agent parameters must be non-negative");
  }
  state_.listener.head_position = {0.0, 0.0, 1.6};
  state_.right_hand = rest_hand_position(state_.listener, true);
  state_.left_hand = rest_hand_position(state_.listener, false);
}

void Agent::begin_trial(const TrialContext& context) {
  context_ = context;
  state_.phase = Phase::Orient;
  state_.belief = {};
  state_.belief.origin = head2();
  state_.observation_log.clear();
  state_.listener.head_position.z() = context.height;
  commit_target_.reset();
  reach_.reset();
  reach_progress_ = 0.0;
  idle(0.0);
}

std::optional<Vec3> Agent::step(double dt, double t_since_onset, const Sensor& sensor) {
  if (!(dt > 0.0)) throw InvalidArgument("time step must be positive");
  auto guess = act(dt, t_since_onset, sensor);
  if (!reach_) {
    state_.right_hand = rest_hand_position(state_.listener, true);
  }
  state_.left_hand = rest_hand_position(state_.listener, false);
  clamp_hands();
  return guess;
}

// Hands stay inside the room as well.
void Agent::clamp_hands() {
  for (Vec3* hand : {&state_.right_hand, &state_.left_hand}) {
    *hand = lift(context_.walkable.clamp(horizontal(*hand)), hand->z());
  }
}

Vec3 Agent::forced_guess() const {
  if (commit_target_) return lift(*commit_target_, context_.height);
  if (auto p = state_.belief.point()) return lift(clamp_guess(*p), context_.height);
  return lift(clamp_guess(head2()), context_.height);
}

void Agent::idle(double) {
  reach_.reset();
  state_.right_hand = rest_hand_position(state_.listener, true);
  state_.left_hand = rest_hand_position(state_.listener, false);
  clamp_hands();
}

void Agent::place(const Vec3& head, double yaw) {
  state_.listener.head_position = head;
  state_.listener.yaw = wrap_angle(yaw);
  idle(0.0);
}

bool Agent::walk_toward(const Vec2& target, double dt) {
  const Vec2 goal = context_.walkable.clamp(target);
  const Vec2 here = head2();
  const Vec2 delta = goal - here;
  const double dist = delta.norm();
  const double stride = params_.walk_speed * dt;
  Vec2 next = dist <= stride ? goal : Vec2(here + delta * (stride / dist));
  next = context_.walkable.clamp(next);
  state_.listener.head_position.x() = next.x();
  state_.listener.head_position.y() = next.y();
  return dist <= stride;
}

bool Agent::turn_toward(double heading, double dt) {
  const double diff = wrap_angle(heading - state_.listener.yaw);
  const double max_turn = params_.turn_speed * dt;
  if (std::abs(diff) <= max_turn) {
    state_.listener.yaw = wrap_angle(heading);
    return true;
  }
  state_.listener.yaw = wrap_angle(state_.listener.yaw + std::copysign(max_turn, diff));
  return false;
}

Vec2 Agent::clamp_guess(const Vec2& p) const { return context_.guess_area.clamp(p); }

void Agent::begin_commit(const Vec2& guess) {
  state_.phase = Phase::Commit;
  commit_target_ = clamp_guess(guess);
  state_.belief.origin = head2();
  const Vec2 rel = *commit_target_ - head2();
  state_.belief.distance = rel.norm();
  if (rel.norm() > 0.0) state_.belief.bearing = heading_of(rel);
}

std::optional<Vec3> Agent::advance_commit(double dt) {
  if (!commit_target_) return std::nullopt;
  const Vec2 target = *commit_target_;
  const Vec3 guess = lift(target, context_.height);

  if (!reach_) {
    const Vec2 rel = target - head2();
    const double dist = rel.norm();
    if (dist > 1e-9) turn_toward(heading_of(rel), dt);
    if (dist > params_.arm_reach) {
      walk_toward(target - rel / dist * (0.9 * params_.arm_reach), dt);
      return std::nullopt;
    }
    reach_ = Reach{state_.right_hand, state_.listener.head_position, guess, params_.lean_back};
    reach_progress_ = 0.0;
  }

  reach_progress_ += params_.reach_duration > 0.0 ? dt / params_.reach_duration : 1.0;
  const double u = std::min(reach_progress_, 1.0);
  const Vec3 head = reach_->head_at(u);
  const Vec2 head_xy = context_.walkable.clamp(horizontal(head));
  state_.listener.head_position = lift(head_xy, head.z());
  state_.right_hand = reach_->hand_at(u);
  if (reach_progress_ >= 1.0) {
    state_.right_hand = guess;
    return guess;
  }
  return std::nullopt;
}

// ---------------------------------------------------------------------------

std::optional<Vec3> OracleAgent::act(double, double, const Sensor&) {
  const Vec3 guess = lift(context_.true_target, context_.height);
  state_.phase = Phase::Commit;
  state_.right_hand = guess;
  return guess;
}

// ---------------------------------------------------------------------------

StereoSearchAgent::StereoSearchAgent(const AgentParams& params) : Agent(params) {}

void StereoSearchAgent::begin_trial(const TrialContext& context) {
  Agent::begin_trial(context);
  noise_scale_ = std::pow(params_.learning_decay, context.trial_number);
  waypoints_.clear();
  probe_levels_.clear();
  probe_points_.clear();
  last_peak_.reset();
  best_ = head2();
  best_level_ = -std::numeric_limits<double>::infinity();
  probe_ = params_.probe_step;
  stride_ = 2.0 * params_.probe_step;
  measured_start_ = false;
  dwell_sum_ = 0.0;
  dwell_count_ = 0;
}

Vec3 StereoSearchAgent::forced_guess() const {
  if (std::isfinite(best_level_)) return lift(clamp_guess(best_), context_.height);
  return Agent::forced_guess();
}

std::optional<double> StereoSearchAgent::measure(const Sensor& sensor, double t) {
  const auto percept = sensor.sense(state_.listener, t);
  if (!percept) return std::nullopt;
  dwell_sum_ += percept->level_db + rng_.normal(0.0, params_.cue_noise_level * noise_scale_);
  if (++dwell_count_ < kDwellSamples) return std::nullopt;
  const double level = dwell_sum_ / dwell_count_;
  dwell_sum_ = 0.0;
  dwell_count_ = 0;
  if (level > best_level_) {
    best_level_ = level;
    best_ = head2();
  }
  return level;
}

void StereoSearchAgent::plan_probes() {
  // Probe signs are random, so the first probe often leads away from the source.
  const double sx = rng_.bernoulli(0.5) ? 1.0 : -1.0;
  const double sy = rng_.bernoulli(0.5) ? 1.0 : -1.0;
  probe_points_ = {base_ + Vec2(sx * probe_, 0.0), base_ + Vec2(0.0, sy * probe_)};
  for (auto& p : probe_points_) {
    // Flip probes that would leave the room.
    if (!context_.walkable.contains(p)) p = base_ - (p - base_);
  }
  waypoints_ = probe_points_;
  probe_levels_.clear();
  state_.phase = Phase::Explore;
}

void StereoSearchAgent::start_line_search() {
  Vec2 g = Vec2::Zero();
  for (std::size_t k = 0; k < probe_points_.size(); ++k) {
    const Vec2 step = probe_points_[k] - base_;
    const double len = step.norm();
    if (len > 0.0) g += step / len * ((probe_levels_[k] - base_level_) / len);
  }
  if (g.norm() < 1e-12) {
    const double a = rng_.uniform(-kPi, kPi);
    g = heading_vector(a);
  }
  line_dir_ = g.normalized();
  line_last_ = base_;
  line_last_level_ = base_level_;
  waypoints_ = {base_ + line_dir_ * stride_};
  state_.phase = Phase::Refine;
}

void StereoSearchAgent::record_peak(const Vec2& peak, double level, bool moved) {
  state_.belief.origin = peak;
  state_.belief.distance = 0.0;
  state_.belief.confidence = last_peak_ ? 1.0 / (1.0 + (peak - *last_peak_).norm()) : 0.0;
  if (last_peak_ && (peak - *last_peak_).norm() < params_.commit_threshold) {
    begin_commit(peak);
    return;
  }
  last_peak_ = peak;
  base_ = peak;
  base_level_ = level;
  // Only a successful line search narrows the search; a failed one retries at the same scale.
  if (moved) {
    probe_ = std::max(0.5 * probe_, 0.05);
    stride_ = std::max(0.5 * stride_, 0.1);
  }
  plan_probes();
}

std::optional<Vec3> StereoSearchAgent::act(double dt, double t, const Sensor& sensor) {
  if (state_.phase == Phase::Commit) return advance_commit(dt);

  const bool audible = sensor.sense(state_.listener, t).has_value();
  if (!audible || t > params_.max_search_time) {
    begin_commit(horizontal(forced_guess()));
    return advance_commit(dt);
  }
  // A moving source is only searched for once it has come to rest.
  const double wait = context_.movement == Movement::Dynamic
                          ? std::max(params_.reaction_time, kMotionSettleTime)
                          : params_.reaction_time;
  if (t < wait) return std::nullopt;

  if (!measured_start_) {
    const auto level = measure(sensor, t);
    if (!level) return std::nullopt;
    base_ = head2();
    base_level_ = *level;
    measured_start_ = true;
    plan_probes();
    return std::nullopt;
  }

  if (waypoints_.empty()) return std::nullopt;
  const Vec2 target = waypoints_.front();
  const Vec2 rel = target - head2();
  if (rel.norm() > 1e-9) turn_toward(heading_of(rel), dt);
  if (!walk_toward(target, dt)) return std::nullopt;

  const auto measured = measure(sensor, t);
  if (!measured) return std::nullopt;
  const double level = *measured;
  if (state_.phase == Phase::Explore) {
    probe_levels_.push_back(level);
    waypoints_.erase(waypoints_.begin());
    if (waypoints_.empty()) start_line_search();
    return std::nullopt;
  }

  // Line search along the gradient estimate.
  const Vec2 here = head2();
  if (level > line_last_level_) {
    line_last_ = here;
    line_last_level_ = level;
    const Vec2 next = context_.walkable.clamp(here + line_dir_ * stride_);
    if ((next - here).norm() < 1e-3) {
      record_peak(here, level, true);
    } else {
      waypoints_ = {next};
    }
  } else {
    waypoints_.clear();
    record_peak(line_last_, line_last_level_, (line_last_ - base_).norm() > 1e-9);
  }
  return state_.phase == Phase::Commit ? advance_commit(dt) : std::nullopt;
}

// ---------------------------------------------------------------------------

WfsSearchAgent::WfsSearchAgent(const AgentParams& params) : Agent(params) {}

void WfsSearchAgent::begin_trial(const TrialContext& context) {
  Agent::begin_trial(context);
  stage_ = Stage::Wait;
  waypoints_.clear();
  estimate_.reset();
  sweeps_ = 0;
}

Vec3 WfsSearchAgent::forced_guess() const {
  if (estimate_) return lift(clamp_guess(*estimate_), context_.height);
  if (!state_.observation_log.empty()) return lift(fallback_guess(), context_.height);
  return Agent::forced_guess();
}

Vec2 WfsSearchAgent::fallback_guess() const {
  const Vec2 origin = clamp_guess(head2());
  const Vec2 dir = heading_vector(state_.belief.bearing);
  const double reach = exit_distance(context_.guess_area, origin, dir);
  return clamp_guess(origin + dir * (0.5 * reach));
}

std::optional<double> WfsSearchAgent::noisy_bearing(const Sensor& sensor, double t) {
  auto percept = sensor.sense(state_.listener, t);
  if (!percept) return std::nullopt;
  BinauralCue cue = percept->cue;
  cue.itd += rng_.normal(0.0, params_.cue_noise_itd);
  return bearing_from_itd(cue, state_.listener).bearing;
}

void WfsSearchAgent::plan_parallel_sweep() {
  // The side of the room the bearing ray runs into.
  const Vec2 here = head2();
  const Vec2 dir = heading_vector(state_.belief.bearing);
  const Rect& room = context_.walkable;
  const Vec2 hit = here + dir * exit_distance(room, here, dir);
  const double dx = std::min(std::abs(hit.x() - room.min.x()), std::abs(hit.x() - room.max.x()));
  const double dy = std::min(std::abs(hit.y() - room.min.y()), std::abs(hit.y() - room.max.y()));
  Vec2 tangent = dx < dy ? Vec2(0.0, 1.0) : Vec2(1.0, 0.0);

  // Sweep toward the side with more room.
  const double step = 1.5 * params_.probe_step;
  const int stops = sweeps_ == 0 ? 3 : 2;
  const double room_plus = exit_distance(room, here, tangent);
  const double room_minus = exit_distance(room, here, -tangent);
  if (room_minus > room_plus) tangent = -tangent;
  waypoints_.clear();
  for (int k = 1; k <= stops; ++k) waypoints_.push_back(room.clamp(here + tangent * (k * step)));
  ++sweeps_;
}

bool WfsSearchAgent::try_triangulate() {
  const auto& obs = state_.observation_log;
  if (obs.size() < 2) return false;
  LocalizationEstimate est;
  try {
    est = parallax_triangulate(obs, 0.1);
  } catch (const DegenerateParallax&) {
    return false;
  }
  const Vec2 p = *est.point();
  // Bearing lines that meet behind the listener carry no depth information.
  for (const auto& o : obs) {
    if ((p - horizontal(o.position)).dot(heading_vector(o.bearing)) <= 0.0) return false;
  }
  estimate_ = clamp_guess(p);
  state_.belief = est;
  return true;
}

std::optional<Vec3> WfsSearchAgent::act(double dt, double t, const Sensor& sensor) {
  if (state_.phase == Phase::Commit) return advance_commit(dt);

  const bool audible = sensor.sense(state_.listener, t).has_value();
  if (!audible || t > params_.max_search_time) {
    if (!estimate_ && !try_triangulate() && state_.observation_log.empty()) {
      begin_commit(head2());
    } else {
      begin_commit(estimate_ ? *estimate_ : fallback_guess());
    }
    return advance_commit(dt);
  }

  switch (stage_) {
    case Stage::Wait: {
      const double wait = context_.movement == Movement::Dynamic
                              ? std::max(params_.reaction_time, kMotionSettleTime)
                              : params_.reaction_time;
      if (t >= wait) stage_ = Stage::FirstLook;
      return std::nullopt;
    }

    case Stage::FirstLook: {
      first_bearing_ = *noisy_bearing(sensor, t);
      first_yaw_ = state_.listener.yaw;
      probe_yaw_ = wrap_angle(first_yaw_ + deg_to_rad(30.0));
      stage_ = Stage::TurnProbe;
      return std::nullopt;
    }

    case Stage::TurnProbe:
      if (turn_toward(probe_yaw_, dt)) stage_ = Stage::SecondLook;
      return std::nullopt;

    case Stage::SecondLook: {
      const double b = *noisy_bearing(sensor, t);
      const double resolved = resolve_front_back(first_bearing_, first_yaw_, b, state_.listener.yaw);
      state_.belief.bearing = resolved;
      state_.belief.origin = head2();
      state_.observation_log.push_back({state_.listener.head_position, resolved});
      plan_parallel_sweep();
      state_.phase = Phase::Explore;
      stage_ = Stage::Sweep;
      return std::nullopt;
    }

    case Stage::Sweep: {
      const bool facing = turn_toward(state_.belief.bearing, dt);
      if (!walk_toward(waypoints_.front(), dt) || !facing) return std::nullopt;
      const double b = *noisy_bearing(sensor, t);
      state_.belief.bearing = b;
      state_.belief.origin = head2();
      state_.observation_log.push_back({state_.listener.head_position, b});
      waypoints_.erase(waypoints_.begin());
      if (!waypoints_.empty()) return std::nullopt;

      if (!try_triangulate()) {
        begin_commit(estimate_ ? *estimate_ : fallback_guess());
        return advance_commit(dt);
      }
      if (sweeps_ >= 2) {
        begin_commit(*estimate_);
        return advance_commit(dt);
      }
      state_.phase = Phase::Refine;
      stage_ = Stage::Approach;
      return std::nullopt;
    }

    case Stage::Approach: {
      const Vec2 rel = *estimate_ - head2();
      if (rel.norm() > 1e-9) turn_toward(heading_of(rel), dt);
      const double stop = 0.6;
      const bool arrived =
          rel.norm() <= stop || walk_toward(*estimate_ - rel.normalized() * stop, dt);
      if (!arrived) return std::nullopt;
      state_.belief.bearing = heading_of(*estimate_ - head2());
      plan_parallel_sweep();
      stage_ = Stage::Sweep;
      return std::nullopt;
    }

    case Stage::Done:
      break;
  }
  return std::nullopt;
}

std::unique_ptr<Agent> make_agent(AgentPolicy policy, System system, const AgentParams& params) {
  if (policy == AgentPolicy::Oracle) return std::make_unique<OracleAgent>(params);
  if (system == System::Stereo) return std::make_unique<StereoSearchAgent>(params);
  return std::make_unique<WfsSearchAgent>(params);
}

}  // namespace wfslab
