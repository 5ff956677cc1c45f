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

#include "wfslab/experiment.hpp"

#include <cmath>

#include "wfslab/errors.hpp"
#include "wfslab/logging.hpp"

namespace wfslab {

namespace {

constexpr double kLevelFloorDb = -120.0;

double level_db(double amplitude) {
  return amplitude > 0.0 ? std::max(20.0 * std::log10(amplitude), kLevelFloorDb) : kLevelFloorDb;
}

HandSample tracked_hand(const Vec3& position, double yaw, bool dropped) {
  if (dropped) return invalid_hand();
  return {position, yaw_quaternion(yaw), true};
}

}  // namespace

TrialSensor::TrialSensor(const TrialSpec& spec, const RenderModels& models,
                         const RigidTransform2D& misalignment)
    : spec_(spec),
      models_(models),
      perceived_(spec.system == System::WFS ? misalignment : RigidTransform2D{}) {}

Vec3 TrialSensor::rendered_source(double t_since_onset) const {
  return lift(perceived_.apply(spec_.source_at(t_since_onset)), spec_.source_start.z());
}

std::optional<Percept> TrialSensor::sense(const ListenerState& listener,
                                          double t_since_onset) const {
  if (t_since_onset < 0.0 || t_since_onset > spec_.sound_duration()) return std::nullopt;
  const Vec3 source = rendered_source(t_since_onset);

  try {
    if (spec_.system == System::Stereo) {
      Percept p;
      p.cue = binaural_cues_stereo(source, listener, models_.rolloff, models_.cues.speed_of_sound);
      const double d = (source - listener.head_position).norm();
      p.level_db = level_db(stereo_gain(d, models_.rolloff));
      return p;
    }

    const VirtualSource vs = classify_source(source, models_.array);
    DrivingSet driving;
    try {
      driving = driving_functions(vs, models_.array, listener.head_position, models_.wfs_mode,
                                  models_.driving);
    } catch (const NoValidZone&) {
      // The listener stands where no side can focus the source; play it unadapted.
      driving = driving_functions(vs, models_.array, listener.head_position, RenderMode::Static,
                                  models_.driving);
    }
    Percept p;
    p.cue = binaural_cues_wfs(driving, models_.array, listener, models_.cues);
    const auto field = synthesize_pressure(driving, models_.array, listener.head_position,
                                           models_.cues.analysis_frequency,
                                           models_.cues.speed_of_sound);
    p.level_db = level_db(std::abs(field));
    return p;
  } catch (const SingularityError&) {
    return std::nullopt;
  }
}

TrialOutcome run_trial(const TrialSpec& spec, Agent& agent, const RenderModels& models,
                       const RigidTransform2D& misalignment, const TrialTiming& timing,
                       const TrialContext& context, Rng& rng, std::int64_t& start_tick) {
  if (timing.onset_delay < 0.0 || timing.guess_timeout < 0.0 || timing.feedback < 0.0) {
    throw InvalidArgument("trial timing must be non-negative");
  }
  const TrialSensor sensor(spec, models, misalignment);
  const double dropout = agent.params().hand_dropout;
  const double dt = kTrackingStep;
  const auto onset_ticks = static_cast<std::int64_t>(std::llround(timing.onset_delay * kTrackingRate));
  const auto feedback_ticks = static_cast<std::int64_t>(std::llround(timing.feedback * kTrackingRate));
  const double deadline = spec.sound_duration() + timing.guess_timeout;

  TrialOutcome out;
  TrialResult& r = out.result;
  r.spec_index = spec.index;
  r.target = spec.target();
  r.rendered_start = horizontal(sensor.rendered_source(0.0));
  r.rendered_end = horizontal(sensor.rendered_source(spec.sound_duration()));
  r.onset_time = static_cast<double>(start_tick + onset_ticks) * dt;

  agent.begin_trial(context);

  auto record = [&](std::int64_t tick) {
    const AgentState& s = agent.state();
    TrackingSample sample;
    sample.t = static_cast<double>(tick) * dt;
    Vec3 head = s.listener.head_position;
    const Vec2 inside = context.walkable.clamp(horizontal(head));
    if (inside != horizontal(head)) {
      ++r.clamp_events;
      head = lift(inside, head.z());
    }
    sample.hmd_position = head;
    sample.hmd_rotation = yaw_quaternion(s.listener.yaw);
    sample.left_hand = tracked_hand(s.left_hand, s.listener.yaw, rng.bernoulli(dropout));
    sample.right_hand = tracked_hand(s.right_hand, s.listener.yaw, rng.bernoulli(dropout));
    out.samples.push_back(sample);
  };

  std::int64_t tick = start_tick;
  // Idle: the participant waits for the sound.
  for (std::int64_t k = 0; k < onset_ticks; ++k) {
    agent.idle(dt);
    record(tick++);
  }

  // Playing, then awaiting a guess once the sound has ended. The sound is never repeated.
  std::optional<Vec3> guess;
  for (std::int64_t k = 0;; ++k) {
    const double t = static_cast<double>(k) * dt;
    if (t > deadline) {
      guess = agent.forced_guess();
      r.guess_time = t;
      r.timed_out = true;
      record(tick++);
      break;
    }
    guess = agent.step(dt, t, sensor);
    record(tick++);
    if (guess) {
      r.guess_time = t;
      break;
    }
  }

  const Vec2 g = context.guess_area.clamp(horizontal(*guess));
  if (g != horizontal(*guess)) ++r.clamp_events;
  r.guess = lift(g, guess->z());
  r.score = score_of(r.guess, r.target);

  // Feedback: the participant sees the true position, then the next round starts.
  for (std::int64_t k = 0; k < feedback_ticks; ++k) {
    agent.idle(dt);
    record(tick++);
  }
  start_tick = tick;
  return out;
}

SessionRun run_session(const SessionPlan& plan, const SessionConfig& config) {
  SessionRun run;
  run.plan = plan;
  run.misalignment = sample_misalignment(config.misalignment, plan.seed ^ 0xCA11B8A7EULL,
                                         horizontal(config.models.array.center));

  AgentParams wfs_params = config.agent;
  wfs_params.seed = plan.seed * 2 + 1;
  AgentParams stereo_params = config.agent;
  stereo_params.seed = plan.seed * 2 + 2;
  auto wfs_agent = make_agent(config.policy, System::WFS, wfs_params);
  auto stereo_agent = make_agent(config.policy, System::Stereo, stereo_params);

  // The body starts in the middle of the room facing +y.
  Vec3 head = lift(config.geometry.walkable.center(), config.geometry.height);
  double yaw = 0.0;

  Rng rng(plan.seed ^ 0x5E5510ULL);
  std::int64_t tick = 0;
  int analyzed = 0;

  auto run_list = [&](const std::vector<TrialSpec>& trials, std::vector<TrialResult>& results,
                      std::vector<std::vector<TrackingSample>>& tracking, bool count) {
    for (const TrialSpec& spec : trials) {
      Agent& agent = spec.system == System::WFS ? *wfs_agent : *stereo_agent;
      agent.place(head, yaw);
      TrialContext ctx;
      ctx.movement = spec.movement;
      ctx.system = spec.system;
      ctx.walkable = config.geometry.walkable;
      ctx.guess_area = config.geometry.walkable;
      ctx.height = config.geometry.height;
      ctx.trial_number = analyzed;
      ctx.true_target = spec.target();
      Rng trial_rng = rng.fork(static_cast<std::uint64_t>(spec.index) + (count ? 0 : 1000));
      TrialOutcome outcome = run_trial(spec, agent, config.models, run.misalignment,
                                       config.timing, ctx, trial_rng, tick);
      head = agent.state().listener.head_position;
      yaw = agent.state().listener.yaw;
      results.push_back(outcome.result);
      tracking.push_back(std::move(outcome.samples));
      if (count) ++analyzed;
    }
  };

  run_list(plan.tutorial, run.tutorial_results, run.tutorial_tracking, false);
  run_list(plan.trials, run.results, run.tracking, true);
  return run;
}

void write_session_run(const SessionRun& run, const Demographics& dems,
                       const std::filesystem::path& dir) {
  write_session_log(run.plan, run.results, dir);
  for (std::size_t i = 0; i < run.tracking.size(); ++i) {
    write_tracking(run.plan.trials[i].index, run.tracking[i], dir);
  }
  if (!run.plan.tutorial.empty()) {
    std::vector<SessionLogRow> rows;
    for (std::size_t i = 0; i < run.tutorial_results.size(); ++i) {
      rows.push_back(make_log_row(run.plan.participant_id, run.plan.tutorial[i],
                                  run.tutorial_results[i]));
      write_tracking(run.plan.tutorial[i].index, run.tutorial_tracking[i], dir,
                     "tutorial_pos_round_");
    }
    write_session_log(rows, dir / "tutorial_session.csv");
  }
  write_demographics(dems, dir);
}

std::vector<SessionPlan> cohort_plans(const CohortConfig& config) {
  if (config.participants < 1) throw InvalidArgument("need at least one participant");
  const int wfs_first = config.wfs_first < 0
                            ? static_cast<int>(std::lround(2.0 * config.participants / 3.0))
                            : config.wfs_first;
  if (wfs_first > config.participants) {
    throw InvalidArgument("more WFS-first participants than participants");
  }
  std::vector<SessionPlan> plans;
  for (int i = 0; i < config.participants; ++i) {
    const std::string id = "P" + std::to_string(i + 1);
    const System first = i < wfs_first ? System::WFS : System::Stereo;
    plans.push_back(generate_session(id, config.base_seed + static_cast<std::uint64_t>(i), first,
                                     config.session.geometry, config.tutorial));
  }
  return plans;
}

std::vector<std::filesystem::path> run_cohort(const CohortConfig& config) {
  std::vector<std::filesystem::path> dirs;
  for (const SessionPlan& plan : cohort_plans(config)) {
    const SessionRun run = run_session(plan, config.session);
    const auto dir = session_log_dir(config.out_dir, plan);
    Demographics dems = config.demographics;
    dems.participant_id = plan.participant_id;
    write_session_run(run, dems, dir);
    dirs.push_back(dir);
  }
  return dirs;
}

}  // namespace wfslab
