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

#include "wfslab/session.hpp"

#include <array>
#include <cmath>
#include <fstream>
#include <map>
#include <ostream>
#include <sstream>
#include <tuple>

#include "wfslab/csv.hpp"
#include "wfslab/errors.hpp"

namespace wfslab {

namespace {

template <typename Enum, std::size_t N>
bool parse_name(std::string_view text, Enum& out, const std::array<std::pair<std::string_view, Enum>, N>& names) {
  for (const auto& [name, value] : names) {
    if (name == text) {
      out = value;
      return true;
    }
  }
  return false;
}

constexpr std::array<std::pair<std::string_view, Sound>, 3> kSoundNames{
    {{"telephone", Sound::Telephone}, {"piano", Sound::Piano}, {"birdsong", Sound::Birdsong}}};
constexpr std::array<std::pair<std::string_view, System>, 2> kSystemNames{
    {{"wfs", System::WFS}, {"stereo", System::Stereo}}};
constexpr std::array<std::pair<std::string_view, Environment>, 3> kEnvironmentNames{
    {{"blank", Environment::Blank}, {"indoors", Environment::Indoors},
     {"outdoors", Environment::Outdoors}}};
constexpr std::array<std::pair<std::string_view, Movement>, 2> kMovementNames{
    {{"static", Movement::Static}, {"dynamic", Movement::Dynamic}}};

template <typename Enum, std::size_t N>
std::string_view name_of(Enum value, const std::array<std::pair<std::string_view, Enum>, N>& names) {
  for (const auto& [name, v] : names) {
    if (v == value) return name;
  }
  return "?";
}

constexpr int kMaxPlacementTries = 1000;

Vec2 uniform_point(Rng& rng, const Rect& area) {
  const double x = rng.uniform(area.min.x(), area.max.x());
  const double y = rng.uniform(area.min.y(), area.max.y());
  return {x, y};
}

TrialSpec make_trial(Rng& rng, const ExperimentGeometry& geometry, System system,
                     Environment environment, Sound sound, Movement movement) {
  TrialSpec t;
  t.system = system;
  t.environment = environment;
  t.sound = sound;
  t.movement = movement;
  if (movement == Movement::Dynamic) {
    const Trajectory traj = random_trajectory(rng, geometry.walkable);
    t.source_start = lift(traj.start, geometry.height);
    t.trajectory = traj;
  } else {
    t.source_start = lift(uniform_point(rng, geometry.walkable), geometry.height);
  }
  return t;
}

void require(bool ok, const std::string& what) {
  if (!ok) throw InvalidArgument("invalid session plan: " + what);
}

}  // namespace

std::string_view to_string(Sound s) { return name_of(s, kSoundNames); }
std::string_view to_string(System s) { return name_of(s, kSystemNames); }
std::string_view to_string(Environment e) { return name_of(e, kEnvironmentNames); }
std::string_view to_string(Movement m) { return name_of(m, kMovementNames); }

bool parse(std::string_view text, Sound& out) { return parse_name(text, out, kSoundNames); }
bool parse(std::string_view text, System& out) { return parse_name(text, out, kSystemNames); }
bool parse(std::string_view text, Environment& out) { return parse_name(text, out, kEnvironmentNames); }
bool parse(std::string_view text, Movement& out) { return parse_name(text, out, kMovementNames); }

SoundAsset sound_asset(Sound id) {
  switch (id) {
    case Sound::Telephone: return {id, 6.12};
    case Sound::Piano: return {id, 6.861};
    case Sound::Birdsong: return {id, 2.0 * 60.0 + 39.362};
  }
  throw InvalidArgument("unknown sound");
}

Vec2 Trajectory::at(double t) const {
  const double u = std::clamp(t / duration, 0.0, 1.0);
  if (u >= 1.0) return end;
  return start + u * (end - start);
}

Trajectory random_trajectory(Rng& rng, const Rect& area) {
  // Starts near the middle of a 2 m room admit no 2 m segment, so the start is
  // redrawn along with the direction.
  for (int attempt = 0; attempt < kMaxPlacementTries; ++attempt) {
    const Vec2 start = uniform_point(rng, area);
    const double angle = rng.uniform(-kPi, kPi);
    const Vec2 end = start + kTrajectoryLength * Vec2(std::cos(angle), std::sin(angle));
    if (area.contains(end)) {
      const double duration = rng.uniform(kMinTrajectoryDuration, kMaxTrajectoryDuration);
      return {start, end, duration};
    }
  }
  throw PlacementError("no trajectory inside the area after " +
                       std::to_string(kMaxPlacementTries) + " draws");
}

Trajectory random_trajectory(Rng& rng, const Rect& area, const Vec2& start) {
  if (!area.contains(start)) throw PlacementError("trajectory start outside the area");
  for (int attempt = 0; attempt < kMaxPlacementTries; ++attempt) {
    const double angle = rng.uniform(-kPi, kPi);
    const Vec2 end = start + kTrajectoryLength * Vec2(std::cos(angle), std::sin(angle));
    if (area.contains(end)) {
      const double duration = rng.uniform(kMinTrajectoryDuration, kMaxTrajectoryDuration);
      return {start, end, duration};
    }
  }
  throw PlacementError("no trajectory end inside the area after " +
                       std::to_string(kMaxPlacementTries) + " draws");
}

Vec2 TrialSpec::target() const {
  return trajectory ? trajectory->end : horizontal(source_start);
}

Vec2 TrialSpec::source_at(double t_since_onset) const {
  return trajectory ? trajectory->at(t_since_onset) : horizontal(source_start);
}

SessionPlan generate_session(const std::string& participant_id, std::uint64_t seed,
                             System first_system, const ExperimentGeometry& geometry,
                             bool with_tutorial) {
  Rng rng(seed);
  SessionPlan plan;
  plan.participant_id = participant_id;
  plan.seed = seed;
  plan.first_system = first_system;

  int block = 0;
  for (System system : {first_system, other(first_system)}) {
    for (Environment env : kEnvironments) {
      std::vector<TrialSpec> trials;
      for (Sound sound : kSounds) {
        for (int rep = 0; rep < 2; ++rep) {
          trials.push_back(make_trial(rng, geometry, system, env, sound, Movement::Static));
        }
      }
      rng.shuffle(trials);
      ++block;
      for (auto& t : trials) {
        t.block = block;
        plan.trials.push_back(std::move(t));
      }
    }
    std::vector<TrialSpec> trials;
    for (Sound sound : kSounds) {
      for (int rep = 0; rep < 3; ++rep) {
        trials.push_back(
            make_trial(rng, geometry, system, Environment::Blank, sound, Movement::Dynamic));
      }
    }
    rng.shuffle(trials);
    ++block;
    for (auto& t : trials) {
      t.block = block;
      plan.trials.push_back(std::move(t));
    }
  }
  for (std::size_t i = 0; i < plan.trials.size(); ++i) {
    plan.trials[i].index = static_cast<int>(i) + 1;
  }

  if (with_tutorial) {
    // Drawn after the main design so enabling it leaves the analyzed trials unchanged.
    for (int i = 0; i < kTutorialTrials; ++i) {
      TrialSpec t = make_trial(rng, geometry, System::WFS, Environment::Blank,
                               kSounds[static_cast<std::size_t>(i) % 3], Movement::Static);
      t.index = i + 1;
      t.block = 0;
      t.tutorial = true;
      plan.tutorial.push_back(std::move(t));
    }
  }
  return plan;
}

void validate_plan(const SessionPlan& plan, const ExperimentGeometry& geometry) {
  require(plan.trials.size() == static_cast<std::size_t>(kTrialsPerSession),
          "expected " + std::to_string(kTrialsPerSession) + " trials, got " +
              std::to_string(plan.trials.size()));

  std::map<std::tuple<System, Environment, Sound>, int> static_counts;
  std::map<std::pair<System, Sound>, int> dynamic_counts;
  std::map<int, std::vector<const TrialSpec*>> blocks;

  for (std::size_t i = 0; i < plan.trials.size(); ++i) {
    const TrialSpec& t = plan.trials[i];
    const std::string where = "trial " + std::to_string(i + 1);
    require(t.index == static_cast<int>(i) + 1, where + ": index out of sequence");
    require(!t.tutorial, where + ": tutorial trial in the analyzed list");
    require(geometry.walkable.contains(horizontal(t.source_start)), where + ": source outside area");
    require(std::abs(t.source_start.z() - geometry.height) < 1e-9, where + ": source height");
    if (t.movement == Movement::Dynamic) {
      require(t.trajectory.has_value(), where + ": dynamic trial without trajectory");
      require(t.environment == Environment::Blank, where + ": dynamic trial outside blank room");
      const Trajectory& tr = *t.trajectory;
      require(std::abs((tr.end - tr.start).norm() - kTrajectoryLength) <= 1e-9,
              where + ": trajectory length");
      require(tr.duration >= kMinTrajectoryDuration && tr.duration <= kMaxTrajectoryDuration,
              where + ": trajectory duration");
      require((tr.start - horizontal(t.source_start)).norm() < 1e-12,
              where + ": trajectory does not start at the source");
      require(geometry.walkable.contains(tr.end), where + ": trajectory end outside area");
      ++dynamic_counts[{t.system, t.sound}];
    } else {
      require(!t.trajectory.has_value(), where + ": static trial with trajectory");
      ++static_counts[{t.system, t.environment, t.sound}];
    }
    blocks[t.block].push_back(&t);
  }

  for (System s : kSystems) {
    for (Sound snd : kSounds) {
      require(dynamic_counts[{s, snd}] == 3, "dynamic condition count");
      for (Environment e : kEnvironments) require(static_counts[{s, e, snd}] == 2, "static condition count");
    }
  }

  require(blocks.size() == 8, "expected 8 blocks");
  int expected_block = 0;
  for (const auto& [id, members] : blocks) {
    ++expected_block;
    require(id == expected_block, "block numbers must run 1..8 in order");
    const bool dynamic = id % 4 == 0;
    require(members.size() ==
                static_cast<std::size_t>(dynamic ? kDynamicBlockSize : kStaticBlockSize),
            "block " + std::to_string(id) + " size");
    const System half_system = id <= 4 ? plan.first_system : other(plan.first_system);
    for (const TrialSpec* t : members) {
      require(t->system == half_system, "block " + std::to_string(id) + " system");
      require((t->movement == Movement::Dynamic) == dynamic,
              "block " + std::to_string(id) + " movement");
      require(t->environment == members.front()->environment,
              "block " + std::to_string(id) + " mixes environments");
    }
  }
  // Blocks must be contiguous runs in trial order.
  for (std::size_t i = 1; i < plan.trials.size(); ++i) {
    require(plan.trials[i].block >= plan.trials[i - 1].block, "blocks are interleaved");
  }
}

// ---------------------------------------------------------------------------
// Session definition file

namespace {

constexpr std::string_view kSessionColumns =
    "sound,environment,system,movement,block,x,y,z,end_x,end_y,duration";

void write_trial_line(std::ostream& out, const TrialSpec& t) {
  std::vector<std::string> f{std::string(to_string(t.sound)),
                             std::string(to_string(t.environment)),
                             std::string(to_string(t.system)),
                             std::string(to_string(t.movement)),
                             csv::format(t.block),
                             csv::format(t.source_start.x()),
                             csv::format(t.source_start.y()),
                             csv::format(t.source_start.z())};
  if (t.trajectory) {
    f.push_back(csv::format(t.trajectory->end.x()));
    f.push_back(csv::format(t.trajectory->end.y()));
    f.push_back(csv::format(t.trajectory->duration));
  } else {
    f.insert(f.end(), 3, std::string());
  }
  out << csv::join(f) << '\n';
}

}  // namespace

void write_session_file(std::ostream& out, const SessionPlan& plan) {
  out << "# participant=" << plan.participant_id << '\n';
  out << "# seed=" << plan.seed << '\n';
  out << "# first_system=" << to_string(plan.first_system) << '\n';
  out << kSessionColumns << '\n';
  for (const auto& t : plan.tutorial) write_trial_line(out, t);
  for (const auto& t : plan.trials) write_trial_line(out, t);
}

void write_session_file(const std::filesystem::path& path, const SessionPlan& plan) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write " + path.string());
  write_session_file(out, plan);
  if (!out) throw Error("write failed for " + path.string());
}

SessionPlan read_session_file(std::istream& in, const std::string& origin) {
  SessionPlan plan;
  std::string line;
  std::size_t lineno = 0;
  bool header_seen = false;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (csv::trim(line).empty()) continue;
    if (line.front() == '#') {
      const auto body = csv::trim(std::string_view(line).substr(1));
      const auto eq = body.find('=');
      if (eq == std::string_view::npos) continue;
      const auto key = csv::trim(body.substr(0, eq));
      const auto value = csv::trim(body.substr(eq + 1));
      if (key == "participant") {
        plan.participant_id = std::string(value);
      } else if (key == "seed") {
        long long s = 0;
        if (!csv::parse(value, s) || s < 0) throw ParseError(origin, lineno, "bad seed");
        plan.seed = static_cast<std::uint64_t>(s);
      } else if (key == "first_system") {
        if (!parse(value, plan.first_system)) throw ParseError(origin, lineno, "bad first_system");
      }
      continue;
    }
    if (!header_seen) {
      if (line != kSessionColumns) throw ParseError(origin, lineno, "unexpected column header");
      header_seen = true;
      continue;
    }

    const auto f = csv::split(line);
    if (f.size() != 11) {
      throw ParseError(origin, lineno, "expected 11 fields, got " + std::to_string(f.size()));
    }
    TrialSpec t;
    if (!parse(f[0], t.sound)) throw ParseError(origin, lineno, "unknown sound '" + f[0] + "'");
    if (!parse(f[1], t.environment)) throw ParseError(origin, lineno, "unknown environment '" + f[1] + "'");
    if (!parse(f[2], t.system)) throw ParseError(origin, lineno, "unknown system '" + f[2] + "'");
    if (!parse(f[3], t.movement)) throw ParseError(origin, lineno, "unknown movement '" + f[3] + "'");
    double x = 0, y = 0, z = 0;
    if (!csv::parse(f[4], t.block) || t.block < 0) throw ParseError(origin, lineno, "bad block");
    if (!csv::parse(f[5], x) || !csv::parse(f[6], y) || !csv::parse(f[7], z)) {
      throw ParseError(origin, lineno, "bad source coordinates");
    }
    t.source_start = {x, y, z};
    if (t.movement == Movement::Dynamic) {
      Trajectory tr;
      tr.start = {x, y};
      if (!csv::parse(f[8], tr.end.x()) || !csv::parse(f[9], tr.end.y()) ||
          !csv::parse(f[10], tr.duration)) {
        throw ParseError(origin, lineno, "bad trajectory fields");
      }
      t.trajectory = tr;
    } else if (!f[8].empty() || !f[9].empty() || !f[10].empty()) {
      throw ParseError(origin, lineno, "static trial with trajectory fields");
    }
    t.tutorial = t.block == 0;
    auto& list = t.tutorial ? plan.tutorial : plan.trials;
    t.index = static_cast<int>(list.size()) + 1;
    list.push_back(std::move(t));
  }
  if (!header_seen) throw ParseError(origin, lineno, "missing column header");
  return plan;
}

SessionPlan read_session_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open " + path.string());
  return read_session_file(in, path.string());
}

// ---------------------------------------------------------------------------

Quat yaw_quaternion(double yaw) { return Quat(Eigen::AngleAxisd(yaw, Eigen::Vector3d::UnitZ())); }

HandSample invalid_hand() { return {Vec3::Zero(), Quat::Identity(), false}; }

bool is_sentinel(const HandSample& hand) {
  return hand.position == Vec3::Zero() && hand.rotation.w() == 1.0 && hand.rotation.x() == 0.0 &&
         hand.rotation.y() == 0.0 && hand.rotation.z() == 0.0;
}

}  // namespace wfslab
