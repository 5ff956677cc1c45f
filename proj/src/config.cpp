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

#include "wfslab/config.hpp"

#include <fstream>
#include <functional>
#include <map>
#include <sstream>

#include "wfslab/csv.hpp"
#include "wfslab/errors.hpp"

namespace wfslab {

namespace {

// Array geometry is kept apart and turned into a SpeakerArray once all keys are read.
struct ArraySettings {
  double side_length = 2.0;
  int speakers_per_side = 16;
  double height = 1.6;
  double center_x = 0.0;
  double center_y = 0.0;
};

struct Draft {
  CohortConfig cohort;
  ArraySettings array;
  double sigma_rotation_deg = 1.0;
  double half_aperture_deg = 60.0;
};

using Setter = std::function<bool(Draft&, std::string_view)>;

// Numeric keys; csv::parse picks the overload from the field type.
template <typename Get>
Setter number_key(Get get) {
  return [get](Draft& d, std::string_view v) { return csv::parse(v, get(d)); };
}

template <typename Get>
Setter bool_key(Get get) {
  return [get](Draft& d, std::string_view v) {
    if (v == "true" || v == "1") {
      get(d) = true;
    } else if (v == "false" || v == "0") {
      get(d) = false;
    } else {
      return false;
    }
    return true;
  };
}

const std::map<std::string, Setter, std::less<>>& setters() {
  static const std::map<std::string, Setter, std::less<>> table = {
      {"cohort.participants", number_key([](Draft& d) -> int& { return d.cohort.participants; })},
      {"cohort.seed",
       [](Draft& d, std::string_view v) {
         long long s = 0;
         if (!csv::parse(v, s) || s < 0) return false;
         d.cohort.base_seed = static_cast<std::uint64_t>(s);
         return true;
       }},
      {"cohort.wfs_first", number_key([](Draft& d) -> int& { return d.cohort.wfs_first; })},
      {"cohort.tutorial", bool_key([](Draft& d) -> bool& { return d.cohort.tutorial; })},
      {"cohort.out",
       [](Draft& d, std::string_view v) {
         if (v.empty()) return false;
         d.cohort.out_dir = std::string(v);
         return true;
       }},

      {"agent.policy",
       [](Draft& d, std::string_view v) {
         if (v == "search") {
           d.cohort.session.policy = AgentPolicy::Search;
         } else if (v == "oracle") {
           d.cohort.session.policy = AgentPolicy::Oracle;
         } else {
           return false;
         }
         return true;
       }},
      {"agent.walk_speed", number_key([](Draft& d) -> double& { return d.cohort.session.agent.walk_speed; })},
      {"agent.turn_speed", number_key([](Draft& d) -> double& { return d.cohort.session.agent.turn_speed; })},
      {"agent.probe_step", number_key([](Draft& d) -> double& { return d.cohort.session.agent.probe_step; })},
      {"agent.cue_noise_itd", number_key([](Draft& d) -> double& { return d.cohort.session.agent.cue_noise_itd; })},
      {"agent.cue_noise_level", number_key([](Draft& d) -> double& { return d.cohort.session.agent.cue_noise_level; })},
      {"agent.commit_threshold", number_key([](Draft& d) -> double& { return d.cohort.session.agent.commit_threshold; })},
      {"agent.max_search_time", number_key([](Draft& d) -> double& { return d.cohort.session.agent.max_search_time; })},
      {"agent.reaction_time", number_key([](Draft& d) -> double& { return d.cohort.session.agent.reaction_time; })},
      {"agent.reach_duration", number_key([](Draft& d) -> double& { return d.cohort.session.agent.reach_duration; })},
      {"agent.arm_reach", number_key([](Draft& d) -> double& { return d.cohort.session.agent.arm_reach; })},
      {"agent.lean_back", number_key([](Draft& d) -> double& { return d.cohort.session.agent.lean_back; })},
      {"agent.hand_dropout", number_key([](Draft& d) -> double& { return d.cohort.session.agent.hand_dropout; })},
      {"agent.learning_decay", number_key([](Draft& d) -> double& { return d.cohort.session.agent.learning_decay; })},

      {"misalignment.sigma_translation",
       number_key([](Draft& d) -> double& { return d.cohort.session.misalignment.sigma_translation; })},
      {"misalignment.sigma_rotation_deg", number_key([](Draft& d) -> double& { return d.sigma_rotation_deg; })},

      {"rolloff.min_distance", number_key([](Draft& d) -> double& { return d.cohort.session.models.rolloff.min_distance; })},
      {"rolloff.max_distance", number_key([](Draft& d) -> double& { return d.cohort.session.models.rolloff.max_distance; })},

      {"array.side_length", number_key([](Draft& d) -> double& { return d.array.side_length; })},
      {"array.speakers_per_side", number_key([](Draft& d) -> int& { return d.array.speakers_per_side; })},
      {"array.height", number_key([](Draft& d) -> double& { return d.array.height; })},
      {"array.center_x", number_key([](Draft& d) -> double& { return d.array.center_x; })},
      {"array.center_y", number_key([](Draft& d) -> double& { return d.array.center_y; })},

      {"render.mode",
       [](Draft& d, std::string_view v) {
         if (v == "static") {
           d.cohort.session.models.wfs_mode = RenderMode::Static;
         } else if (v == "user_dependent") {
           d.cohort.session.models.wfs_mode = RenderMode::UserDependent;
         } else {
           return false;
         }
         return true;
       }},
      {"render.static_subarray",
       [](Draft& d, std::string_view v) {
         int side = 0;
         if (v == "nearest") {
           d.cohort.session.models.driving.static_subarray = StaticSubarray::nearest();
         } else if (csv::parse(v, side) && side >= 0 && side < 4) {
           d.cohort.session.models.driving.static_subarray = StaticSubarray::fixed(side);
         } else {
           return false;
         }
         return true;
       }},
      {"render.taper_fraction", number_key([](Draft& d) -> double& { return d.cohort.session.models.driving.taper_fraction; })},
      {"render.half_aperture_deg", number_key([](Draft& d) -> double& { return d.half_aperture_deg; })},
      {"render.reference_frequency",
       number_key([](Draft& d) -> double& { return d.cohort.session.models.driving.reference_frequency; })},
      {"render.itd_model",
       [](Draft& d, std::string_view v) {
         if (v == "phase") {
           d.cohort.session.models.cues.itd_model = ItdModel::InterauralPhase;
         } else if (v == "first_arrival") {
           d.cohort.session.models.cues.itd_model = ItdModel::FirstArrival;
         } else {
           return false;
         }
         return true;
       }},
      {"render.analysis_frequency",
       number_key([](Draft& d) -> double& { return d.cohort.session.models.cues.analysis_frequency; })},

      {"timing.onset_delay", number_key([](Draft& d) -> double& { return d.cohort.session.timing.onset_delay; })},
      {"timing.guess_timeout", number_key([](Draft& d) -> double& { return d.cohort.session.timing.guess_timeout; })},
      {"timing.feedback", number_key([](Draft& d) -> double& { return d.cohort.session.timing.feedback; })},

      {"demographics.age", number_key([](Draft& d) -> int& { return d.cohort.demographics.age; })},
      {"demographics.gender",
       [](Draft& d, std::string_view v) {
         if (v.find(',') != std::string_view::npos) return false;
         d.cohort.demographics.gender = std::string(v);
         return true;
       }},
      {"demographics.vr_experience",
       [](Draft& d, std::string_view v) { return parse(v, d.cohort.demographics.vr_experience); }},
  };
  return table;
}

[[noreturn]] void fail(const std::string& origin, std::size_t line, const std::string& what) {
  throw ConfigError(origin + ":" + std::to_string(line) + ": " + what);
}

}  // namespace

SimulationConfig parse_config(const std::string& text, const std::string& origin) {
  Draft d;
  std::istringstream in(text);
  std::string raw;
  std::string section;
  std::size_t lineno = 0;
  std::map<std::string, std::size_t> seen;
  while (std::getline(in, raw)) {
    ++lineno;
    const auto hash = raw.find('#');
    if (hash != std::string::npos) raw.erase(hash);
    const auto line = csv::trim(raw);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']') fail(origin, lineno, "unterminated section header");
      section = std::string(csv::trim(line.substr(1, line.size() - 2)));
      bool known = false;
      for (const auto& [key, setter] : setters()) {
        if (key.compare(0, section.size() + 1, section + ".") == 0) known = true;
      }
      if (!known) fail(origin, lineno, "unknown section [" + section + "]");
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) fail(origin, lineno, "expected key = value");
    if (section.empty()) fail(origin, lineno, "key outside of any section");
    const std::string key = section + "." + std::string(csv::trim(line.substr(0, eq)));
    const auto value = csv::trim(line.substr(eq + 1));
    const auto it = setters().find(key);
    if (it == setters().end()) fail(origin, lineno, "unknown key '" + key + "'");
    if (const auto prev = seen.find(key); prev != seen.end()) {
      fail(origin, lineno, "duplicate key '" + key + "' (first set on line " +
                               std::to_string(prev->second) + ")");
    }
    seen[key] = lineno;
    if (!it->second(d, value)) {
      fail(origin, lineno, "invalid value '" + std::string(value) + "' for '" + key + "'");
    }
  }

  SimulationConfig config;
  config.cohort = d.cohort;
  auto& session = config.cohort.session;
  session.misalignment.sigma_rotation = deg_to_rad(d.sigma_rotation_deg);
  session.models.driving.half_aperture = deg_to_rad(d.half_aperture_deg);
  try {
    session.models.array = build_square_array(d.array.side_length, d.array.speakers_per_side,
                                              d.array.height,
                                              Vec3(d.array.center_x, d.array.center_y, 0.0));
  } catch (const InvalidArgument& e) {
    throw ConfigError(origin + ": invalid array geometry: " + e.what());
  }
  session.geometry.walkable =
      Rect::centered_square(Vec2(d.array.center_x, d.array.center_y), d.array.side_length);
  session.geometry.height = d.array.height;
  session.models.cues.speed_of_sound = session.models.driving.speed_of_sound;
  try {
    validate_config(config);
  } catch (const ConfigError& e) {
    throw ConfigError(origin + ": " + e.what());
  }
  return config;
}

SimulationConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open config " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str(), path.string());
}

void validate_config(const SimulationConfig& config) {
  const auto& c = config.cohort;
  const auto require = [](bool ok, const std::string& what) {
    if (!ok) throw ConfigError(what);
  };
  require(c.participants >= 1, "cohort.participants must be at least 1");
  require(c.wfs_first <= c.participants, "cohort.wfs_first exceeds cohort.participants");
  const auto& a = c.session.agent;
  require(a.walk_speed > 0.0, "agent.walk_speed must be positive");
  require(a.turn_speed > 0.0, "agent.turn_speed must be positive");
  for (double v : {a.probe_step, a.cue_noise_itd, a.cue_noise_level, a.commit_threshold,
                   a.max_search_time, a.reaction_time, a.reach_duration, a.arm_reach, a.lean_back}) {
    require(v >= 0.0, "agent parameters must be non-negative");
  }
  require(a.hand_dropout >= 0.0 && a.hand_dropout <= 1.0, "agent.hand_dropout must lie in [0, 1]");
  require(a.learning_decay > 0.0, "agent.learning_decay must be positive");
  const auto& m = c.session.misalignment;
  require(m.sigma_translation >= 0.0 && m.sigma_rotation >= 0.0,
          "misalignment sigmas must be non-negative");
  const auto& r = c.session.models.rolloff;
  require(r.min_distance > 0.0 && r.max_distance > r.min_distance,
          "rolloff needs 0 < min_distance < max_distance");
  const auto& drv = c.session.models.driving;
  require(drv.taper_fraction >= 0.0 && drv.taper_fraction <= 0.5,
          "render.taper_fraction must lie in [0, 0.5]");
  require(drv.half_aperture > 0.0 && drv.half_aperture <= kPi / 2,
          "render.half_aperture_deg must lie in (0, 90]");
  require(drv.reference_frequency > 0.0, "render.reference_frequency must be positive");
  require(c.session.models.cues.analysis_frequency > 0.0,
          "render.analysis_frequency must be positive");
  const auto& t = c.session.timing;
  require(t.onset_delay >= 0.0 && t.guess_timeout >= 0.0 && t.feedback >= 0.0,
          "timing values must be non-negative");
  require(c.demographics.age >= 0, "demographics.age must be non-negative");
}

std::string default_config_text() {
  const SimulationConfig d;
  const auto& c = d.cohort;
  const auto& s = c.session;
  const auto f = [](double v) { return csv::format(v); };
  std::ostringstream out;
  out << "[cohort]\n"
      << "participants = " << c.participants << '\n'
      << "seed = " << c.base_seed << '\n'
      << "# participants starting with WFS; -1 means two thirds, rounded\n"
      << "wfs_first = " << c.wfs_first << '\n'
      << "tutorial = false\n"
      << "out = " << c.out_dir.string() << "\n\n"
      << "[agent]\n"
      << "policy = search\n"
      << "walk_speed = " << f(s.agent.walk_speed) << '\n'
      << "turn_speed = " << f(s.agent.turn_speed) << '\n'
      << "probe_step = " << f(s.agent.probe_step) << '\n'
      << "cue_noise_itd = " << f(s.agent.cue_noise_itd) << '\n'
      << "cue_noise_level = " << f(s.agent.cue_noise_level) << '\n'
      << "commit_threshold = " << f(s.agent.commit_threshold) << '\n'
      << "max_search_time = " << f(s.agent.max_search_time) << '\n'
      << "reaction_time = " << f(s.agent.reaction_time) << '\n'
      << "reach_duration = " << f(s.agent.reach_duration) << '\n'
      << "arm_reach = " << f(s.agent.arm_reach) << '\n'
      << "lean_back = " << f(s.agent.lean_back) << '\n'
      << "hand_dropout = " << f(s.agent.hand_dropout) << '\n'
      << "learning_decay = " << f(s.agent.learning_decay) << "\n\n"
      << "[misalignment]\n"
      << "sigma_translation = " << f(s.misalignment.sigma_translation) << '\n'
      << "sigma_rotation_deg = " << f(rad_to_deg(s.misalignment.sigma_rotation)) << "\n\n"
      << "[rolloff]\n"
      << "min_distance = " << f(s.models.rolloff.min_distance) << '\n'
      << "max_distance = " << f(s.models.rolloff.max_distance) << "\n\n"
      << "[array]\n"
      << "side_length = " << f(s.models.array.side_length) << '\n'
      << "speakers_per_side = " << s.models.array.speakers_per_side << '\n'
      << "height = " << f(s.models.array.height) << '\n'
      << "center_x = 0\n"
      << "center_y = 0\n\n"
      << "[render]\n"
      << "mode = static\n"
      << "static_subarray = nearest\n"
      << "taper_fraction = " << f(s.models.driving.taper_fraction) << '\n'
      << "half_aperture_deg = " << f(rad_to_deg(s.models.driving.half_aperture)) << '\n'
      << "reference_frequency = " << f(s.models.driving.reference_frequency) << '\n'
      << "itd_model = phase\n"
      << "analysis_frequency = " << f(s.models.cues.analysis_frequency) << "\n\n"
      << "[timing]\n"
      << "onset_delay = " << f(s.timing.onset_delay) << '\n'
      << "guess_timeout = " << f(s.timing.guess_timeout) << '\n'
      << "feedback = " << f(s.timing.feedback) << "\n\n"
      << "[demographics]\n"
      << "age = " << c.demographics.age << '\n'
      << "gender = " << c.demographics.gender << '\n'
      << "vr_experience = " << to_string(c.demographics.vr_experience) << '\n';
  return out.str();
}

}  // namespace wfslab
