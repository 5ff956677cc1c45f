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

#include "wfslab/logging.hpp"

#include <algorithm>
#include <array>
#include <fstream>

#include "wfslab/csv.hpp"
#include "wfslab/errors.hpp"

namespace wfslab {

namespace fs = std::filesystem;

namespace {

constexpr std::array<std::pair<std::string_view, VrExperience>, 4> kVrNames{
    {{"none", VrExperience::None},
     {"casual", VrExperience::Casual},
     {"regular", VrExperience::Regular},
     {"enthusiast", VrExperience::Enthusiast}}};

std::ofstream open_out(const fs::path& file) {
  // Binary mode keeps LF line endings on every platform.
  std::ofstream out(file, std::ios::binary);
  if (!out) throw Error("cannot write " + file.string());
  return out;
}

void finish(std::ofstream& out, const fs::path& file) {
  out.flush();
  if (!out) throw Error("write failed for " + file.string());
}

// Reads data lines of a CSV whose first line must equal `header`.
class CsvReader {
 public:
  CsvReader(const fs::path& file, std::string_view header)
      : in_(file, std::ios::binary), name_(file.string()) {
    if (!in_) throw Error("cannot open " + name_);
    std::string line;
    if (!next_line(line)) throw ParseError(name_, 1, "empty file");
    if (line != header) throw ParseError(name_, line_, "unexpected header");
  }

  bool next(std::vector<std::string>& fields, std::size_t expected) {
    std::string line;
    while (next_line(line)) {
      if (line.empty()) continue;
      fields = csv::split(line);
      if (fields.size() != expected) {
        fail("expected " + std::to_string(expected) + " fields, got " +
             std::to_string(fields.size()));
      }
      return true;
    }
    return false;
  }

  [[noreturn]] void fail(const std::string& what) const { throw ParseError(name_, line_, what); }

  double real(const std::string& s, const char* what) const {
    double v = 0;
    if (!csv::parse(s, v)) fail(std::string("bad ") + what + " '" + s + "'");
    return v;
  }
  int integer(const std::string& s, const char* what) const {
    int v = 0;
    if (!csv::parse(s, v)) fail(std::string("bad ") + what + " '" + s + "'");
    return v;
  }
  template <typename Enum>
  Enum name(const std::string& s, const char* what) const {
    Enum v{};
    if (!parse(s, v)) fail(std::string("unknown ") + what + " '" + s + "'");
    return v;
  }

 private:
  bool next_line(std::string& line) {
    if (!std::getline(in_, line)) return false;
    ++line_;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    return true;
  }

  std::ifstream in_;
  std::string name_;
  std::size_t line_ = 0;
};

void put_pose(std::vector<std::string>& f, const Vec3& p, const Quat& q) {
  for (double v : {p.x(), p.y(), p.z(), q.w(), q.x(), q.y(), q.z()}) f.push_back(csv::format(v));
}

std::pair<Vec3, Quat> get_pose(const CsvReader& r, const std::vector<std::string>& f,
                               std::size_t at) {
  const Vec3 p(r.real(f[at], "position"), r.real(f[at + 1], "position"),
               r.real(f[at + 2], "position"));
  const Quat q(r.real(f[at + 3], "rotation"), r.real(f[at + 4], "rotation"),
               r.real(f[at + 5], "rotation"), r.real(f[at + 6], "rotation"));
  return {p, q};
}

}  // namespace

std::string_view to_string(VrExperience v) {
  for (const auto& [name, value] : kVrNames) {
    if (value == v) return name;
  }
  return "?";
}

bool parse(std::string_view text, VrExperience& out) {
  for (const auto& [name, value] : kVrNames) {
    if (name == text) {
      out = value;
      return true;
    }
  }
  return false;
}

SessionLogRow make_log_row(const std::string& participant_id, const TrialSpec& spec,
                           const TrialResult& result) {
  SessionLogRow row;
  row.participant_id = participant_id;
  row.trial = spec.index;
  row.block = spec.block;
  row.system = spec.system;
  row.environment = spec.environment;
  row.sound = spec.sound;
  row.movement = spec.movement;
  row.source = spec.source_start;
  if (spec.trajectory) {
    row.trajectory_end = spec.trajectory->end;
    row.trajectory_duration = spec.trajectory->duration;
  }
  row.rendered_start = result.rendered_start;
  row.rendered_end = result.rendered_end;
  row.guess = result.guess;
  row.guess_time = result.guess_time;
  row.onset_time = result.onset_time;
  row.score = result.score;
  row.timed_out = result.timed_out;
  row.clamp_events = result.clamp_events;
  return row;
}

fs::path session_log_dir(const fs::path& root, const SessionPlan& plan) {
  return root / (plan.participant_id + "_" + std::to_string(plan.seed));
}

void write_session_log(const std::vector<SessionLogRow>& rows, const fs::path& file) {
  auto out = open_out(file);
  out << kSessionLogHeader << '\n';
  for (const auto& r : rows) {
    if (r.participant_id.find(',') != std::string::npos) {
      throw InvalidArgument("participant id must not contain ','");
    }
    std::vector<std::string> f{r.participant_id,
                               csv::format(r.trial),
                               csv::format(r.block),
                               std::string(to_string(r.system)),
                               std::string(to_string(r.environment)),
                               std::string(to_string(r.sound)),
                               std::string(to_string(r.movement)),
                               csv::format(r.source.x()),
                               csv::format(r.source.y()),
                               csv::format(r.source.z()),
                               r.trajectory_end ? csv::format(r.trajectory_end->x()) : "",
                               r.trajectory_end ? csv::format(r.trajectory_end->y()) : "",
                               r.trajectory_duration ? csv::format(*r.trajectory_duration) : "",
                               csv::format(r.rendered_start.x()),
                               csv::format(r.rendered_start.y()),
                               csv::format(r.rendered_end.x()),
                               csv::format(r.rendered_end.y()),
                               csv::format(r.guess.x()),
                               csv::format(r.guess.y()),
                               csv::format(r.guess.z()),
                               csv::format(r.guess_time),
                               csv::format(r.onset_time),
                               csv::format(r.score),
                               r.timed_out ? "1" : "0",
                               csv::format(r.clamp_events)};
    out << csv::join(f) << '\n';
  }
  finish(out, file);
}

void write_session_log(const SessionPlan& plan, const std::vector<TrialResult>& results,
                       const fs::path& dir) {
  if (results.size() != plan.trials.size()) {
    throw InvalidArgument("results do not cover every trial of the plan");
  }
  std::vector<SessionLogRow> rows;
  for (std::size_t i = 0; i < results.size(); ++i) {
    rows.push_back(make_log_row(plan.participant_id, plan.trials[i], results[i]));
  }
  fs::create_directories(dir);
  write_session_log(rows, dir / "session.csv");
}

std::vector<SessionLogRow> read_session_log(const fs::path& file) {
  CsvReader in(file, kSessionLogHeader);
  std::vector<SessionLogRow> rows;
  std::vector<std::string> f;
  while (in.next(f, 25)) {
    SessionLogRow r;
    r.participant_id = f[0];
    r.trial = in.integer(f[1], "trial");
    r.block = in.integer(f[2], "block");
    r.system = in.name<System>(f[3], "system");
    r.environment = in.name<Environment>(f[4], "environment");
    r.sound = in.name<Sound>(f[5], "sound");
    r.movement = in.name<Movement>(f[6], "movement");
    r.source = {in.real(f[7], "source_x"), in.real(f[8], "source_y"), in.real(f[9], "source_z")};
    if (r.movement == Movement::Dynamic) {
      r.trajectory_end = Vec2(in.real(f[10], "end_x"), in.real(f[11], "end_y"));
      r.trajectory_duration = in.real(f[12], "duration");
    } else if (!f[10].empty() || !f[11].empty() || !f[12].empty()) {
      in.fail("static trial with trajectory fields");
    }
    r.rendered_start = {in.real(f[13], "render_x"), in.real(f[14], "render_y")};
    r.rendered_end = {in.real(f[15], "render_end_x"), in.real(f[16], "render_end_y")};
    r.guess = {in.real(f[17], "guess_x"), in.real(f[18], "guess_y"), in.real(f[19], "guess_z")};
    r.guess_time = in.real(f[20], "guess_time");
    r.onset_time = in.real(f[21], "onset_time");
    r.score = in.real(f[22], "score");
    if (f[23] != "0" && f[23] != "1") in.fail("bad timed_out '" + f[23] + "'");
    r.timed_out = f[23] == "1";
    r.clamp_events = in.integer(f[24], "clamp_events");
    rows.push_back(std::move(r));
  }
  return rows;
}

fs::path write_tracking(int trial_nr, const std::vector<TrackingSample>& samples,
                        const fs::path& dir, std::string_view prefix) {
  fs::create_directories(dir);
  const fs::path file = dir / (std::string(prefix) + std::to_string(trial_nr) + ".csv");
  auto out = open_out(file);
  out << kTrackingHeader << '\n';
  double last_t = -1e300;
  for (const auto& s : samples) {
    if (s.t < last_t) throw InvalidArgument("tracking samples must be time-ordered");
    last_t = s.t;
    std::vector<std::string> f{csv::format(s.t)};
    put_pose(f, s.hmd_position, s.hmd_rotation);
    for (const HandSample* h : {&s.left_hand, &s.right_hand}) {
      const HandSample written = h->valid ? *h : invalid_hand();
      put_pose(f, written.position, written.rotation);
    }
    out << csv::join(f) << '\n';
  }
  finish(out, file);
  return file;
}

std::vector<TrackingSample> read_tracking(const fs::path& file) {
  CsvReader in(file, kTrackingHeader);
  std::vector<TrackingSample> samples;
  std::vector<std::string> f;
  while (in.next(f, 22)) {
    TrackingSample s;
    s.t = in.real(f[0], "t");
    std::tie(s.hmd_position, s.hmd_rotation) = get_pose(in, f, 1);
    for (auto [hand, at] : {std::pair{&s.left_hand, std::size_t{8}}, {&s.right_hand, std::size_t{15}}}) {
      std::tie(hand->position, hand->rotation) = get_pose(in, f, at);
      hand->valid = !is_sentinel(*hand);
    }
    samples.push_back(s);
  }
  return samples;
}

void write_demographics(const Demographics& dems, const fs::path& dir) {
  if (dems.participant_id.find(',') != std::string::npos ||
      dems.gender.find(',') != std::string::npos) {
    throw InvalidArgument("demographic fields must not contain ','");
  }
  fs::create_directories(dir);
  const fs::path file = dir / "dems.csv";
  auto out = open_out(file);
  out << kDemographicsHeader << '\n';
  out << csv::join({dems.participant_id, csv::format(dems.age), dems.gender,
                    std::string(to_string(dems.vr_experience))})
      << '\n';
  finish(out, file);
}

Demographics read_demographics(const fs::path& file) {
  CsvReader in(file, kDemographicsHeader);
  std::vector<std::string> f;
  if (!in.next(f, 4)) in.fail("missing demographics row");
  Demographics d;
  d.participant_id = f[0];
  d.age = in.integer(f[1], "age");
  d.gender = f[2];
  d.vr_experience = in.name<VrExperience>(f[3], "vr_experience");
  return d;
}

TrialTracking filter_invalid(const std::vector<TrackingSample>& samples) {
  TrialTracking out;
  for (const auto& s : samples) {
    out.hmd.push_back({s.t, s.hmd_position, s.hmd_rotation});
    if (s.left_hand.valid && !is_sentinel(s.left_hand)) {
      out.left_hand.push_back({s.t, s.left_hand.position, s.left_hand.rotation});
    }
    if (s.right_hand.valid && !is_sentinel(s.right_hand)) {
      out.right_hand.push_back({s.t, s.right_hand.position, s.right_hand.rotation});
    }
  }
  return out;
}

SessionLog read_session(const fs::path& dir) {
  const fs::path session_file = dir / "session.csv";
  if (!fs::exists(session_file)) throw Error("missing " + session_file.string());
  SessionLog log;
  log.trials = read_session_log(session_file);
  if (!log.trials.empty()) log.participant_id = log.trials.front().participant_id;
  const fs::path dems = dir / "dems.csv";
  if (fs::exists(dems)) {
    log.demographics = read_demographics(dems);
    if (log.participant_id.empty()) log.participant_id = log.demographics->participant_id;
  }
  for (const auto& row : log.trials) {
    const fs::path file = dir / ("pos_round_" + std::to_string(row.trial) + ".csv");
    if (!fs::exists(file)) throw Error("missing " + file.string());
    log.tracking.push_back(filter_invalid(read_tracking(file)));
  }
  return log;
}

std::vector<fs::path> find_session_dirs(const fs::path& root) {
  std::vector<fs::path> dirs;
  if (!fs::is_directory(root)) return dirs;
  if (fs::exists(root / "session.csv")) dirs.push_back(root);
  for (const auto& entry : fs::directory_iterator(root)) {
    if (entry.is_directory() && fs::exists(entry.path() / "session.csv")) {
      dirs.push_back(entry.path());
    }
  }
  std::sort(dirs.begin(), dirs.end());
  return dirs;
}

}  // namespace wfslab
