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

// Acceptance suite: one PASS/FAIL line per criterion, exit status 1 if any fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iterator>
#include <map>
#include <sstream>
#include <string>
#include <tuple>

#include "wfslab/analysis.hpp"
#include "wfslab/csv.hpp"
#include "wfslab/experiment.hpp"
#include "wfslab/osc.hpp"

using namespace wfslab;
namespace fs = std::filesystem;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string num(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

struct Verdict {
  bool pass = true;
  std::string detail;

  void require(bool ok, const std::string& what) {
    if (!detail.empty()) detail += "; ";
    detail += what;
    if (!ok) {
      pass = false;
      detail += " [failed]";
    }
  }
};

int failures = 0;

void report(const std::string& name, const std::function<Verdict()>& check) {
  Verdict v;
  try {
    v = check();
  } catch (const std::exception& e) {
    v.pass = false;
    v.detail = std::string("exception: ") + e.what();
  }
  if (!v.pass) ++failures;
  std::printf("%s %s: %s\n", v.pass ? "PASS" : "FAIL", name.c_str(), v.detail.c_str());
  std::fflush(stdout);
}

// ---------------------------------------------------------------------------

bool design_exact(const SessionPlan& plan) {
  if (plan.trials.size() != 54) return false;
  const Environment order[] = {Environment::Blank, Environment::Indoors, Environment::Outdoors};
  std::map<std::tuple<int, int, int, int>, int> cond;
  std::map<int, std::vector<const TrialSpec*>> blocks;
  int prev = 0;
  for (std::size_t i = 0; i < plan.trials.size(); ++i) {
    const auto& t = plan.trials[i];
    if (t.index != static_cast<int>(i) + 1 || t.block < prev) return false;
    prev = t.block;
    blocks[t.block].push_back(&t);
    ++cond[{static_cast<int>(t.system), static_cast<int>(t.environment), static_cast<int>(t.sound),
            static_cast<int>(t.movement)}];
  }
  if (blocks.size() != 8) return false;
  for (const auto& [b, trials] : blocks) {
    if (b < 1 || b > 8) return false;
    const bool dynamic = b % 4 == 0;
    const System sys = b <= 4 ? plan.first_system : other(plan.first_system);
    if (trials.size() != (dynamic ? 9u : 6u)) return false;
    std::map<Sound, int> per_sound;
    for (const auto* t : trials) {
      if (t->system != sys) return false;
      if (t->movement != (dynamic ? Movement::Dynamic : Movement::Static)) return false;
      if (t->environment != (dynamic ? Environment::Blank : order[(b - 1) % 4])) return false;
      ++per_sound[t->sound];
    }
    for (Sound s : kSounds) {
      if (per_sound[s] != (dynamic ? 3 : 2)) return false;
    }
  }
  int statics = 0, dynamics = 0;
  for (const auto& [key, n] : cond) {
    if (std::get<3>(key) == static_cast<int>(Movement::Static)) {
      if (n != 2) return false;
      statics += n;
    } else {
      if (n != 3) return false;
      dynamics += n;
    }
  }
  return statics == 36 && dynamics == 18;
}

Verdict session_design() {
  Verdict v;
  int exact = 0;
  const int plans = 1000;
  double worst = 0.0;
  for (int s = 0; s < plans; ++s) {
    const auto t0 = Clock::now();
    const auto plan = generate_session("P", static_cast<std::uint64_t>(s),
                                       s % 2 ? System::Stereo : System::WFS);
    worst = std::max(worst, seconds_since(t0));
    if (design_exact(plan)) ++exact;
  }
  v.require(exact == plans, std::to_string(exact) + "/" + std::to_string(plans) +
                                " plans with 36 static (x2) + 18 dynamic (x3) trials in blocks 6/6/6/9");
  v.require(worst < 1.0, "slowest generation " + num(worst * 1e3) + " ms (< 1 s)");
  return v;
}

Verdict durations_and_trajectories() {
  Verdict v;
  bool exact = true;
  for (int s = 0; s < 50; ++s) {
    for (const auto& t : generate_session("P", static_cast<std::uint64_t>(s), System::WFS).trials) {
      const double want = t.sound == Sound::Telephone ? 6.12 : t.sound == Sound::Piano ? 6.861 : 159.362;
      exact = exact && t.sound_duration() == want;
    }
  }
  v.require(exact, "sound durations 6.12 / 6.861 / 159.362 s exact in 50 plans");

  Rng rng(2718);
  const Rect area = ExperimentGeometry{}.walkable;
  double worst_len = 0.0, min_d = 1e9, max_d = -1e9;
  const int draws = 10000;
  for (int i = 0; i < draws; ++i) {
    const auto tr = random_trajectory(rng, area);
    worst_len = std::max(worst_len, std::abs((tr.end - tr.start).norm() - 2.0));
    min_d = std::min(min_d, tr.duration);
    max_d = std::max(max_d, tr.duration);
  }
  v.require(worst_len <= 1e-9, "max |length - 2 m| " + num(worst_len) + " over 10^4 draws (<= 1e-9)");
  v.require(min_d >= 1.0 && max_d <= 3.0, "durations in [" + num(min_d) + ", " + num(max_d) + "] s");
  return v;
}

Verdict field_synthesis() {
  Verdict v;
  const auto t0 = Clock::now();
  const auto zone = GridSpec{Rect::centered_square(Vec2::Zero(), 1.0), 21, 21, 1.6}.points();
  const Vec3 pos(0.0, -1.5, 1.6);  // 0.5 m behind the south midpoint
  const auto error_for = [&](int per_side, bool single) {
    const auto array = build_square_array(2.0, per_side, 1.6, Vec3::Zero());
    const auto src = classify_source(pos, array);
    if (!single) {
      return reconstruction_error(
          src, array, driving_functions(src, array, std::nullopt, RenderMode::Static), zone, 500.0);
    }
    std::size_t best = 0;
    for (std::size_t n = 1; n < array.speakers.size(); ++n) {
      if ((array.speakers[n].position - pos).norm() < (array.speakers[best].position - pos).norm()) best = n;
    }
    return reconstruction_error(src, array, single_speaker_driving(array, best), zone, 500.0);
  };
  const double wfs16 = error_for(16, false);
  const double single = error_for(16, true);
  const double wfs8 = error_for(8, false);
  const double elapsed = seconds_since(t0);
  v.require(2.0 * wfs16 <= single, "(a) array " + num(wfs16) + " vs nearest speaker " + num(single) +
                                       " (ratio " + num(single / wfs16) + " >= 2)");
  v.require(wfs16 <= wfs8, "(b) 16/side " + num(wfs16) + " <= 8/side " + num(wfs8));
  v.require(elapsed < 10.0, "runtime " + num(elapsed) + " s (< 10 s)");
  return v;
}

Verdict user_dependent() {
  Verdict v;
  const auto array = build_square_array(2.0, 16, 1.6, Vec3::Zero());
  const auto src = classify_source({0.0, 0.0, 1.6}, array);
  Rng rng(4242);
  const int placements = 400;
  int better = 0;
  for (int i = 0; i < placements; ++i) {
    const double a = rng.uniform(-kPi, kPi);
    const Vec2 p = Vec2(std::cos(a), std::sin(a)) * 0.8;
    const ListenerState l{lift(p, 1.6), rng.uniform(-kPi, kPi), 0.18};
    const double truth = heading_of(-p);
    DrivingOptions opt;
    const int ud_side = select_subarray(src, l.head_position, array, opt.half_aperture);
    opt.static_subarray = StaticSubarray::fixed((ud_side + 2) % 4);
    const auto ud = driving_functions(src, array, l.head_position, RenderMode::UserDependent, opt);
    const auto st = driving_functions(src, array, std::nullopt, RenderMode::Static, opt);
    const double e_ud = angle_between(bearing_from_itd(binaural_cues_wfs(ud, array, l), l).bearing, truth);
    const double e_st = angle_between(bearing_from_itd(binaural_cues_wfs(st, array, l), l).bearing, truth);
    if (e_ud < e_st) ++better;
  }
  v.require(better >= placements * 9 / 10,
            "bearing error smaller in user-dependent mode at " + std::to_string(better) + "/" +
                std::to_string(placements) + " placements (>= 90%)");

  // The WFS search agent starts 0.8 m from a focused source at the center.
  const int trials = 200;
  double mean[2] = {0.0, 0.0};
  for (int m = 0; m < 2; ++m) {
    RenderModels models;
    models.wfs_mode = m ? RenderMode::UserDependent : RenderMode::Static;
    for (int s = 0; s < trials; ++s) {
      Rng placement(1000 + s);
      const double a = placement.uniform(-kPi, kPi);
      AgentParams params;
      params.seed = static_cast<std::uint64_t>(s) + 1;
      auto agent = make_agent(AgentPolicy::Search, System::WFS, params);
      agent->place(lift(Vec2(std::cos(a), std::sin(a)) * 0.8, 1.6), placement.uniform(-kPi, kPi));
      TrialSpec spec;
      spec.index = 1;
      spec.system = System::WFS;
      spec.source_start = {0.0, 0.0, 1.6};
      TrialContext ctx;
      ctx.walkable = ExperimentGeometry{}.walkable;
      ctx.guess_area = ctx.walkable;
      Rng rng(static_cast<std::uint64_t>(s));
      std::int64_t tick = 0;
      mean[m] += run_trial(spec, *agent, models, {}, {}, ctx, rng, tick).result.score / trials;
    }
  }
  v.require(mean[1] < mean[0], "WFS-agent mean score user-dependent " + num(mean[1]) +
                                   " < static " + num(mean[0]) + " over " +
                                   std::to_string(trials) + " seeded trials");
  return v;
}

Verdict osc_codec() {
  Verdict v;
  using Bytes = std::vector<std::uint8_t>;
  const std::vector<std::pair<osc::Message, Bytes>> vectors{
      {{"/source/1/xy", {1.0f, 2.0f}},
       {0x2F, 0x73, 0x6F, 0x75, 0x72, 0x63, 0x65, 0x2F, 0x31, 0x2F, 0x78, 0x79, 0, 0, 0, 0,
        0x2C, 0x66, 0x66, 0, 0x3F, 0x80, 0, 0, 0x40, 0, 0, 0}},
      {{"/a", {std::int32_t{-2}}}, {0x2F, 0x61, 0, 0, 0x2C, 0x69, 0, 0, 0xFF, 0xFF, 0xFF, 0xFE}},
      {{"/s", {std::string("abcd")}},
       {0x2F, 0x73, 0, 0, 0x2C, 0x73, 0, 0, 0x61, 0x62, 0x63, 0x64, 0, 0, 0, 0}},
      {{"/b", {osc::Blob{{1, 2, 3}}}},
       {0x2F, 0x62, 0, 0, 0x2C, 0x62, 0, 0, 0, 0, 0, 3, 1, 2, 3, 0}},
  };
  int matched = 0;
  for (const auto& [msg, bytes] : vectors) matched += osc::encode(msg) == bytes;
  v.require(matched == static_cast<int>(vectors.size()),
            std::to_string(matched) + "/" + std::to_string(vectors.size()) +
                " hand-derived vectors byte-exact (incl. 28-byte /source/1/xy)");

  Rng rng(77);
  int ok = 0, aligned = 0;
  const int n = 10000;
  for (int i = 0; i < n; ++i) {
    osc::Message m;
    m.address = "/r";
    for (std::uint64_t k = 0, len = rng.below(12); k < len; ++k) m.address += static_cast<char>('a' + rng.below(26));
    for (std::uint64_t k = 0, argc = rng.below(6); k < argc; ++k) {
      switch (rng.below(4)) {
        case 0: m.args.emplace_back(static_cast<std::int32_t>(rng.next())); break;
        case 1: m.args.emplace_back(static_cast<float>(rng.normal(0.0, 100.0))); break;
        case 2: m.args.emplace_back(std::string(rng.below(9), static_cast<char>('A' + rng.below(26)))); break;
        default: {
          osc::Blob b;
          for (std::uint64_t j = 0, bl = rng.below(9); j < bl; ++j) b.bytes.push_back(static_cast<std::uint8_t>(rng.below(256)));
          m.args.emplace_back(b);
        }
      }
    }
    const auto bytes = osc::encode(m);
    aligned += bytes.size() % 4 == 0;
    ok += osc::decode(bytes) == m;
  }
  v.require(ok == n, std::to_string(ok) + "/10^4 randomized round trips identical");
  v.require(aligned == n, std::to_string(aligned) + "/10^4 packet lengths multiple of 4");
  return v;
}

Verdict stereo_rolloff() {
  Verdict v;
  const StereoRolloff r;
  v.require(stereo_gain(0.1, r) == 1.0, "gain(0.1) = " + num(stereo_gain(0.1, r)));
  v.require(std::abs(stereo_gain(1.0, r) - 0.1) < 1e-15, "gain(1.0) = " + num(stereo_gain(1.0, r)));
  v.require(stereo_gain(650.0, r) == stereo_gain(1e4, r) && stereo_gain(651.0, r) == stereo_gain(650.0, r),
            "clamped beyond 650 m at " + num(stereo_gain(650.0, r)));
  bool monotone = true;
  double prev = stereo_gain(0.0, r);
  for (int i = 1; i <= 10000; ++i) {
    const double g = stereo_gain(1000.0 * i / 10000.0, r);
    monotone = monotone && g <= prev;
    prev = g;
  }
  v.require(monotone, "monotone non-increasing on a 10^4-point sweep over [0, 1000] m");
  return v;
}

// ---------------------------------------------------------------------------
// End-to-end cohort, shared by the calibration, logging and cohort criteria.

struct CohortRun {
  fs::path logs;
  fs::path bundle;
  double seconds = 0.0;
  CohortConfig config;
};

CohortRun run_cohort_pipeline(const fs::path& root) {
  fs::remove_all(root);
  CohortRun run;
  run.logs = root / "logs";
  run.bundle = root / "analysis";
  run.config.out_dir = run.logs;
  const auto t0 = Clock::now();
  const auto dirs = run_cohort(run.config);
  std::vector<SessionLog> sessions;
  for (const auto& d : dirs) sessions.push_back(read_session(d));
  export_analysis(sessions, run.bundle);
  run.seconds = seconds_since(t0);
  return run;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

std::map<std::string, std::string> tree(const fs::path& root) {
  std::map<std::string, std::string> out;
  for (const auto& e : fs::recursive_directory_iterator(root)) {
    if (e.is_regular_file()) out[fs::relative(e.path(), root).generic_string()] = slurp(e.path());
  }
  return out;
}

const fs::path kRoot = fs::temp_directory_path() / "wfslab_acceptance";

const CohortRun& first_run() {
  static const CohortRun run = run_cohort_pipeline(kRoot / "a");
  return run;
}

Verdict calibration() {
  Verdict v;
  Rng rng(99);
  double worst_iso = 0.0, worst_inv = 0.0;
  for (int i = 0; i < 10000; ++i) {
    const RigidTransform2D t{{rng.uniform(-2, 2), rng.uniform(-2, 2)}, rng.uniform(-kPi, kPi),
                             {rng.uniform(-2, 2), rng.uniform(-2, 2)}};
    const Vec2 a(rng.uniform(-3, 3), rng.uniform(-3, 3)), b(rng.uniform(-3, 3), rng.uniform(-3, 3));
    worst_iso = std::max(worst_iso, std::abs((t.apply(a) - t.apply(b)).norm() - (a - b).norm()));
    worst_inv = std::max({worst_inv, (invert(t).apply(t.apply(a)) - a).norm(),
                          (t.apply(invert(t).apply(a)) - a).norm()});
  }
  v.require(worst_iso <= 1e-9, "isometry error " + num(worst_iso) + " over 10^4 transforms (<= 1e-9)");
  v.require(worst_inv <= 1e-9, "inverse composition error " + num(worst_inv) + " (<= 1e-9)");

  // In the cohort logs the rendered position differs from the source iff the system is WFS.
  int wfs_shifted = 0, wfs_total = 0, stereo_shifted = 0, stereo_total = 0;
  for (const auto& dir : find_session_dirs(first_run().logs)) {
    for (const auto& row : read_session_log(dir / "session.csv")) {
      const bool shifted = row.rendered_start != horizontal(row.source);
      if (row.system == System::WFS) {
        ++wfs_total;
        wfs_shifted += shifted;
      } else {
        ++stereo_total;
        stereo_shifted += shifted;
      }
    }
  }
  v.require(wfs_total > 0 && wfs_shifted == wfs_total && stereo_shifted == 0,
            "misalignment in logs: WFS " + std::to_string(wfs_shifted) + "/" +
                std::to_string(wfs_total) + ", stereo " + std::to_string(stereo_shifted) + "/" +
                std::to_string(stereo_total));
  return v;
}

Verdict logging() {
  Verdict v;
  // Rebuild every row from a fresh run of the plans and compare with the files.
  const auto& run = first_run();
  const auto plans = cohort_plans(run.config);
  bool exact = true;
  int files = 0, count_ok = 0, sentinels = 0, leaked = 0;
  for (const auto& plan : plans) {
    const auto sim = run_session(plan, run.config.session);
    const fs::path dir = session_log_dir(run.config.out_dir, plan);
    std::vector<SessionLogRow> expected;
    for (std::size_t i = 0; i < sim.results.size(); ++i) {
      expected.push_back(make_log_row(plan.participant_id, plan.trials[i], sim.results[i]));
    }
    exact = exact && read_session_log(dir / "session.csv") == expected;

    const auto log = read_session(dir);
    for (std::size_t i = 0; i < log.trials.size(); ++i) {
      const auto raw = read_tracking(dir / ("pos_round_" + std::to_string(log.trials[i].trial) + ".csv"));
      // Tracking and sample exactness against the in-memory stream.
      const auto& mem = sim.tracking[i];
      exact = exact && raw.size() == mem.size();
      for (std::size_t k = 0; exact && k < raw.size(); ++k) {
        exact = raw[k].t == mem[k].t && raw[k].hmd_position == mem[k].hmd_position &&
                raw[k].right_hand.valid == mem[k].right_hand.valid;
      }
      ++files;
      const double duration = raw.back().t - raw.front().t + kTrackingStep;
      count_ok += std::abs(static_cast<double>(raw.size()) - kTrackingRate * duration) <= 1.0;
      for (const auto& s : raw) sentinels += !s.right_hand.valid;
      const auto& filtered = log.tracking[i].right_hand;
      for (const auto& p : filtered) leaked += p.position.isZero(0.0);
      int lost = 0;
      for (const auto& s : raw) lost += !s.right_hand.valid;
      exact = exact && filtered.size() + static_cast<std::size_t>(lost) == raw.size();
    }
  }
  v.require(exact, "session.csv and pos_round files field-exact against the simulation");
  v.require(count_ok == files, std::to_string(count_ok) + "/" + std::to_string(files) +
                                   " pos_round files hold 50 Hz x duration +- 1 samples");
  v.require(sentinels > 0 && leaked == 0, std::to_string(sentinels) +
                                              " sentinel hand rows written, " +
                                              std::to_string(leaked) + " left after read_session");
  return v;
}

Verdict analysis_oracles() {
  Verdict v;
  Rng rng(5150);
  double worst = 0.0;
  for (int inst = 0; inst < 10; ++inst) {
    std::vector<ScoredPoint> s;
    for (std::uint64_t i = 0, n = 20 + rng.below(60); i < n; ++i) {
      s.push_back({{rng.uniform(-1, 1), rng.uniform(-1, 1)}, rng.uniform(0, 2)});
    }
    for (int k : {1, 5, 15}) {
      const auto g = knn_score_map(s, k, Rect::centered_square(Vec2::Zero(), 2.0), 16, 16);
      for (int iy = 0; iy < 16; ++iy) {
        for (int ix = 0; ix < 16; ++ix) {
          const Vec2 c = g.cell_center(ix, iy);
          std::vector<std::pair<double, std::size_t>> d;
          for (std::size_t i = 0; i < s.size(); ++i) d.emplace_back((s[i].position - c).norm(), i);
          std::stable_sort(d.begin(), d.end(),
                           [](const auto& a, const auto& b) { return a.first < b.first; });
          double num_ = 0.0, den = 0.0;
          for (int j = 0; j < k; ++j) {
            const double w = 1.0 / (1e-6 + d[j].first);
            num_ += w * s[d[j].second].score;
            den += w;
          }
          worst = std::max(worst, std::abs(g.values(ix, iy) - num_ / den));
        }
      }
    }
  }
  v.require(worst <= 1e-9, "kNN vs naive reference max diff " + num(worst) +
                               " on 10 instances, k in {1,5,15} (<= 1e-9)");

  double worst_slope = 0.0;
  for (int inst = 0; inst < 100; ++inst) {
    std::vector<double> y(2 + rng.below(60));
    for (auto& e : y) e = rng.uniform(0, 3);
    const double n = static_cast<double>(y.size());
    double sx = 0, sy = 0, sxy = 0, sxx = 0;
    for (std::size_t i = 0; i < y.size(); ++i) {
      sx += static_cast<double>(i);
      sy += y[i];
      sxy += static_cast<double>(i) * y[i];
      sxx += static_cast<double>(i * i);
    }
    worst_slope = std::max(worst_slope, std::abs(learning_slope(y).slope -
                                                 (n * sxy - sx * sy) / (n * sxx - sx * sx)));
  }
  v.require(worst_slope <= 1e-12, "OLS slope vs closed form max diff " + num(worst_slope) + " (<= 1e-12)");

  std::vector<Vec2> pts;
  for (int i = 0; i < 20000; ++i) pts.emplace_back(rng.uniform(-1.2, 1.2), rng.uniform(-1.2, 1.2));
  const auto h = density_heatmap(pts, Rect::centered_square(Vec2::Zero(), 2.0), 40, 40);
  v.require(h.mass() + static_cast<double>(h.overflow) == static_cast<double>(pts.size()),
            "density mass " + num(h.mass()) + " + overflow " + std::to_string(h.overflow) +
                " = " + std::to_string(pts.size()) + " points");

  const auto fit = learning_slope({1.0, 0.0});
  v.require(fit.slope == -1.0 && fit.improving() && !learning_slope({0.1, 0.0}).improving(),
            "two-point slope (1,0) -> " + num(fit.slope) + ", improving below -0.1");
  return v;
}

double border_mass(const fs::path& file) {
  std::ifstream in(file);
  const auto g = read_grid_csv(in, file.string());
  const Rect inner = g.bounds.inset(0.25);
  double mass = 0.0;
  for (int iy = 0; iy < g.ny; ++iy) {
    for (int ix = 0; ix < g.nx; ++ix) {
      if (!inner.strictly_contains(g.cell_center(ix, iy))) mass += g.values(ix, iy);
    }
  }
  return mass;
}

Verdict end_to_end() {
  Verdict v;
  const auto& a = first_run();
  const auto plans = cohort_plans(a.config);
  int wfs_first = 0;
  for (const auto& p : plans) wfs_first += p.first_system == System::WFS;
  v.require(plans.size() == 6 && wfs_first == 4,
            std::to_string(plans.size()) + " participants, " + std::to_string(wfs_first) + " WFS-first");
  v.require(a.seconds < 60.0, "simulate + log + analyze in " + num(a.seconds) + " s (< 60 s)");

  const auto b = run_cohort_pipeline(kRoot / "b");
  const auto ta = tree(a.logs), tb = tree(b.logs);
  const auto ba = tree(a.bundle), bb = tree(b.bundle);
  v.require(!ta.empty() && ta == tb && ba == bb,
            "rerun byte-identical over " + std::to_string(ta.size() + ba.size()) + " files");

  const double wfs = border_mass(a.bundle / "heatmap_guesses_wfs.csv");
  const double stereo = border_mass(a.bundle / "heatmap_guesses_stereo.csv");
  v.require(wfs > stereo, "guess mass in the outer 25 cm border: WFS " + num(wfs) + " > stereo " + num(stereo));
  return v;
}

}  // namespace

int main() {
  report("session-design", session_design);
  report("durations-trajectories", durations_and_trajectories);
  report("field-synthesis", field_synthesis);
  report("user-dependent", user_dependent);
  report("osc-codec", osc_codec);
  report("stereo-rolloff", stereo_rolloff);
  report("calibration", calibration);
  report("logging", logging);
  report("analysis-oracles", analysis_oracles);
  report("end-to-end", end_to_end);
  fs::remove_all(kRoot);
  std::printf("%d of 10 criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
