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

#include "wfslab/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <map>
#include <numeric>
#include <ostream>

#include <json.hpp>

#include "wfslab/csv.hpp"
#include "wfslab/errors.hpp"

namespace wfslab {

namespace fs = std::filesystem;

namespace {

void check_grid_args(const Rect& bounds, int nx, int ny) {
  if (nx < 1 || ny < 1) throw InvalidArgument("grid needs at least one bin per axis");
  if (!(bounds.width() > 0.0) || !(bounds.height() > 0.0)) {
    throw InvalidArgument("grid bounds must have positive extent");
  }
}

ScoreGrid empty_grid(const Rect& bounds, int nx, int ny, GridKind kind) {
  ScoreGrid g;
  g.bounds = bounds;
  g.nx = nx;
  g.ny = ny;
  g.kind = kind;
  g.values = Eigen::MatrixXd::Zero(nx, ny);
  return g;
}

// Cell of coordinate v on an axis of n bins; values on an interior edge belong to the lower cell.
int bin_of(double v, double lo, double width, int n) {
  const double u = (v - lo) / width * n;
  const int idx = static_cast<int>(std::ceil(u)) - 1;
  return std::clamp(idx, 0, n - 1);
}

template <typename Fn>
void for_each_trial(const std::vector<SessionLog>& sessions, const ConditionFilter& filter, Fn fn) {
  for (const auto& s : sessions) {
    for (std::size_t i = 0; i < s.trials.size(); ++i) {
      if (filter.matches(s.trials[i])) fn(s, i);
    }
  }
}

std::string label(const SessionLogRow& row, const std::string& participant, Dimension d) {
  switch (d) {
    case Dimension::Participant: return participant;
    case Dimension::System: return std::string(to_string(row.system));
    case Dimension::Environment: return std::string(to_string(row.environment));
    case Dimension::Sound: return std::string(to_string(row.sound));
    case Dimension::Movement: return std::string(to_string(row.movement));
  }
  return {};
}

std::string_view dimension_name(Dimension d) {
  switch (d) {
    case Dimension::Participant: return "participant";
    case Dimension::System: return "system";
    case Dimension::Environment: return "environment";
    case Dimension::Sound: return "sound";
    case Dimension::Movement: return "movement";
  }
  return "?";
}

std::vector<std::string> labels_of(Dimension d, const std::vector<SessionLog>& sessions) {
  std::vector<std::string> out;
  switch (d) {
    case Dimension::Participant:
      for (const auto& s : sessions) {
        if (std::find(out.begin(), out.end(), s.participant_id) == out.end()) {
          out.push_back(s.participant_id);
        }
      }
      break;
    case Dimension::System:
      for (auto v : kSystems) out.emplace_back(to_string(v));
      break;
    case Dimension::Environment:
      for (auto v : kEnvironments) out.emplace_back(to_string(v));
      break;
    case Dimension::Sound:
      for (auto v : kSounds) out.emplace_back(to_string(v));
      break;
    case Dimension::Movement:
      for (auto v : {Movement::Static, Movement::Dynamic}) out.emplace_back(to_string(v));
      break;
  }
  return out;
}

std::ofstream open_out(const fs::path& file) {
  fs::create_directories(file.parent_path());
  std::ofstream out(file, std::ios::binary);
  if (!out) throw Error("cannot write " + file.string());
  return out;
}

std::string fmt_or_empty(double v) { return std::isfinite(v) ? csv::format(v) : std::string(); }

}  // namespace

std::string_view to_string(GridKind k) { return k == GridKind::Density ? "density" : "knn_score"; }

std::string_view to_string(Tracker t) { return t == Tracker::HMD ? "hmd" : "right_hand"; }

Vec2 ScoreGrid::cell_center(int ix, int iy) const {
  const double w = bounds.width() / nx;
  const double h = bounds.height() / ny;
  return {bounds.min.x() + (ix + 0.5) * w, bounds.min.y() + (iy + 0.5) * h};
}

bool ConditionFilter::matches(const SessionLogRow& row) const {
  return (!system || *system == row.system) && (!environment || *environment == row.environment) &&
         (!sound || *sound == row.sound) && (!movement || *movement == row.movement);
}

ScoreTable mean_scores(const std::vector<SessionLog>& sessions,
                       const std::vector<Dimension>& group_by) {
  struct Acc {
    double score = 0.0;
    double time = 0.0;
    std::size_t n = 0;
  };
  std::map<std::vector<std::string>, Acc> acc;
  for (const auto& s : sessions) {
    for (const auto& row : s.trials) {
      std::vector<std::string> key;
      for (Dimension d : group_by) key.push_back(label(row, s.participant_id, d));
      Acc& a = acc[key];
      a.score += row.score;
      a.time += row.guess_time;
      ++a.n;
    }
  }

  ScoreTable table;
  table.group_by = group_by;
  // Enumerate the full cross product in label order so output order is fixed.
  std::vector<std::vector<std::string>> keys{{}};
  for (Dimension d : group_by) {
    std::vector<std::vector<std::string>> next;
    for (const auto& prefix : keys) {
      for (const auto& l : labels_of(d, sessions)) {
        auto k = prefix;
        k.push_back(l);
        next.push_back(std::move(k));
      }
    }
    keys = std::move(next);
  }
  for (const auto& key : keys) {
    const auto it = acc.find(key);
    if (it == acc.end()) {
      std::string name;
      for (const auto& part : key) name += (name.empty() ? "" : "/") + part;
      table.warnings.push_back("no trials for group " + (name.empty() ? "<all>" : name));
      continue;
    }
    const Acc& a = it->second;
    table.groups.push_back({key, a.score / static_cast<double>(a.n),
                            a.time / static_cast<double>(a.n), a.n});
  }
  return table;
}

double fraction_below(const std::vector<SessionLog>& sessions, double threshold,
                      const ConditionFilter& filter) {
  if (!(threshold > 0.0)) throw InvalidArgument("threshold must be positive");
  std::size_t below = 0;
  std::size_t total = 0;
  for_each_trial(sessions, filter, [&](const SessionLog& s, std::size_t i) {
    ++total;
    if (s.trials[i].score < threshold) ++below;
  });
  if (total == 0) throw InsufficientData("no trials match the filter; fraction undefined");
  return static_cast<double>(below) / static_cast<double>(total);
}

ScoreGrid density_heatmap(const std::vector<Vec2>& points, const Rect& bounds, int nx, int ny) {
  check_grid_args(bounds, nx, ny);
  ScoreGrid g = empty_grid(bounds, nx, ny, GridKind::Density);
  for (const Vec2& p : points) {
    if (!bounds.contains(p)) {
      ++g.overflow;
      continue;
    }
    const int ix = bin_of(p.x(), bounds.min.x(), bounds.width(), nx);
    const int iy = bin_of(p.y(), bounds.min.y(), bounds.height(), ny);
    g.values(ix, iy) += 1.0;
  }
  return g;
}

ScoreGrid knn_score_map(const std::vector<ScoredPoint>& samples, int k, const Rect& bounds,
                        int nx, int ny) {
  check_grid_args(bounds, nx, ny);
  if (k < 1) throw InvalidArgument("k must be at least 1");
  if (samples.empty()) throw InsufficientData("kNN map needs at least one sample");
  const auto kk = std::min<std::size_t>(static_cast<std::size_t>(k), samples.size());

  ScoreGrid g = empty_grid(bounds, nx, ny, GridKind::KnnScore);
  std::vector<std::pair<double, std::size_t>> dist(samples.size());
  for (int iy = 0; iy < ny; ++iy) {
    for (int ix = 0; ix < nx; ++ix) {
      const Vec2 c = g.cell_center(ix, iy);
      for (std::size_t i = 0; i < samples.size(); ++i) {
        dist[i] = {(samples[i].position - c).norm(), i};
      }
      std::partial_sort(dist.begin(), dist.begin() + static_cast<std::ptrdiff_t>(kk), dist.end());
      double num = 0.0;
      double den = 0.0;
      for (std::size_t j = 0; j < kk; ++j) {
        const double w = 1.0 / (kKnnEpsilon + dist[j].first);
        num += w * samples[dist[j].second].score;
        den += w;
      }
      g.values(ix, iy) = num / den;
    }
  }
  return g;
}

std::vector<ScoredPoint> knn_samples(const std::vector<SessionLog>& sessions,
                                     KnnAttribution attribution, const ConditionFilter& filter) {
  std::vector<ScoredPoint> out;
  for_each_trial(sessions, filter, [&](const SessionLog& s, std::size_t i) {
    const auto& row = s.trials[i];
    const Vec2 at = attribution == KnnAttribution::Source ? row.target() : horizontal(row.guess);
    out.push_back({at, row.score});
  });
  return out;
}

LearningFit learning_slope(const std::vector<double>& y) {
  if (y.size() < 2) throw InsufficientData("learning slope needs at least two trials");
  const auto n = static_cast<double>(y.size());
  const double x_mean = (n - 1.0) / 2.0;
  const double y_mean = std::accumulate(y.begin(), y.end(), 0.0) / n;
  double sxy = 0.0;
  double sxx = 0.0;
  for (std::size_t i = 0; i < y.size(); ++i) {
    const double dx = static_cast<double>(i) - x_mean;
    sxy += dx * (y[i] - y_mean);
    sxx += dx * dx;
  }
  LearningFit fit;
  fit.slope = sxy / sxx;
  fit.intercept = y_mean - fit.slope * x_mean;
  fit.n = y.size();
  return fit;
}

TimeCurve normalized_time_curves(const std::vector<SessionLog>& sessions, Tracker tracker,
                                 int bins, const ConditionFilter& filter) {
  if (bins < 1) throw InvalidArgument("need at least one bin");
  TimeCurve curve;
  std::vector<double> sum(static_cast<std::size_t>(bins), 0.0);
  curve.trials.assign(static_cast<std::size_t>(bins), 0);

  for_each_trial(sessions, filter, [&](const SessionLog& s, std::size_t i) {
    const auto& row = s.trials[i];
    if (i >= s.tracking.size() || !(row.guess_time > 0.0)) return;
    const auto& stream = tracker == Tracker::HMD ? s.tracking[i].hmd : s.tracking[i].right_hand;
    const double t0 = row.onset_time;
    const double t1 = row.onset_time + row.guess_time;
    const Vec2 target = row.target();

    std::vector<double> bin_sum(static_cast<std::size_t>(bins), 0.0);
    std::vector<int> bin_n(static_cast<std::size_t>(bins), 0);
    int used = 0;
    for (const auto& p : stream) {
      // Half a tick of slack absorbs rounding in logged timestamps.
      if (p.t < t0 - 1e-9 || p.t > t1 + 1e-9) continue;
      const double u = std::clamp((p.t - t0) / (t1 - t0), 0.0, 1.0);
      const int b = std::min(static_cast<int>(u * bins), bins - 1);
      bin_sum[static_cast<std::size_t>(b)] += (horizontal(p.position) - target).norm();
      ++bin_n[static_cast<std::size_t>(b)];
      ++used;
    }
    if (used < 2) return;
    ++curve.trial_count;
    for (std::size_t b = 0; b < sum.size(); ++b) {
      if (bin_n[b] == 0) continue;
      sum[b] += bin_sum[b] / bin_n[b];
      ++curve.trials[b];
    }
  });
  if (curve.trial_count == 0) throw InsufficientData("no trial has two samples between onset and guess");
  curve.mean.resize(sum.size());
  for (std::size_t b = 0; b < sum.size(); ++b) {
    curve.mean[b] = curve.trials[b] ? sum[b] / static_cast<double>(curve.trials[b])
                                    : std::numeric_limits<double>::quiet_NaN();
  }
  return curve;
}

// ---------------------------------------------------------------------------
// Grid files

void write_grid_csv(std::ostream& out, const ScoreGrid& g) {
  out << "# kind=" << to_string(g.kind) << '\n';
  out << "# x_min=" << csv::format(g.bounds.min.x()) << '\n';
  out << "# y_min=" << csv::format(g.bounds.min.y()) << '\n';
  out << "# x_max=" << csv::format(g.bounds.max.x()) << '\n';
  out << "# y_max=" << csv::format(g.bounds.max.y()) << '\n';
  out << "# nx=" << g.nx << '\n';
  out << "# ny=" << g.ny << '\n';
  out << "# overflow=" << g.overflow << '\n';
  for (int iy = 0; iy < g.ny; ++iy) {
    std::vector<std::string> f;
    for (int ix = 0; ix < g.nx; ++ix) f.push_back(csv::format(g.values(ix, iy)));
    out << csv::join(f) << '\n';
  }
}

ScoreGrid read_grid_csv(std::istream& in, const std::string& origin) {
  std::map<std::string, std::string> meta;
  std::vector<std::vector<double>> rows;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (line.front() == '#') {
      const auto body = csv::trim(std::string_view(line).substr(1));
      const auto eq = body.find('=');
      if (eq == std::string_view::npos) throw ParseError(origin, lineno, "expected # key=value");
      meta[std::string(body.substr(0, eq))] = std::string(body.substr(eq + 1));
      continue;
    }
    std::vector<double> row;
    for (const auto& f : csv::split(line)) {
      double v = 0;
      if (!csv::parse(f, v)) throw ParseError(origin, lineno, "bad grid value '" + f + "'");
      row.push_back(v);
    }
    rows.push_back(std::move(row));
  }

  const auto need = [&](const char* key) -> const std::string& {
    const auto it = meta.find(key);
    if (it == meta.end()) throw ParseError(origin, lineno, std::string("missing metadata ") + key);
    return it->second;
  };
  ScoreGrid g;
  const std::string& kind = need("kind");
  if (kind == "density") {
    g.kind = GridKind::Density;
  } else if (kind == "knn_score") {
    g.kind = GridKind::KnnScore;
  } else {
    throw ParseError(origin, 1, "unknown grid kind '" + kind + "'");
  }
  double x0 = 0, y0 = 0, x1 = 0, y1 = 0;
  long long overflow = 0;
  if (!csv::parse(need("x_min"), x0) || !csv::parse(need("y_min"), y0) ||
      !csv::parse(need("x_max"), x1) || !csv::parse(need("y_max"), y1) ||
      !csv::parse(need("nx"), g.nx) || !csv::parse(need("ny"), g.ny) ||
      !csv::parse(meta.count("overflow") ? meta["overflow"] : std::string("0"), overflow)) {
    throw ParseError(origin, 1, "malformed grid metadata");
  }
  g.bounds = {Vec2(x0, y0), Vec2(x1, y1)};
  g.overflow = overflow;
  if (g.nx < 1 || g.ny < 1 || rows.size() != static_cast<std::size_t>(g.ny)) {
    throw ParseError(origin, lineno, "grid has " + std::to_string(rows.size()) + " rows, expected " +
                                         std::to_string(g.ny));
  }
  g.values.resize(g.nx, g.ny);
  for (int iy = 0; iy < g.ny; ++iy) {
    if (rows[static_cast<std::size_t>(iy)].size() != static_cast<std::size_t>(g.nx)) {
      throw ParseError(origin, lineno, "grid row " + std::to_string(iy) + " has the wrong width");
    }
    for (int ix = 0; ix < g.nx; ++ix) g.values(ix, iy) = rows[static_cast<std::size_t>(iy)][static_cast<std::size_t>(ix)];
  }
  return g;
}

// ---------------------------------------------------------------------------
// Bundle

namespace {

class Bundle {
 public:
  explicit Bundle(fs::path root) : root_(std::move(root)) {}

  std::ofstream open(const std::string& name, const std::string& kind, const std::string& figure,
                     nlohmann::json extra = nlohmann::json::object()) {
    extra["file"] = name;
    extra["kind"] = kind;
    extra["figure"] = figure;
    entries_.push_back(std::move(extra));
    files_.push_back(name);
    return open_out(root_ / name);
  }

  void grid(const std::string& name, const ScoreGrid& g, const std::string& figure,
            nlohmann::json extra = nlohmann::json::object()) {
    auto out = open(name, g.kind == GridKind::Density ? "density_grid" : "knn_grid", figure,
                    std::move(extra));
    write_grid_csv(out, g);
  }

  std::vector<std::string> finish(nlohmann::json meta) {
    meta["entries"] = entries_;
    auto out = open_out(root_ / "manifest.json");
    out << meta.dump(2) << '\n';
    files_.push_back("manifest.json");
    return files_;
  }

 private:
  fs::path root_;
  nlohmann::json entries_ = nlohmann::json::array();
  std::vector<std::string> files_;
};

void write_table(std::ostream& out, const ScoreTable& t) {
  std::vector<std::string> header;
  for (Dimension d : t.group_by) header.emplace_back(dimension_name(d));
  for (const char* c : {"mean_score", "mean_guess_time", "n"}) header.emplace_back(c);
  out << csv::join(header) << '\n';
  for (const auto& g : t.groups) {
    auto f = g.key;
    f.push_back(csv::format(g.mean_score));
    f.push_back(csv::format(g.mean_guess_time));
    f.push_back(csv::format(static_cast<long long>(g.n)));
    out << csv::join(f) << '\n';
  }
}

}  // namespace

std::vector<std::string> export_analysis(const std::vector<SessionLog>& sessions,
                                         const fs::path& out_dir, const AnalysisOptions& opt) {
  if (sessions.empty()) throw InsufficientData("no sessions to analyze");
  Bundle bundle(out_dir);

  const std::vector<std::pair<std::string, std::vector<Dimension>>> tables{
      {"system", {Dimension::System}},
      {"system_sound", {Dimension::System, Dimension::Sound}},
      {"system_environment", {Dimension::System, Dimension::Environment}},
      {"system_movement", {Dimension::System, Dimension::Movement}},
      {"participant_system", {Dimension::Participant, Dimension::System}},
  };
  for (const auto& [name, dims] : tables) {
    const ScoreTable t = mean_scores(sessions, dims);
    auto out = bundle.open("scores_by_" + name + ".csv", "score_table", "performance");
    write_table(out, t);
  }

  {
    auto out = bundle.open("fraction_below.csv", "fraction_table", "performance",
                           {{"threshold", opt.threshold}});
    out << "system,movement,fraction,n\n";
    for (System sys : kSystems) {
      for (std::optional<Movement> mv : {std::optional<Movement>{}, std::optional(Movement::Static),
                                          std::optional(Movement::Dynamic)}) {
        ConditionFilter f{sys, std::nullopt, std::nullopt, mv};
        std::size_t n = 0;
        for_each_trial(sessions, f, [&](const SessionLog&, std::size_t) { ++n; });
        const std::string fraction = n ? csv::format(fraction_below(sessions, opt.threshold, f)) : "";
        out << csv::join({std::string(to_string(sys)), mv ? std::string(to_string(*mv)) : "all",
                          fraction, csv::format(static_cast<long long>(n))})
            << '\n';
      }
    }
  }

  // Heatmaps: all sources, then guesses per system.
  {
    std::vector<Vec2> sources;
    std::map<System, std::vector<Vec2>> guesses;
    for (const auto& s : sessions) {
      for (const auto& row : s.trials) {
        sources.push_back(row.target());
        guesses[row.system].push_back(horizontal(row.guess));
      }
    }
    bundle.grid("heatmap_sources.csv", density_heatmap(sources, opt.bounds, opt.nx, opt.ny),
                "heatmaps", {{"subject", "sources"}});
    for (System sys : kSystems) {
      bundle.grid("heatmap_guesses_" + std::string(to_string(sys)) + ".csv",
                  density_heatmap(guesses[sys], opt.bounds, opt.nx, opt.ny), "heatmaps",
                  {{"subject", "guesses"}, {"system", std::string(to_string(sys))}});
    }
  }

  for (System sys : kSystems) {
    ConditionFilter f;
    f.system = sys;
    const auto samples = knn_samples(sessions, opt.attribution, f);
    if (samples.empty()) continue;
    bundle.grid("knn_" + std::string(to_string(sys)) + ".csv",
                knn_score_map(samples, opt.k, opt.bounds, opt.nx, opt.ny), "knn_map",
                {{"system", std::string(to_string(sys))},
                 {"k", opt.k},
                 {"attribution", opt.attribution == KnnAttribution::Source ? "source" : "guess"}});
  }

  {
    auto out = bundle.open("learning_slopes.csv", "slope_table", "learning",
                           {{"improving_threshold", kImprovingSlope}});
    out << "participant,system,slope,intercept,n,improving\n";
    for (const auto& s : sessions) {
      for (System sys : kSystems) {
        std::vector<std::pair<int, double>> ordered;
        for (const auto& row : s.trials) {
          if (row.system == sys) ordered.emplace_back(row.trial, row.score);
        }
        if (ordered.size() < 2) continue;
        std::sort(ordered.begin(), ordered.end());
        std::vector<double> y;
        for (const auto& [trial, score] : ordered) y.push_back(score);
        const LearningFit fit = learning_slope(y);
        out << csv::join({s.participant_id, std::string(to_string(sys)), csv::format(fit.slope),
                          csv::format(fit.intercept), csv::format(static_cast<long long>(fit.n)),
                          fit.improving() ? "1" : "0"})
            << '\n';
      }
    }
    // Per-trial scores behind each regression.
    auto pts = bundle.open("learning_points.csv", "slope_points", "learning");
    pts << "participant,system,order,trial,score\n";
    for (const auto& s : sessions) {
      for (System sys : kSystems) {
        int order = 0;
        std::vector<const SessionLogRow*> rows;
        for (const auto& row : s.trials) {
          if (row.system == sys) rows.push_back(&row);
        }
        std::sort(rows.begin(), rows.end(),
                  [](const SessionLogRow* a, const SessionLogRow* b) { return a->trial < b->trial; });
        for (const auto* row : rows) {
          pts << csv::join({s.participant_id, std::string(to_string(sys)), csv::format(order++),
                            csv::format(row->trial), csv::format(row->score)})
              << '\n';
        }
      }
    }
  }

  for (Tracker tr : {Tracker::HMD, Tracker::RightHand}) {
    auto out = bundle.open("curves_" + std::string(to_string(tr)) + ".csv", "time_curve",
                           "distance_over_time",
                           {{"tracker", std::string(to_string(tr))}, {"bins", opt.curve_bins}});
    out << "system,bin,u,mean_distance,trials\n";
    for (System sys : kSystems) {
      ConditionFilter f;
      f.system = sys;
      TimeCurve c;
      try {
        c = normalized_time_curves(sessions, tr, opt.curve_bins, f);
      } catch (const InsufficientData&) {
        continue;
      }
      for (int b = 0; b < opt.curve_bins; ++b) {
        const auto i = static_cast<std::size_t>(b);
        out << csv::join({std::string(to_string(sys)), csv::format(b),
                          csv::format((b + 0.5) / opt.curve_bins), fmt_or_empty(c.mean[i]),
                          csv::format(static_cast<long long>(c.trials[i]))})
            << '\n';
      }
    }
  }

  // Head paths between onset and guess, one file per participant.
  for (const auto& s : sessions) {
    auto out = bundle.open("paths/" + s.participant_id + ".csv", "search_paths", "search_paths",
                           {{"participant", s.participant_id}});
    out << "trial,system,movement,u,x,y,target_x,target_y,guess_x,guess_y\n";
    for (std::size_t i = 0; i < s.trials.size() && i < s.tracking.size(); ++i) {
      const auto& row = s.trials[i];
      const double t0 = row.onset_time;
      const double t1 = row.onset_time + row.guess_time;
      if (!(t1 > t0)) continue;
      const Vec2 target = row.target();
      for (const auto& p : s.tracking[i].hmd) {
        if (p.t < t0 - 1e-9 || p.t > t1 + 1e-9) continue;
        out << csv::join({csv::format(row.trial), std::string(to_string(row.system)),
                          std::string(to_string(row.movement)),
                          csv::format(std::clamp((p.t - t0) / (t1 - t0), 0.0, 1.0)),
                          csv::format(p.position.x()), csv::format(p.position.y()),
                          csv::format(target.x()), csv::format(target.y()),
                          csv::format(row.guess.x()), csv::format(row.guess.y())})
            << '\n';
      }
    }
  }

  nlohmann::json meta;
  meta["participants"] = nlohmann::json::array();
  for (const auto& s : sessions) meta["participants"].push_back(s.participant_id);
  meta["grid"] = {{"x_min", opt.bounds.min.x()}, {"y_min", opt.bounds.min.y()},
                  {"x_max", opt.bounds.max.x()}, {"y_max", opt.bounds.max.y()},
                  {"nx", opt.nx}, {"ny", opt.ny}};
  return bundle.finish(std::move(meta));
}

}  // namespace wfslab
