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

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Core>

#include "wfslab/logging.hpp"

namespace wfslab {

enum class GridKind { Density, KnnScore };

std::string_view to_string(GridKind k);

// values(ix, iy) covers [x_min + ix w, x_min + (ix+1) w] x [y_min + iy h, ...].
struct ScoreGrid {
  Rect bounds;
  int nx = 0;
  int ny = 0;
  Eigen::MatrixXd values;
  GridKind kind = GridKind::Density;
  long long overflow = 0;  // density points that fell outside the bounds

  [[nodiscard]] Vec2 cell_center(int ix, int iy) const;
  [[nodiscard]] double mass() const { return values.sum(); }
};

// Conjunction of optional condition predicates.
struct ConditionFilter {
  std::optional<System> system;
  std::optional<Environment> environment;
  std::optional<Sound> sound;
  std::optional<Movement> movement;

  [[nodiscard]] bool matches(const SessionLogRow& row) const;
};

enum class Dimension { Participant, System, Environment, Sound, Movement };

struct ScoreGroup {
  std::vector<std::string> key;  // one label per grouping dimension
  double mean_score = 0.0;
  double mean_guess_time = 0.0;
  std::size_t n = 0;
};

struct ScoreTable {
  std::vector<Dimension> group_by;
  std::vector<ScoreGroup> groups;
  std::vector<std::string> warnings;  // combinations without any trial
};

/// Means of score and guess time per group; groups are ordered by their labels'
/// enum order (participants by first appearance).
ScoreTable mean_scores(const std::vector<SessionLog>& sessions,
                       const std::vector<Dimension>& group_by);

/// Share of trials scoring strictly below `threshold`. Throws InsufficientData
/// when the filter selects nothing.
double fraction_below(const std::vector<SessionLog>& sessions, double threshold,
                      const ConditionFilter& filter = {});

/// Each point lands in exactly one cell; points on a shared cell edge go to the
/// lower index. Points outside the bounds are only counted in `overflow`.
ScoreGrid density_heatmap(const std::vector<Vec2>& points, const Rect& bounds, int nx, int ny);

inline constexpr double kKnnEpsilon = 1e-6;  // m

struct ScoredPoint {
  Vec2 position = Vec2::Zero();
  double score = 0.0;
};

/// Inverse-distance weighted mean over the k nearest samples of each cell
/// center; k is clamped to the sample count, distance ties go to the earlier sample.
ScoreGrid knn_score_map(const std::vector<ScoredPoint>& samples, int k, const Rect& bounds,
                        int nx, int ny);

enum class KnnAttribution { Source, Guess };

/// Samples for the score map: each trial's score at its source (or guess) position.
std::vector<ScoredPoint> knn_samples(const std::vector<SessionLog>& sessions,
                                     KnnAttribution attribution,
                                     const ConditionFilter& filter = {});

inline constexpr double kImprovingSlope = -0.1;  // m per trial

struct LearningFit {
  double slope = 0.0;
  double intercept = 0.0;
  std::size_t n = 0;
  [[nodiscard]] bool improving() const { return slope < kImprovingSlope; }
};

/// Ordinary least squares against trial order 0..n-1.
LearningFit learning_slope(const std::vector<double>& scores_chronological);

enum class Tracker { HMD, RightHand };

std::string_view to_string(Tracker t);

struct TimeCurve {
  std::vector<double> mean;        // NaN where no trial contributes
  std::vector<std::size_t> trials; // contributing trials per bin
  std::size_t trial_count = 0;
};

/// Distance to target over time rescaled to [0, 1] between onset and guess.
/// Each trial contributes its own per-bin mean; bins are averaged across trials.
TimeCurve normalized_time_curves(const std::vector<SessionLog>& sessions, Tracker tracker,
                                 int bins, const ConditionFilter& filter = {});

struct AnalysisOptions {
  Rect bounds = Rect::centered_square(Vec2::Zero(), 2.0);
  int nx = 40;
  int ny = 40;
  int k = 15;
  KnnAttribution attribution = KnnAttribution::Source;
  double threshold = 0.2;  // m
  int curve_bins = 20;
};

/// Writes the bundle described in docs/analysis-outputs.md and returns the
/// files written, relative to `out_dir`.
std::vector<std::string> export_analysis(const std::vector<SessionLog>& sessions,
                                         const std::filesystem::path& out_dir,
                                         const AnalysisOptions& options = {});

/// Grid files: "# key=value" metadata lines, then ny rows of nx values from y_min upward.
void write_grid_csv(std::ostream& out, const ScoreGrid& grid);
ScoreGrid read_grid_csv(std::istream& in, const std::string& origin = "<grid>");

}  // namespace wfslab
