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

#include <optional>
#include <span>
#include <utility>

#include "wfslab/geometry.hpp"
#include "wfslab/wavefield.hpp"

namespace wfslab {

struct ListenerState {
  Vec3 head_position = Vec3::Zero();
  double yaw = 0.0;  // 0 faces +y, counter-clockwise positive
  double ear_separation = 0.18;

  [[nodiscard]] Vec2 facing() const { return heading_vector(yaw); }
  [[nodiscard]] Vec2 right() const { return {std::cos(yaw), std::sin(yaw)}; }
};

// itd = t_right - t_left, so a source on the right gives a negative itd.
// ild = L_right - L_left in dB.
struct BinauralCue {
  double itd = 0.0;
  double ild = 0.0;
};

struct StereoRolloff {
  enum class Model { Logarithmic };
  double min_distance = 0.1;
  double max_distance = 650.0;
  Model model = Model::Logarithmic;
};

struct LocalizationEstimate {
  double bearing = 0.0;  // world heading
  std::optional<double> distance;
  double confidence = 0.0;
  Vec2 origin = Vec2::Zero();  // where the bearing was taken

  [[nodiscard]] std::optional<Vec2> point() const {
    if (!distance) return std::nullopt;
    return origin + heading_vector(bearing) * *distance;
  }
};

struct EarPositions {
  Vec3 left;
  Vec3 right;
};

EarPositions ear_positions(const ListenerState& state);

enum class ItdModel {
  FirstArrival,     // earliest wavefront over the active speakers
  InterauralPhase,  // phase difference of the synthesized field at one low frequency
};

struct CueOptions {
  double speed_of_sound = kSpeedOfSound;
  ItdModel itd_model = ItdModel::InterauralPhase;
  double analysis_frequency = 700.0;
};

BinauralCue binaural_cues_wfs(const DrivingSet& driving, const SpeakerArray& array,
                              const ListenerState& state, const CueOptions& options = {});

double stereo_gain(double distance, const StereoRolloff& rolloff);

BinauralCue binaural_cues_stereo(const Vec3& source, const ListenerState& state,
                                 const StereoRolloff& rolloff, double c = kSpeedOfSound);

LocalizationEstimate bearing_from_itd(const BinauralCue& cue, const ListenerState& state,
                                      double c = kSpeedOfSound);

struct BearingObservation {
  Vec3 position = Vec3::Zero();
  double bearing = 0.0;
};

// Parallel rays are those whose line directions differ by less than this.
inline constexpr double kMinParallaxSpread = kPi / 360.0;

/// Least-squares intersection of bearing lines in the horizontal plane.
LocalizationEstimate parallax_triangulate(std::span<const BearingObservation> observations,
                                          double min_baseline);

}  // namespace wfslab
