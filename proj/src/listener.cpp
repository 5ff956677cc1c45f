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

#include "wfslab/listener.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <Eigen/Dense>

#include "wfslab/errors.hpp"

namespace wfslab {

namespace {

double max_itd(const ListenerState& state, double c) { return state.ear_separation / c; }

double to_db(double amplitude) {
  return amplitude > 0.0 ? 20.0 * std::log10(amplitude) : -std::numeric_limits<double>::infinity();
}

struct EarReading {
  double arrival = std::numeric_limits<double>::infinity();
  double amplitude = 0.0;
};

EarReading first_arrival(const DrivingSet& driving, const SpeakerArray& array, const Vec3& ear,
                         double c) {
  EarReading out;
  for (std::size_t n = 0; n < driving.entries.size(); ++n) {
    const auto& e = driving.entries[n];
    if (!e.active) continue;
    const double d = (ear - array.speakers[n].position).norm();
    if (d < kSingularityRadius) {
      throw SingularityError("ear coincides with speaker " + std::to_string(n));
    }
    out.arrival = std::min(out.arrival, e.delay + d / c);
    out.amplitude += e.gain / d;
  }
  return out;
}

}  // namespace

EarPositions ear_positions(const ListenerState& state) {
  const Vec2 r = state.right() * (state.ear_separation / 2);
  const Vec3 offset(r.x(), r.y(), 0.0);
  return {state.head_position - offset, state.head_position + offset};
}

BinauralCue binaural_cues_wfs(const DrivingSet& driving, const SpeakerArray& array,
                              const ListenerState& state, const CueOptions& options) {
  if (driving.active_count() == 0) throw InvalidArgument("driving set has no active speaker");
  const double c = options.speed_of_sound;
  const auto ears = ear_positions(state);
  const auto left = first_arrival(driving, array, ears.left, c);
  const auto right = first_arrival(driving, array, ears.right, c);

  BinauralCue cue;
  cue.ild = to_db(right.amplitude) - to_db(left.amplitude);
  if (options.itd_model == ItdModel::FirstArrival) {
    cue.itd = right.arrival - left.arrival;
  } else {
    const double f = options.analysis_frequency;
    const auto pl = synthesize_pressure(driving, array, ears.left, f, c);
    const auto pr = synthesize_pressure(driving, array, ears.right, f, c);
    cue.itd = -std::arg(pr * std::conj(pl)) / (2.0 * kPi * f);
  }
  const double bound = max_itd(state, c);
  cue.itd = std::clamp(cue.itd, -bound, bound);
  return cue;
}

double stereo_gain(double distance, const StereoRolloff& rolloff) {
  if (distance <= rolloff.min_distance) return 1.0;
  if (distance <= rolloff.max_distance) return rolloff.min_distance / distance;
  return rolloff.min_distance / rolloff.max_distance;
}

BinauralCue binaural_cues_stereo(const Vec3& source, const ListenerState& state,
                                 const StereoRolloff& rolloff, double c) {
  const auto ears = ear_positions(state);
  const double dl = (source - ears.left).norm();
  const double dr = (source - ears.right).norm();
  if (dl < kSingularityRadius || dr < kSingularityRadius) {
    throw SingularityError("stereo source coincides with an ear");
  }
  BinauralCue cue;
  const double bound = max_itd(state, c);
  cue.itd = std::clamp((dr - dl) / c, -bound, bound);
  cue.ild = to_db(stereo_gain(dr, rolloff)) - to_db(stereo_gain(dl, rolloff));
  return cue;
}

LocalizationEstimate bearing_from_itd(const BinauralCue& cue, const ListenerState& state,
                                      double c) {
  const double arg = c * (-cue.itd) / state.ear_separation;
  const double clamped = std::clamp(arg, -1.0, 1.0);
  LocalizationEstimate est;
  est.bearing = wrap_angle(state.yaw - std::asin(clamped));
  est.confidence = std::clamp(1.0 - std::abs(arg - clamped), 0.0, 1.0);
  est.origin = horizontal(state.head_position);
  return est;
}

LocalizationEstimate parallax_triangulate(std::span<const BearingObservation> observations,
                                          double min_baseline) {
  if (observations.size() < 2) throw InvalidArgument("parallax needs at least two observations");

  double baseline = 0.0;
  double spread = 0.0;
  for (std::size_t i = 0; i < observations.size(); ++i) {
    for (std::size_t j = i + 1; j < observations.size(); ++j) {
      baseline = std::max(baseline, (horizontal(observations[i].position) -
                                     horizontal(observations[j].position)).norm());
      // Lines, not rays: directions are compared modulo pi.
      const double d = std::abs(std::remainder(observations[i].bearing - observations[j].bearing, kPi));
      spread = std::max(spread, d);
    }
  }
  if (baseline < min_baseline) {
    throw DegenerateParallax("observer baseline below " + std::to_string(min_baseline) + " m");
  }
  if (spread < kMinParallaxSpread) throw DegenerateParallax("bearing rays are parallel");

  Eigen::Matrix2d a = Eigen::Matrix2d::Zero();
  Eigen::Vector2d b = Eigen::Vector2d::Zero();
  for (const auto& obs : observations) {
    const Vec2 d = heading_vector(obs.bearing);
    const Eigen::Matrix2d proj = Eigen::Matrix2d::Identity() - d * d.transpose();
    a += proj;
    b += proj * horizontal(obs.position);
  }
  const Vec2 p = a.ldlt().solve(b);

  double sq = 0.0;
  for (const auto& obs : observations) {
    const Vec2 d = heading_vector(obs.bearing);
    const Vec2 rel = p - horizontal(obs.position);
    sq += (rel - d * d.dot(rel)).squaredNorm();
  }
  const double rms = std::sqrt(sq / static_cast<double>(observations.size()));

  const Vec2 origin = horizontal(observations.back().position);
  LocalizationEstimate est;
  est.origin = origin;
  est.distance = (p - origin).norm();
  est.bearing = *est.distance > 0.0 ? heading_of(p - origin) : observations.back().bearing;
  // 5 cm of rms ray miss halves the confidence.
  est.confidence = 1.0 / (1.0 + rms / 0.05);
  return est;
}

}  // namespace wfslab
