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

#include <complex>
#include <iosfwd>
#include <optional>
#include <span>
#include <vector>

#include "wfslab/errors.hpp"
#include "wfslab/geometry.hpp"

namespace wfslab {

// Sides are numbered counter-clockwise starting at the southern edge:
// 0 = south (-y), 1 = east (+x), 2 = north (+y), 3 = west (-x).
inline constexpr int kNumSides = 4;

struct Speaker {
  Vec3 position;
  Vec3 inward_normal;
  int side_id = 0;
  int index_on_side = 0;
};

struct SpeakerArray {
  std::vector<Speaker> speakers;
  double side_length = 2.0;
  double height = 0.0;
  Vec3 center = Vec3::Zero();
  int speakers_per_side = 16;

  [[nodiscard]] Rect footprint() const {
    return Rect::centered_square(horizontal(center), side_length);
  }
  [[nodiscard]] double spacing() const { return side_length / speakers_per_side; }
  [[nodiscard]] Vec2 side_midpoint(int side) const;
  [[nodiscard]] Vec2 side_normal(int side) const;
  /// Alias frequency c / (2 * spacing).
  [[nodiscard]] double aliasing_frequency(double c = kSpeedOfSound) const {
    return c / (2.0 * spacing());
  }
};

SpeakerArray build_square_array(double side_length, int speakers_per_side, double height,
                                const Vec3& center);

enum class SourceKind { Exterior, Focused };

struct VirtualSource {
  Vec3 position = Vec3::Zero();
  SourceKind kind = SourceKind::Exterior;
};

VirtualSource classify_source(const Vec3& source_position, const SpeakerArray& array);

struct DrivingEntry {
  bool active = false;
  double delay = 0.0;  // s
  double gain = 0.0;
};

struct DrivingSet {
  std::vector<DrivingEntry> entries;
  Vec3 reference_point = Vec3::Zero();
  std::optional<int> subarray;  // rendering side for focused sources

  [[nodiscard]] std::size_t active_count() const;
  DrivingSet& operator*=(double factor);
};

/// Union of two driving sets with disjoint active speakers.
DrivingSet combine_disjoint(const DrivingSet& a, const DrivingSet& b);

DrivingSet single_speaker_driving(const SpeakerArray& array, std::size_t speaker,
                                  double gain = 1.0, double delay = 0.0);

enum class RenderMode { Static, UserDependent };

// How a focused source is rendered when the listener position is not used.
struct StaticSubarray {
  enum class Rule { Fixed, NearestSide };
  Rule rule = Rule::NearestSide;
  int side = 0;

  static StaticSubarray fixed(int side) { return {Rule::Fixed, side}; }
  static StaticSubarray nearest() { return {Rule::NearestSide, 0}; }
};

struct DrivingOptions {
  double speed_of_sound = kSpeedOfSound;
  // Fraction of each active side covered by one half-cosine ramp.
  double taper_fraction = 0.2;
  double half_aperture = deg_to_rad(60.0);
  // Frequency at which user-dependent level normalization is exact.
  double reference_frequency = 500.0;
  std::optional<StaticSubarray> static_subarray;
};

DrivingSet driving_functions(const VirtualSource& source, const SpeakerArray& array,
                             const std::optional<Vec3>& listener, RenderMode mode,
                             const DrivingOptions& options = {});

/// Half-cosine edge window for a side of n speakers.
std::vector<double> edge_taper(int n, double taper_fraction);

struct FieldSample {
  Vec3 point = Vec3::Zero();
  std::complex<double> pressure{0.0, 0.0};
};

inline constexpr double kSingularityRadius = 1e-3;

/// Monochromatic superposition of the active speakers' spherical waves:
///   p(x) = sum_n g_n exp(-i 2 pi f (tau_n + |x - x_n| / c)) / |x - x_n|
template <typename Scalar = double>
std::complex<Scalar> synthesize_pressure(const DrivingSet& driving, const SpeakerArray& array,
                                         const Point3<Scalar>& point, Scalar frequency,
                                         Scalar c = Scalar(kSpeedOfSound)) {
  if (!(frequency > Scalar(0))) throw InvalidArgument("frequency must be positive");
  const Scalar omega = Scalar(2) * Scalar(kPi) * frequency;
  std::complex<Scalar> sum(0, 0);
  for (std::size_t n = 0; n < driving.entries.size(); ++n) {
    const auto& e = driving.entries[n];
    if (!e.active) continue;
    const Scalar r = (point - array.speakers[n].position.template cast<Scalar>()).norm();
    if (r < Scalar(kSingularityRadius)) {
      throw SingularityError("observation point coincides with speaker " + std::to_string(n));
    }
    const Scalar phase = -omega * (Scalar(e.delay) + r / c);
    sum += std::polar(Scalar(e.gain) / r, phase);
  }
  return sum;
}

template <typename Scalar = double>
std::complex<Scalar> ideal_pressure(const Point3<Scalar>& source, const Point3<Scalar>& point,
                                    Scalar frequency, Scalar c = Scalar(kSpeedOfSound)) {
  if (!(frequency > Scalar(0))) throw InvalidArgument("frequency must be positive");
  const Scalar r = (point - source).norm();
  if (r < Scalar(kSingularityRadius)) {
    throw SingularityError("observation point coincides with the virtual source");
  }
  return std::polar(Scalar(1) / r, -Scalar(2) * Scalar(kPi) * frequency * r / c);
}

FieldSample synthesize_field(const DrivingSet& driving, const SpeakerArray& array,
                             const Vec3& point, double frequency, double c = kSpeedOfSound);

FieldSample ideal_field(const VirtualSource& source, const Vec3& point, double frequency,
                        double c = kSpeedOfSound);

/// Regular grid of points at a fixed height, x-major within each row of y.
struct GridSpec {
  Rect bounds;
  int nx = 21;
  int ny = 21;
  double height = 0.0;

  [[nodiscard]] std::vector<Vec3> points() const;
};

struct ReconstructionResult {
  double error = 0.0;
  std::complex<double> scale{1.0, 0.0};
  std::vector<std::complex<double>> synthesized;
  std::vector<std::complex<double>> ideal;
};

/// Normalized RMS error after the best complex rescaling of the synthesized field.
ReconstructionResult reconstruction_error_detail(const VirtualSource& source,
                                                 const SpeakerArray& array,
                                                 const DrivingSet& driving,
                                                 std::span<const Vec3> zone, double frequency,
                                                 double c = kSpeedOfSound);

double reconstruction_error(const VirtualSource& source, const SpeakerArray& array,
                            const DrivingSet& driving, std::span<const Vec3> zone,
                            double frequency, double c = kSpeedOfSound);

struct ValidZone {
  Vec3 apex = Vec3::Zero();
  Vec2 direction{0.0, 1.0};
  double half_aperture = deg_to_rad(60.0);

  [[nodiscard]] bool contains(const Vec3& q) const;
};

ValidZone valid_zone(const VirtualSource& source, int subarray_side, const SpeakerArray& array,
                     double half_aperture);

int select_subarray(const VirtualSource& source, const Vec3& listener, const SpeakerArray& array,
                    double half_aperture);

/// Side whose line lies closest to the horizontal source position; ties go to the lowest id.
int nearest_side(const Vec3& position, const SpeakerArray& array);

/// Error map rows: x, y, |p_syn|, |p_ideal|, error contribution, with grid
/// metadata in leading comment lines.
void write_error_map_csv(std::ostream& out, const GridSpec& grid,
                         const ReconstructionResult& result, double frequency);

}  // namespace wfslab
