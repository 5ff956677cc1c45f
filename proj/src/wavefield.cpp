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

#include "wfslab/wavefield.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>

#include "wfslab/csv.hpp"

namespace wfslab {

namespace {

// Start corner offset and walking direction of each side, counter-clockwise.
struct SideFrame {
  Vec2 start;
  Vec2 along;
  Vec2 normal;
};

SideFrame side_frame(int side, double half) {
  switch (side) {
    case 0: return {{-half, -half}, {1, 0}, {0, 1}};
    case 1: return {{half, -half}, {0, 1}, {-1, 0}};
    case 2: return {{half, half}, {-1, 0}, {0, -1}};
    case 3: return {{-half, half}, {0, -1}, {1, 0}};
    default: throw InvalidArgument("side id out of range: " + std::to_string(side));
  }
}

void check_aperture(double half_aperture) {
  if (!(half_aperture > 0.0 && half_aperture <= kPi / 2 + 1e-15)) {
    throw InvalidArgument("half aperture must lie in (0, pi/2]");
  }
}

void apply_side_tapers(DrivingSet& set, const SpeakerArray& array, double taper_fraction) {
  const int per_side = array.speakers_per_side;
  for (int side = 0; side < kNumSides; ++side) {
    const int base = side * per_side;
    int i = 0;
    while (i < per_side) {
      if (!set.entries[base + i].active) {
        ++i;
        continue;
      }
      int j = i;
      while (j < per_side && set.entries[base + j].active) ++j;
      const auto window = edge_taper(j - i, taper_fraction);
      for (int k = i; k < j; ++k) set.entries[base + k].gain *= window[k - i];
      i = j;
    }
  }
}

DrivingSet exterior_driving(const VirtualSource& source, const SpeakerArray& array,
                            const DrivingOptions& options) {
  DrivingSet set;
  set.entries.resize(array.speakers.size());
  for (std::size_t n = 0; n < array.speakers.size(); ++n) {
    const auto& spk = array.speakers[n];
    const Vec3 v = spk.position - source.position;
    const double dot = spk.inward_normal.dot(v);
    if (!(dot > 0.0)) continue;
    const double r = v.norm();
    auto& e = set.entries[n];
    e.active = true;
    e.delay = r / options.speed_of_sound;
    e.gain = (dot / r) / std::sqrt(r);
  }
  return set;
}

DrivingSet focused_driving(const VirtualSource& source, const SpeakerArray& array, int side,
                           const DrivingOptions& options) {
  DrivingSet set;
  set.entries.resize(array.speakers.size());
  set.subarray = side;
  double r_max = 0.0;
  for (std::size_t n = 0; n < array.speakers.size(); ++n) {
    const auto& spk = array.speakers[n];
    if (spk.side_id != side) continue;
    const Vec3 v = source.position - spk.position;
    const double dot = spk.inward_normal.dot(v);
    if (!(dot > 0.0)) continue;
    const double r = v.norm();
    auto& e = set.entries[n];
    e.active = true;
    e.delay = r;  // distance for now, converted to a delay below
    e.gain = (dot / r) / std::sqrt(r);
    r_max = std::max(r_max, r);
  }
  for (auto& e : set.entries) {
    if (e.active) e.delay = (r_max - e.delay) / options.speed_of_sound;
  }
  return set;
}

}  // namespace

Vec2 SpeakerArray::side_midpoint(int side) const {
  const auto f = side_frame(side, side_length / 2);
  return horizontal(center) + f.start + f.along * (side_length / 2);
}

Vec2 SpeakerArray::side_normal(int side) const { return side_frame(side, side_length / 2).normal; }

SpeakerArray build_square_array(double side_length, int speakers_per_side, double height,
                                const Vec3& center) {
  if (!(side_length > 0.0) || !std::isfinite(side_length)) {
    throw InvalidArgument("side length must be positive");
  }
  if (speakers_per_side < 2) throw InvalidArgument("need at least two speakers per side");
  if (!std::isfinite(height) || !center.allFinite()) {
    throw InvalidArgument("array height and center must be finite");
  }

  SpeakerArray array;
  array.side_length = side_length;
  array.height = height;
  array.center = {center.x(), center.y(), height};
  array.speakers_per_side = speakers_per_side;
  array.speakers.reserve(static_cast<std::size_t>(kNumSides * speakers_per_side));

  const double half = side_length / 2;
  const double spacing = side_length / speakers_per_side;
  const Vec2 c = horizontal(center);
  for (int side = 0; side < kNumSides; ++side) {
    const auto f = side_frame(side, half);
    for (int i = 0; i < speakers_per_side; ++i) {
      const Vec2 p = c + f.start + f.along * ((i + 0.5) * spacing);
      array.speakers.push_back(
          {lift(p, height), Vec3(f.normal.x(), f.normal.y(), 0.0), side, i});
    }
  }
  return array;
}

VirtualSource classify_source(const Vec3& source_position, const SpeakerArray& array) {
  const bool inside = array.footprint().strictly_contains(horizontal(source_position));
  return {source_position, inside ? SourceKind::Focused : SourceKind::Exterior};
}

std::size_t DrivingSet::active_count() const {
  return static_cast<std::size_t>(
      std::count_if(entries.begin(), entries.end(), [](const auto& e) { return e.active; }));
}

DrivingSet& DrivingSet::operator*=(double factor) {
  for (auto& e : entries) e.gain *= factor;
  return *this;
}

DrivingSet combine_disjoint(const DrivingSet& a, const DrivingSet& b) {
  if (a.entries.size() != b.entries.size()) {
    throw InvalidArgument("driving sets address different arrays");
  }
  DrivingSet out = a;
  for (std::size_t n = 0; n < b.entries.size(); ++n) {
    if (!b.entries[n].active) continue;
    if (out.entries[n].active) {
      throw InvalidArgument("speaker " + std::to_string(n) + " is active in both sets");
    }
    out.entries[n] = b.entries[n];
  }
  return out;
}

DrivingSet single_speaker_driving(const SpeakerArray& array, std::size_t speaker, double gain,
                                  double delay) {
  if (speaker >= array.speakers.size()) throw InvalidArgument("speaker index out of range");
  DrivingSet set;
  set.entries.resize(array.speakers.size());
  set.entries[speaker] = {true, delay, gain};
  return set;
}

std::vector<double> edge_taper(int n, double taper_fraction) {
  std::vector<double> w(static_cast<std::size_t>(std::max(n, 0)), 1.0);
  if (n < 2 || taper_fraction <= 0.0) return w;
  int ramp = std::max(1, static_cast<int>(std::lround(taper_fraction * n)));
  ramp = std::min(ramp, n / 2);
  for (int i = 0; i < ramp; ++i) {
    const double v = 0.5 * (1.0 - std::cos(kPi * (i + 0.5) / ramp));
    w[static_cast<std::size_t>(i)] = v;
    w[static_cast<std::size_t>(n - 1 - i)] = v;
  }
  return w;
}

DrivingSet driving_functions(const VirtualSource& source, const SpeakerArray& array,
                             const std::optional<Vec3>& listener, RenderMode mode,
                             const DrivingOptions& options) {
  DrivingSet set;
  if (source.kind == SourceKind::Exterior) {
    set = exterior_driving(source, array, options);
  } else {
    int side = 0;
    if (mode == RenderMode::UserDependent) {
      if (!listener) throw InvalidArgument("user-dependent focused rendering needs a listener");
      side = select_subarray(source, *listener, array, options.half_aperture);
    } else {
      if (!options.static_subarray) {
        throw ConfigError("no default sub-array configured for focused sources");
      }
      const auto& rule = *options.static_subarray;
      side = rule.rule == StaticSubarray::Rule::Fixed ? rule.side
                                                      : nearest_side(source.position, array);
      if (side < 0 || side >= kNumSides) throw ConfigError("default sub-array out of range");
    }
    set = focused_driving(source, array, side, options);
  }
  if (set.active_count() == 0) throw GeometryError("no speaker can render this source");
  apply_side_tapers(set, array, options.taper_fraction);
  set.reference_point = listener.value_or(array.center);

  if (mode == RenderMode::UserDependent && listener) {
    const double f = options.reference_frequency;
    const double c = options.speed_of_sound;
    const double syn = std::abs(synthesize_pressure(set, array, *listener, f, c));
    const double ideal = std::abs(ideal_pressure(source.position, *listener, f, c));
    if (!(syn > 0.0)) throw GeometryError("synthesized field vanishes at the listener");
    set *= ideal / syn;
  }
  return set;
}

FieldSample synthesize_field(const DrivingSet& driving, const SpeakerArray& array,
                             const Vec3& point, double frequency, double c) {
  return {point, synthesize_pressure(driving, array, point, frequency, c)};
}

FieldSample ideal_field(const VirtualSource& source, const Vec3& point, double frequency,
                        double c) {
  return {point, ideal_pressure(source.position, point, frequency, c)};
}

std::vector<Vec3> GridSpec::points() const {
  if (nx < 1 || ny < 1) throw InvalidArgument("grid needs at least one point per axis");
  std::vector<Vec3> pts;
  pts.reserve(static_cast<std::size_t>(nx) * ny);
  for (int j = 0; j < ny; ++j) {
    const double y = ny == 1 ? bounds.center().y() : bounds.min.y() + bounds.height() * j / (ny - 1);
    for (int i = 0; i < nx; ++i) {
      const double x =
          nx == 1 ? bounds.center().x() : bounds.min.x() + bounds.width() * i / (nx - 1);
      pts.emplace_back(x, y, height);
    }
  }
  return pts;
}

ReconstructionResult reconstruction_error_detail(const VirtualSource& source,
                                                 const SpeakerArray& array,
                                                 const DrivingSet& driving,
                                                 std::span<const Vec3> zone, double frequency,
                                                 double c) {
  if (zone.empty()) throw InvalidArgument("evaluation zone is empty");
  const Rect footprint = array.footprint();
  ReconstructionResult out;
  out.synthesized.reserve(zone.size());
  out.ideal.reserve(zone.size());
  for (const auto& p : zone) {
    if (!footprint.contains(horizontal(p))) {
      throw InvalidArgument("evaluation point lies outside the array");
    }
    out.synthesized.push_back(synthesize_pressure(driving, array, p, frequency, c));
    out.ideal.push_back(ideal_pressure(source.position, p, frequency, c));
  }

  double ideal_energy = 0.0;
  double syn_energy = 0.0;
  std::complex<double> cross(0.0, 0.0);
  for (std::size_t i = 0; i < zone.size(); ++i) {
    ideal_energy += std::norm(out.ideal[i]);
    syn_energy += std::norm(out.synthesized[i]);
    cross += std::conj(out.synthesized[i]) * out.ideal[i];
  }
  if (!(ideal_energy > 0.0)) throw DegenerateInput("ideal field is zero over the zone");

  out.scale = syn_energy > 0.0 ? cross / syn_energy : std::complex<double>(0.0, 0.0);
  double residual = 0.0;
  for (std::size_t i = 0; i < zone.size(); ++i) {
    residual += std::norm(out.scale * out.synthesized[i] - out.ideal[i]);
  }
  out.error = std::clamp(std::sqrt(residual / ideal_energy), 0.0, 1.0);
  return out;
}

double reconstruction_error(const VirtualSource& source, const SpeakerArray& array,
                            const DrivingSet& driving, std::span<const Vec3> zone,
                            double frequency, double c) {
  return reconstruction_error_detail(source, array, driving, zone, frequency, c).error;
}

bool ValidZone::contains(const Vec3& q) const {
  const Vec2 v = horizontal(q) - horizontal(apex);
  const double len = v.norm();
  if (len == 0.0) return false;
  const double along = v.dot(direction);
  if (!(along > 0.0)) return false;
  return std::acos(std::clamp(along / len, -1.0, 1.0)) <= half_aperture;
}

ValidZone valid_zone(const VirtualSource& source, int subarray_side, const SpeakerArray& array,
                     double half_aperture) {
  if (source.kind != SourceKind::Focused) {
    throw InvalidArgument("valid zones exist only for focused sources");
  }
  check_aperture(half_aperture);
  const Vec2 from = array.side_midpoint(subarray_side);
  const Vec2 d = horizontal(source.position) - from;
  return {source.position, d.normalized(), half_aperture};
}

int select_subarray(const VirtualSource& source, const Vec3& listener, const SpeakerArray& array,
                    double half_aperture) {
  if (source.kind != SourceKind::Focused) {
    throw InvalidArgument("sub-array selection applies to focused sources");
  }
  const Vec2 offset = horizontal(listener) - horizontal(source.position);
  if (offset.norm() < 0.01) throw NoValidZone("listener coincides with the focused source");
  const Vec2 toward = offset.normalized();

  int best = -1;
  double best_alignment = -2.0;
  for (int side = 0; side < kNumSides; ++side) {
    const auto zone = valid_zone(source, side, array, half_aperture);
    if (!zone.contains(listener)) continue;
    const double alignment = zone.direction.dot(toward);
    if (alignment > best_alignment + 1e-12) {
      best = side;
      best_alignment = alignment;
    }
  }
  if (best < 0) throw NoValidZone("no sub-array places the listener inside its valid zone");
  return best;
}

int nearest_side(const Vec3& position, const SpeakerArray& array) {
  int best = 0;
  double best_distance = INFINITY;
  for (int side = 0; side < kNumSides; ++side) {
    const Vec2 rel = horizontal(position) - array.side_midpoint(side);
    const double distance = std::abs(rel.dot(array.side_normal(side)));
    if (distance < best_distance - 1e-12) {
      best = side;
      best_distance = distance;
    }
  }
  return best;
}

void write_error_map_csv(std::ostream& out, const GridSpec& grid,
                         const ReconstructionResult& result, double frequency) {
  const auto pts = grid.points();
  double ideal_energy = 0.0;
  for (const auto& p : result.ideal) ideal_energy += std::norm(p);
  out << "# x_min=" << csv::format(grid.bounds.min.x()) << '\n'
      << "# y_min=" << csv::format(grid.bounds.min.y()) << '\n'
      << "# x_max=" << csv::format(grid.bounds.max.x()) << '\n'
      << "# y_max=" << csv::format(grid.bounds.max.y()) << '\n'
      << "# nx=" << grid.nx << '\n'
      << "# ny=" << grid.ny << '\n'
      << "# height=" << csv::format(grid.height) << '\n'
      << "# frequency=" << csv::format(frequency) << '\n'
      << "# error=" << csv::format(result.error) << '\n'
      << "x,y,abs_syn,abs_ideal,error_contribution\n";
  for (std::size_t i = 0; i < pts.size(); ++i) {
    const double contribution =
        std::norm(result.scale * result.synthesized[i] - result.ideal[i]) / ideal_energy;
    out << csv::format(pts[i].x()) << ',' << csv::format(pts[i].y()) << ','
        << csv::format(std::abs(result.synthesized[i])) << ','
        << csv::format(std::abs(result.ideal[i])) << ',' << csv::format(contribution) << '\n';
  }
}

}  // namespace wfslab
