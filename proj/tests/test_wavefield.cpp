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

#include <doctest.h>

#include <cmath>
#include <complex>
#include <sstream>

#include "wfslab/wavefield.hpp"

using namespace wfslab;

namespace {

const SpeakerArray kArray = build_square_array(2.0, 16, 1.6, Vec3::Zero());

std::vector<Vec3> central_grid(int n = 21) {
  return GridSpec{Rect::centered_square(Vec2::Zero(), 1.0), n, n, 1.6}.points();
}

// Residual after the best complex gain, from the Cauchy-Schwarz gap:
// min_a |a s - p|^2 / |p|^2 = 1 - |<s,p>|^2 / (|s|^2 |p|^2).
double oracle_error(const std::vector<std::complex<double>>& s,
                    const std::vector<std::complex<double>>& p) {
  Eigen::VectorXcd vs(s.size()), vp(p.size());
  for (std::size_t i = 0; i < s.size(); ++i) {
    vs(i) = s[i];
    vp(i) = p[i];
  }
  const double gap = 1.0 - std::norm(vs.dot(vp)) / (vs.squaredNorm() * vp.squaredNorm());
  return std::sqrt(std::max(gap, 0.0));
}

std::size_t nearest_speaker(const Vec3& p) {
  std::size_t best = 0;
  for (std::size_t n = 1; n < kArray.speakers.size(); ++n) {
    if ((kArray.speakers[n].position - p).norm() < (kArray.speakers[best].position - p).norm()) {
      best = n;
    }
  }
  return best;
}

}  // namespace

TEST_CASE("square array layout") {
  CHECK(kArray.speakers.size() == 64);
  CHECK(kArray.spacing() == doctest::Approx(0.125));
  CHECK(kArray.aliasing_frequency() == doctest::Approx(1372.0));

  const auto& first = kArray.speakers[0];
  CHECK(first.side_id == 0);
  CHECK(first.position.x() == doctest::Approx(-0.9375));
  CHECK(first.position.y() == doctest::Approx(-1.0));
  CHECK(first.position.z() == doctest::Approx(1.6));

  for (const auto& s : kArray.speakers) {
    // Normals point at the center and speakers sit on the footprint edge.
    const Vec3 to_center = kArray.center - s.position;
    CHECK(s.inward_normal.dot(to_center) > 0.0);
    CHECK(std::max(std::abs(s.position.x()), std::abs(s.position.y())) == doctest::Approx(1.0));
  }
  CHECK(kArray.side_midpoint(1).isApprox(Vec2(1, 0)));
  CHECK(kArray.side_normal(2).isApprox(Vec2(0, -1)));

  CHECK_THROWS_AS(build_square_array(0.0, 16, 1.6, Vec3::Zero()), InvalidArgument);
  CHECK_THROWS_AS(build_square_array(2.0, 1, 1.6, Vec3::Zero()), InvalidArgument);
  CHECK_THROWS_AS(build_square_array(2.0, 16, NAN, Vec3::Zero()), InvalidArgument);
}

TEST_CASE("source classification") {
  CHECK(classify_source({0.3, -0.2, 1.6}, kArray).kind == SourceKind::Focused);
  CHECK(classify_source({0.0, -1.5, 1.6}, kArray).kind == SourceKind::Exterior);
  CHECK(classify_source({1.0, 0.0, 1.6}, kArray).kind == SourceKind::Exterior);
}

TEST_CASE("single speaker pressure matches a spherical wave") {
  const auto d = single_speaker_driving(kArray, 5, 0.7, 0.002);
  const Vec3 x(0.1, 0.2, 1.6);
  const double r = (x - kArray.speakers[5].position).norm();
  const double f = 440.0;
  const std::complex<double> expected =
      0.7 / r * std::exp(std::complex<double>(0, -2 * kPi * f * (0.002 + r / kSpeedOfSound)));
  const auto p = synthesize_pressure(d, kArray, x, f);
  CHECK(std::abs(p - expected) < 1e-12);

  const auto pf = synthesize_pressure<float>(d, kArray, x.cast<float>(), 440.0f, 343.0f);
  CHECK(std::abs(std::complex<double>(pf) - expected) < 1e-4);

  CHECK_THROWS_AS(synthesize_pressure(d, kArray, kArray.speakers[5].position, f), SingularityError);
  CHECK_THROWS_AS(synthesize_pressure(d, kArray, x, 0.0), InvalidArgument);
}

TEST_CASE("exterior driving activates the facing speakers") {
  const auto src = classify_source({0.0, -1.5, 1.6}, kArray);
  DrivingOptions opt;
  opt.taper_fraction = 0.0;
  const auto d = driving_functions(src, kArray, std::nullopt, RenderMode::Static, opt);
  for (std::size_t n = 0; n < kArray.speakers.size(); ++n) {
    const auto& s = kArray.speakers[n];
    const bool facing = s.inward_normal.dot(s.position - src.position) > 0.0;
    CHECK(d.entries[n].active == facing);
    if (facing) {
      const double r = (s.position - src.position).norm();
      CHECK(d.entries[n].delay == doctest::Approx(r / kSpeedOfSound));
    }
  }
  CHECK(d.active_count() == 16);
  CHECK_FALSE(d.subarray);
}

TEST_CASE("focused driving time-reverses delays on one side") {
  const auto src = classify_source({0.0, 0.0, 1.6}, kArray);
  DrivingOptions opt;
  opt.static_subarray = StaticSubarray::fixed(1);
  const auto d = driving_functions(src, kArray, std::nullopt, RenderMode::Static, opt);
  REQUIRE(d.subarray);
  CHECK(*d.subarray == 1);
  double min_delay = 1.0;
  for (std::size_t n = 0; n < kArray.speakers.size(); ++n) {
    if (!d.entries[n].active) continue;
    CHECK(kArray.speakers[n].side_id == 1);
    min_delay = std::min(min_delay, d.entries[n].delay);
  }
  CHECK(min_delay == doctest::Approx(0.0));
  // The side's end speakers are farthest from the center, so they fire first.
  CHECK(d.entries[16].delay < d.entries[23].delay);

  DrivingOptions none;
  CHECK_THROWS_AS(driving_functions(src, kArray, std::nullopt, RenderMode::Static, none),
                  ConfigError);
  CHECK_THROWS_AS(driving_functions(src, kArray, std::nullopt, RenderMode::UserDependent, opt),
                  InvalidArgument);
}

TEST_CASE("user-dependent level matches the ideal field at the listener") {
  const auto src = classify_source({0.1, 0.2, 1.6}, kArray);
  DrivingOptions opt;
  const Vec3 listener(0.3, -0.5, 1.6);
  const auto d = driving_functions(src, kArray, listener, RenderMode::UserDependent, opt);
  const double syn = std::abs(synthesize_pressure(d, kArray, listener, opt.reference_frequency));
  const double ideal = std::abs(ideal_pressure(src.position, listener, opt.reference_frequency));
  CHECK(syn == doctest::Approx(ideal).epsilon(1e-9));
  // The north side faces a listener south of the source.
  CHECK(*d.subarray == 2);
}

TEST_CASE("edge taper") {
  const auto w = edge_taper(16, 0.2);
  REQUIRE(w.size() == 16);
  for (int i = 0; i < 16; ++i) {
    CHECK(w[i] == doctest::Approx(w[15 - i]));
    CHECK(w[i] > 0.0);
    CHECK(w[i] <= 1.0);
  }
  CHECK(w[0] < w[1]);
  CHECK(w[3] == 1.0);
  CHECK(edge_taper(16, 0.0) == std::vector<double>(16, 1.0));
  CHECK(edge_taper(1, 0.5) == std::vector<double>{1.0});
}

TEST_CASE("reconstruction error against the closed-form residual") {
  const auto zone = central_grid(11);
  const auto src = classify_source({0.4, -1.6, 1.6}, kArray);
  const auto d = driving_functions(src, kArray, std::nullopt, RenderMode::Static);
  for (double f : {200.0, 500.0, 1000.0}) {
    const auto r = reconstruction_error_detail(src, kArray, d, zone, f);
    CHECK(r.error == doctest::Approx(oracle_error(r.synthesized, r.ideal)).epsilon(1e-9));
  }

  // A source sitting on a speaker is reproduced exactly by that speaker alone.
  const auto on_speaker = classify_source(kArray.speakers[9].position, kArray);
  const auto single = single_speaker_driving(kArray, 9, 3.0);
  CHECK(reconstruction_error(on_speaker, kArray, single, zone, 500.0) < 1e-12);

  CHECK_THROWS_AS(reconstruction_error(src, kArray, d, std::span<const Vec3>{}, 500.0),
                  InvalidArgument);
  const std::vector<Vec3> outside{{2.0, 0.0, 1.6}};
  CHECK_THROWS_AS(reconstruction_error(src, kArray, d, outside, 500.0), InvalidArgument);
}

TEST_CASE("array rendering beats the nearest speaker and denser arrays do no worse") {
  const auto zone = central_grid();
  const Vec3 pos(0.0, -1.5, 1.6);
  const auto src = classify_source(pos, kArray);
  const double wfs =
      reconstruction_error(src, kArray, driving_functions(src, kArray, std::nullopt, RenderMode::Static),
                           zone, 500.0);
  const double single = reconstruction_error(
      src, kArray, single_speaker_driving(kArray, nearest_speaker(pos)), zone, 500.0);
  CHECK(2.0 * wfs <= single);

  const auto sparse = build_square_array(2.0, 8, 1.6, Vec3::Zero());
  const auto src8 = classify_source(pos, sparse);
  const double wfs8 = reconstruction_error(
      src8, sparse, driving_functions(src8, sparse, std::nullopt, RenderMode::Static), zone, 500.0);
  CHECK(wfs <= wfs8);
}

TEST_CASE("valid zones and sub-array selection") {
  const auto src = classify_source({0.0, 0.0, 1.6}, kArray);
  const auto zone = valid_zone(src, 2, kArray, deg_to_rad(60));
  CHECK(zone.direction.isApprox(Vec2(0, -1)));
  CHECK(zone.contains({0.0, -0.8, 1.6}));
  CHECK_FALSE(zone.contains({0.0, 0.8, 1.6}));
  CHECK_FALSE(zone.contains(src.position));

  CHECK(select_subarray(src, {0.0, -0.8, 1.6}, kArray, deg_to_rad(60)) == 2);
  CHECK(select_subarray(src, {0.8, 0.0, 1.6}, kArray, deg_to_rad(60)) == 3);
  CHECK_THROWS_AS(select_subarray(src, src.position, kArray, deg_to_rad(60)), NoValidZone);
  CHECK_THROWS_AS(valid_zone(src, 0, kArray, 0.0), InvalidArgument);
  CHECK_THROWS_AS(valid_zone(classify_source({0, -2, 1.6}, kArray), 0, kArray, 1.0),
                  InvalidArgument);

  CHECK(nearest_side({0.0, -0.9, 1.6}, kArray) == 0);
  CHECK(nearest_side({0.95, 0.1, 1.6}, kArray) == 1);
  CHECK(nearest_side({0.0, 0.0, 1.6}, kArray) == 0);
}

TEST_CASE("combining driving sets") {
  const auto a = single_speaker_driving(kArray, 1);
  const auto b = single_speaker_driving(kArray, 2, 0.5);
  const auto ab = combine_disjoint(a, b);
  CHECK(ab.active_count() == 2);
  CHECK(ab.entries[2].gain == 0.5);
  CHECK_THROWS_AS(combine_disjoint(a, a), InvalidArgument);
  CHECK_THROWS_AS(single_speaker_driving(kArray, 64), InvalidArgument);
}

TEST_CASE("error map file") {
  GridSpec grid{Rect::centered_square(Vec2::Zero(), 1.0), 3, 2, 1.6};
  const auto src = classify_source({0.0, -1.5, 1.6}, kArray);
  const auto d = driving_functions(src, kArray, std::nullopt, RenderMode::Static);
  const auto pts = grid.points();
  const auto r = reconstruction_error_detail(src, kArray, d, pts, 500.0);
  std::ostringstream out;
  write_error_map_csv(out, grid, r, 500.0);
  std::istringstream in(out.str());
  std::string line;
  int comments = 0, rows = 0;
  double total = 0.0;
  while (std::getline(in, line)) {
    if (line.starts_with("#")) {
      ++comments;
    } else if (line.starts_with("x,")) {
      continue;
    } else {
      ++rows;
      total += std::stod(line.substr(line.rfind(',') + 1));
    }
  }
  CHECK(comments == 9);
  CHECK(rows == 6);
  // Contributions sum to the squared error.
  CHECK(total == doctest::Approx(r.error * r.error).epsilon(1e-9));
}
