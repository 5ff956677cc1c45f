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
#include <vector>

#include "wfslab/listener.hpp"
#include "wfslab/rng.hpp"

using namespace wfslab;

namespace {

const SpeakerArray kArray = build_square_array(2.0, 16, 1.6, Vec3::Zero());

ListenerState at(double x, double y, double yaw) { return {{x, y, 1.6}, yaw, 0.18}; }

// Far-field ITD of a point source, written from the ear geometry directly.
double oracle_itd(const Vec3& src, const ListenerState& s) {
  const Vec3 r(std::cos(s.yaw) * 0.09, std::sin(s.yaw) * 0.09, 0.0);
  return ((src - (s.head_position + r)).norm() - (src - (s.head_position - r)).norm()) /
         kSpeedOfSound;
}

}  // namespace

TEST_CASE("ears sit on the interaural axis") {
  const auto e = ear_positions(at(0, 0, 0));
  CHECK(e.right.isApprox(Vec3(0.09, 0, 1.6)));
  CHECK(e.left.isApprox(Vec3(-0.09, 0, 1.6)));
  const auto turned = ear_positions(at(0, 0, kPi / 2));
  // Facing -x after a quarter turn, so the right ear points to +y.
  CHECK(turned.right.isApprox(Vec3(0, 0.09, 1.6)));
}

TEST_CASE("stereo cues follow the source side") {
  const StereoRolloff rolloff;
  const auto s = at(0, 0, 0);
  const Vec3 right_src(0.8, 0.5, 1.6);
  const auto cue = binaural_cues_stereo(right_src, s, rolloff);
  CHECK(cue.itd < 0.0);
  CHECK(cue.ild > 0.0);
  CHECK(cue.itd == doctest::Approx(oracle_itd(right_src, s)));

  const auto mirrored = binaural_cues_stereo({-0.8, 0.5, 1.6}, s, rolloff);
  CHECK(mirrored.itd == doctest::Approx(-cue.itd));
  CHECK(mirrored.ild == doctest::Approx(-cue.ild));

  CHECK_THROWS_AS(binaural_cues_stereo(ear_positions(s).left, s, rolloff), SingularityError);
}

TEST_CASE("stereo rolloff law") {
  const StereoRolloff r;
  CHECK(stereo_gain(0.1, r) == 1.0);
  CHECK(stereo_gain(1.0, r) == doctest::Approx(0.1).epsilon(1e-15));
  CHECK(stereo_gain(0.0, r) == 1.0);
  CHECK(stereo_gain(650.0, r) == doctest::Approx(0.1 / 650.0));
  CHECK(stereo_gain(5000.0, r) == stereo_gain(650.0, r));
  double prev = stereo_gain(0.0, r);
  for (int i = 1; i <= 10000; ++i) {
    const double g = stereo_gain(i * 0.1, r);
    CHECK_LE(g, prev);
    prev = g;
  }
}

TEST_CASE("bearing from a stereo ITD recovers the lateral angle") {
  const StereoRolloff rolloff;
  for (double deg : {-70.0, -30.0, 0.0, 20.0, 60.0}) {
    const auto s = at(0.1, -0.2, deg_to_rad(15));
    const double heading = s.yaw + deg_to_rad(deg);
    const Vec2 p = horizontal(s.head_position) + heading_vector(heading) * 50.0;
    const auto cue = binaural_cues_stereo(lift(p, 1.6), s, rolloff);
    const auto est = bearing_from_itd(cue, s);
    CHECK(angle_between(est.bearing, heading) < deg_to_rad(0.5));
    CHECK(est.origin.isApprox(horizontal(s.head_position)));
    CHECK_FALSE(est.distance);
  }
  // ITDs beyond the head-size bound saturate at 90 degrees with lower confidence.
  const auto s = at(0, 0, 0);
  const auto est = bearing_from_itd({-2 * 0.18 / kSpeedOfSound, 0.0}, s);
  CHECK(wrap_angle(est.bearing) == doctest::Approx(-kPi / 2));
  CHECK(est.confidence < 1.0);
}

TEST_CASE("WFS cues point at an exterior source") {
  const auto src = classify_source({0.0, 1.6, 1.6}, kArray);
  const auto d = driving_functions(src, kArray, std::nullopt, RenderMode::Static);
  for (auto model : {ItdModel::InterauralPhase, ItdModel::FirstArrival}) {
    CueOptions opt;
    opt.itd_model = model;
    for (double yaw : {-0.6, 0.0, 0.4}) {
      const auto s = at(0.2, -0.3, yaw);
      const auto cue = binaural_cues_wfs(d, kArray, s, opt);
      CHECK(std::abs(cue.itd) <= 0.18 / kSpeedOfSound + 1e-15);
      const double truth = heading_of(horizontal(src.position) - horizontal(s.head_position));
      CHECK(angle_between(bearing_from_itd(cue, s).bearing, truth) < deg_to_rad(10));
    }
  }
  DrivingSet empty;
  empty.entries.resize(kArray.speakers.size());
  CHECK_THROWS_AS(binaural_cues_wfs(empty, kArray, at(0, 0, 0)), InvalidArgument);
}

TEST_CASE("user-dependent rendering avoids the forbidden zone") {
  // Focused source at the center; the static sub-array is the side behind the listener.
  const auto src = classify_source({0.0, 0.0, 1.6}, kArray);
  Rng rng(7);
  int better = 0;
  const int n = 100;
  for (int i = 0; i < n; ++i) {
    const double a = rng.uniform(-kPi, kPi);
    const Vec2 p = Vec2(std::cos(a), std::sin(a)) * 0.8;
    const auto s = at(p.x(), p.y(), rng.uniform(-kPi, kPi));
    const double truth = heading_of(-p);
    DrivingOptions opt;
    const int ud_side = select_subarray(src, s.head_position, kArray, opt.half_aperture);
    opt.static_subarray = StaticSubarray::fixed((ud_side + 2) % 4);
    const auto ud = driving_functions(src, kArray, s.head_position, RenderMode::UserDependent, opt);
    const auto st = driving_functions(src, kArray, std::nullopt, RenderMode::Static, opt);
    const double e_ud = angle_between(bearing_from_itd(binaural_cues_wfs(ud, kArray, s), s).bearing, truth);
    const double e_st = angle_between(bearing_from_itd(binaural_cues_wfs(st, kArray, s), s).bearing, truth);
    if (e_ud < e_st) ++better;
  }
  CHECK(better >= 90);
}

TEST_CASE("parallax triangulation") {
  const Vec2 target(0.4, 0.7);
  std::vector<BearingObservation> obs;
  for (const Vec2& p : {Vec2(-0.5, -0.5), Vec2(0.5, -0.6), Vec2(0.0, 0.1)}) {
    obs.push_back({lift(p, 1.6), heading_of(target - p)});
  }
  const auto est = parallax_triangulate(obs, 0.1);
  REQUIRE(est.point());
  CHECK((*est.point() - target).norm() < 1e-9);
  CHECK(est.confidence == doctest::Approx(1.0));

  // Lines, not rays: a reversed bearing still meets the target.
  obs[0].bearing = wrap_angle(obs[0].bearing + kPi);
  CHECK((*parallax_triangulate(obs, 0.1).point() - target).norm() < 1e-9);

  const std::vector<BearingObservation> one{obs[0]};
  CHECK_THROWS_AS(parallax_triangulate(one, 0.1), InvalidArgument);
  const std::vector<BearingObservation> close{{{0, 0, 1.6}, 0.3}, {{0.01, 0, 1.6}, 1.0}};
  CHECK_THROWS_AS(parallax_triangulate(close, 0.1), DegenerateParallax);
  const std::vector<BearingObservation> parallel{{{0, 0, 1.6}, 0.3}, {{0.5, 0, 1.6}, 0.3 + kPi}};
  CHECK_THROWS_AS(parallax_triangulate(parallel, 0.1), DegenerateParallax);
}
