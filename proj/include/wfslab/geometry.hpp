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

#include <algorithm>
#include <cmath>
#include <numbers>

#include <Eigen/Core>

namespace wfslab {

template <typename Scalar>
using Point2 = Eigen::Matrix<Scalar, 2, 1>;
template <typename Scalar>
using Point3 = Eigen::Matrix<Scalar, 3, 1>;

using Vec2 = Point2<double>;
using Vec3 = Point3<double>;

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kSpeedOfSound = 343.0;

template <typename Derived>
Point2<typename Derived::Scalar> horizontal(const Eigen::MatrixBase<Derived>& p) {
  return p.template head<2>();
}

inline Vec3 lift(const Vec2& p, double height) { return {p.x(), p.y(), height}; }

inline double deg_to_rad(double deg) { return deg * kPi / 180.0; }
inline double rad_to_deg(double rad) { return rad * 180.0 / kPi; }

/// Wraps an angle to (-pi, pi].
inline double wrap_angle(double a) {
  a = std::remainder(a, 2.0 * kPi);
  if (a <= -kPi) a += 2.0 * kPi;
  return a;
}

inline double angle_between(double a, double b) { return std::abs(wrap_angle(a - b)); }

// Headings follow the yaw convention: 0 faces +y, positive turns counter-clockwise.
inline Vec2 heading_vector(double heading) { return {-std::sin(heading), std::cos(heading)}; }

inline double heading_of(const Vec2& v) { return std::atan2(-v.x(), v.y()); }

/// Axis-aligned rectangle in the horizontal plane.
struct Rect {
  Vec2 min{-1.0, -1.0};
  Vec2 max{1.0, 1.0};

  [[nodiscard]] double width() const { return max.x() - min.x(); }
  [[nodiscard]] double height() const { return max.y() - min.y(); }
  [[nodiscard]] Vec2 center() const { return 0.5 * (min + max); }

  [[nodiscard]] bool contains(const Vec2& p) const {
    return p.x() >= min.x() && p.x() <= max.x() && p.y() >= min.y() && p.y() <= max.y();
  }
  [[nodiscard]] bool strictly_contains(const Vec2& p) const {
    return p.x() > min.x() && p.x() < max.x() && p.y() > min.y() && p.y() < max.y();
  }
  [[nodiscard]] Vec2 clamp(const Vec2& p) const {
    return {std::clamp(p.x(), min.x(), max.x()), std::clamp(p.y(), min.y(), max.y())};
  }
  [[nodiscard]] Rect inset(double margin) const {
    return {min + Vec2::Constant(margin), max - Vec2::Constant(margin)};
  }

  static Rect centered_square(const Vec2& center, double side) {
    return {center - Vec2::Constant(side / 2), center + Vec2::Constant(side / 2)};
  }
};

}  // namespace wfslab
