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

#include <cstdint>

#include "wfslab/geometry.hpp"

namespace wfslab {

// Maps virtual-space points into WFS space: translate, then rotate about
// `center` (a point already expressed in WFS space).
struct RigidTransform2D {
  Vec2 center = Vec2::Zero();
  double rotation = 0.0;
  Vec2 translation = Vec2::Zero();

  [[nodiscard]] Vec2 apply(const Vec2& p) const;
  [[nodiscard]] Vec3 apply(const Vec3& p) const;
  [[nodiscard]] RigidTransform2D inverse() const;
  [[nodiscard]] bool is_identity() const { return rotation == 0.0 && translation.isZero(0.0); }
};

inline Vec2 apply(const RigidTransform2D& t, const Vec2& p) { return t.apply(p); }
inline RigidTransform2D invert(const RigidTransform2D& t) { return t.inverse(); }

/// First calibration step: moves the virtual center onto the real one.
RigidTransform2D align_centers(const Vec2& real_center, const Vec2& virtual_center);

/// Second step: rotation about the (already matched) center.
RigidTransform2D set_rotation(const RigidTransform2D& t, double theta);

struct MisalignmentModel {
  double sigma_translation = 0.02;  // m
  double sigma_rotation = deg_to_rad(1.0);
};

/// Residual calibration error, drawn once per session; rotation is about `center`.
RigidTransform2D sample_misalignment(const MisalignmentModel& model, std::uint64_t seed,
                                     const Vec2& center = Vec2::Zero());

}  // namespace wfslab
