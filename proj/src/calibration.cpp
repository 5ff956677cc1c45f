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

#include "wfslab/calibration.hpp"

#include <Eigen/Geometry>

#include "wfslab/errors.hpp"
#include "wfslab/rng.hpp"

namespace wfslab {

Vec2 RigidTransform2D::apply(const Vec2& p) const {
  return center + Eigen::Rotation2Dd(rotation) * (p + translation - center);
}

Vec3 RigidTransform2D::apply(const Vec3& p) const { return lift(apply(horizontal(p)), p.z()); }

RigidTransform2D RigidTransform2D::inverse() const {
  // p = R^-1 (q - center) + center - translation, i.e. rotate by -theta about
  // (center - translation) after shifting by -translation.
  RigidTransform2D inv;
  inv.center = center - translation;
  inv.rotation = -rotation;
  inv.translation = -translation;
  return inv;
}

RigidTransform2D align_centers(const Vec2& real_center, const Vec2& virtual_center) {
  return {real_center, 0.0, real_center - virtual_center};
}

RigidTransform2D set_rotation(const RigidTransform2D& t, double theta) {
  RigidTransform2D out = t;
  out.rotation = t.rotation + theta;
  return out;
}

RigidTransform2D sample_misalignment(const MisalignmentModel& model, std::uint64_t seed,
                                     const Vec2& center) {
  if (model.sigma_translation < 0.0 || model.sigma_rotation < 0.0) {
    throw InvalidArgument("misalignment sigmas must be non-negative");
  }
  Rng rng(seed);
  RigidTransform2D t;
  t.center = center;
  const double tx = rng.normal(0.0, model.sigma_translation);
  const double ty = rng.normal(0.0, model.sigma_translation);
  t.translation = {tx, ty};
  t.rotation = rng.normal(0.0, model.sigma_rotation);
  return t;
}

}  // namespace wfslab
