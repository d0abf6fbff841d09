// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <span>

#include "lensleech/geometry.hpp"

namespace lensleech {

// Least-squares rotation taking the centered `from` set onto the centered `to` set
// (2D Kabsch). Closed form: atan2 of the summed cross and dot products. Degrees in [0, 360).
// Throws Error(Domain) for mismatched or short input and Error(Degenerate) when either
// set collapses to a single point.
double kabsch_rotation(std::span<const Vec2> from, std::span<const Vec2> to);

// to ~= scale * R(rotation) * from + translation.
struct Similarity {
  double rotation_deg = 0.0;
  double scale = 1.0;
  Vec2 translation;
  double rms = 0.0; // residual in `to` units

  Vec2 apply(Vec2 p) const { return rotated(p, rotation_deg) * scale + translation; }
};

Similarity fit_similarity(std::span<const Vec2> from, std::span<const Vec2> to);

// Image pixels have y down; pattern geometry has y up.
constexpr Vec2 image_to_math(Vec2 px) { return {px.x, -px.y}; }

} // namespace lensleech
