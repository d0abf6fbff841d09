// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "lensleech/geometry.hpp"

namespace lensleech {

class KeyValueDoc;

struct Press {
  Vec2 center_mm;
  double amplitude_mm = 1.5;
  double sigma_mm = 4.0;
};

struct Squeeze {
  double axis_deg = 0.0;
  double ratio = 1.0; // in (0, 1]; compression along the axis only
};

// Parametric deformation of the pattern plane. Applied as squeeze, press, rotate, push.
struct DeformationState {
  std::optional<Press> press;
  Vec2 push_mm;
  double rotate_deg = 0.0;
  std::optional<Squeeze> squeeze;

  bool is_identity() const;
};

void validate(const DeformationState& d);

Vec2 apply(const DeformationState& d, Vec2 p);
std::vector<Vec2> apply(const DeformationState& d, std::span<const Vec2> pts);

// Key-value block form used inside scenario scripts:
// press_x_mm, press_y_mm, press_amplitude_mm, press_sigma_mm, push_x_mm, push_y_mm,
// rotate_deg, squeeze_axis_deg, squeeze_ratio. Absent keys mean no deformation.
std::string to_key_values(const DeformationState& d);
DeformationState deformation_from(const KeyValueDoc& doc, const std::string& section);

} // namespace lensleech
