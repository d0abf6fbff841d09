// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <vector>

#include "lensleech/deform.hpp"
#include "lensleech/hexgrid.hpp"
#include "lensleech/image.hpp"
#include "lensleech/optics.hpp"

namespace lensleech {

class HexPattern;

struct IlluminationModel {
  double lux = 500.0;
  std::array<double, 3> gain{1.0, 1.0, 1.0}; // per-channel color cast
  double blur_sigma_px = 1.2;
  double noise_sigma = 2.0;      // in 8-bit levels
  double full_scale_lux = 600.0; // brightness saturates here
};

void validate(const IlluminationModel& ill);

// Linear lux-to-brightness transfer with saturation at full scale.
double brightness_scale(const IlluminationModel& ill);

struct GroundTruthPoint {
  AxialCoord coord;
  Vec2 pixel; // exact projected dot center before blur
  int color = 0;
  bool visible = false;
};

struct Frame {
  Image image;
  std::vector<GroundTruthPoint> truth; // disc order

  std::size_t visible_count() const;
};

struct RenderOptions {
  std::uint64_t seed = 0;
  // When set, only these coordinates are drawn (and flagged visible).
  std::optional<std::vector<AxialCoord>> only;
};

// Dot color for color index i of k: hues spread from 120 (green) to 220 (blue) degrees.
std::array<double, 3> dot_rgb(int color, int colors);

// Throws Error(Domain) when a non-empty background does not match the camera size.
// An empty background stands for a flat mid-gray scene.
Frame render(const HexPattern& p, const DeformationState& d, const PatternPose& pose, const CameraModel& cam,
             const IlluminationModel& ill, const Image& background, const RenderOptions& opts = {});

inline constexpr int kProceduralBackgroundCount = 12;
// Deterministic synthetic scene: gradients, textures, and color casts.
Image procedural_background(int width, int height, int index);

} // namespace lensleech
