// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "lensleech/geometry.hpp"
#include "lensleech/hexgrid.hpp"

namespace lensleech {

class HexPattern;

// Silicone body acting as a thin plano-convex lens in air.
struct LensSpec {
  double r1_mm = 7.5;
  double refractive_index = 1.41;
  double height_factor = 1.3;
};

void validate(const LensSpec& l);

// Paraxial focal length f = R1 / (n - 1).
double focal_length(const LensSpec& l);
// focal_length * height_factor. The nominal design rounds this to 25 mm.
double body_height(const LensSpec& l);

inline constexpr double kSiliconeLensDiameterMm = 12.0;

struct CameraModel {
  int width = 640;
  int height = 480;
  double fov_deg = 84.0;        // horizontal
  double pupil_mm = 0.0;        // entrance pupil diameter; 0 is an ideal pinhole
  double pupil_dist_mm = 25.0;  // pupil plane to pattern plane

  double focal_px() const;
  // Pixel centers sit on integer coordinates, so the image center is ((w-1)/2, (h-1)/2).
  Vec2 principal_point() const;
};

void validate(const CameraModel& cam);
// Reads width, height, fov_deg, pupil_mm, pupil_dist_mm from key-value text.
CameraModel parse_camera(const std::string& text);

struct PatternPose {
  Vec2 translation_mm;
  double rotation_deg = 0.0; // CCW, normalized to [0, 360) by normalized()
  double distance_offset_mm = 0.0;

  PatternPose normalized() const;
};

// Pattern-plane point after in-plane rotation and translation.
Vec2 apply_pose(const PatternPose& pose, Vec2 p);

// Depth of the pattern plane along the optical axis.
double pattern_depth(const CameraModel& cam, const PatternPose& pose);

struct Projection {
  std::vector<Vec2> pixels;   // parallel to the input; meaningless where !in_front
  std::vector<bool> in_front;
};

// Pinhole projection of posed pattern points. Image y grows downwards while
// pattern y grows upwards, so a CCW pattern rotation stays CCW on screen.
Projection project(const CameraModel& cam, const PatternPose& pose, std::span<const Vec2> pts);
std::optional<Vec2> project(const CameraModel& cam, const PatternPose& pose, Vec2 pt);
// Inverse of project for a pixel on the pattern plane.
Vec2 unproject(const CameraModel& cam, const PatternPose& pose, Vec2 pixel);

// Physical pattern radius that survives the pupil vignette:
// R * clamp(1 - (pupil - 12 mm) / 24 mm, 0.15, 1).
double visibility_radius_mm(const CameraModel& cam, double pattern_radius_mm);

// Projected radius of a 1.0 mm dot, at least 2 px.
double dot_radius_px(const CameraModel& cam, const PatternPose& pose);

// Whether a posed pattern-plane point passes both the vignette and field-of-view tests.
bool point_visible(const CameraModel& cam, const PatternPose& pose, Vec2 posed_mm, double r_vis_mm);

std::vector<AxialCoord> visible_subset(const CameraModel& cam, const HexPattern& p, const PatternPose& pose);

} // namespace lensleech
