// SPDX-License-Identifier: Apache-2.0
#include "lensleech/optics.hpp"

#include <algorithm>
#include <cmath>

#include "lensleech/config.hpp"
#include "lensleech/error.hpp"
#include "lensleech/pattern.hpp"

namespace lensleech {

void validate(const LensSpec& l) {
  require(l.r1_mm > 0.0, "lens radius of curvature must be positive");
  require(l.refractive_index > 1.0, "refractive index must exceed 1");
  require(l.height_factor >= 1.0, "height factor must be >= 1");
}

double focal_length(const LensSpec& l) {
  validate(l);
  return l.r1_mm / (l.refractive_index - 1.0);
}

double body_height(const LensSpec& l) { return focal_length(l) * l.height_factor; }

double CameraModel::focal_px() const { return (width / 2.0) / std::tan(deg2rad(fov_deg / 2.0)); }

Vec2 CameraModel::principal_point() const { return {(width - 1) / 2.0, (height - 1) / 2.0}; }

void validate(const CameraModel& cam) {
  require(cam.width > 0 && cam.height > 0, "camera image size must be positive");
  require(cam.fov_deg > 10.0 && cam.fov_deg < 170.0, "camera fov must lie in (10, 170) degrees");
  require(cam.pupil_mm >= 0.0, "entrance pupil diameter must be >= 0");
  require(cam.pupil_dist_mm > 0.0, "pupil distance must be positive");
}

CameraModel parse_camera(const std::string& text) {
  const KeyValueDoc doc = KeyValueDoc::parse(text);
  // Keys may sit at top level or under a [camera] section.
  const std::string sec = doc.has_section("camera") ? "camera" : "";
  CameraModel cam;
  cam.width = static_cast<int>(doc.get_int(sec, "width", cam.width));
  cam.height = static_cast<int>(doc.get_int(sec, "height", cam.height));
  cam.fov_deg = doc.get_double(sec, "fov_deg", cam.fov_deg);
  cam.pupil_mm = doc.get_double(sec, "pupil_mm", cam.pupil_mm);
  cam.pupil_dist_mm = doc.get_double(sec, "pupil_dist_mm", cam.pupil_dist_mm);
  validate(cam);
  return cam;
}

PatternPose PatternPose::normalized() const {
  PatternPose p = *this;
  p.rotation_deg = wrap_degrees(rotation_deg);
  return p;
}

Vec2 apply_pose(const PatternPose& pose, Vec2 p) { return rotated(p, pose.rotation_deg) + pose.translation_mm; }

double pattern_depth(const CameraModel& cam, const PatternPose& pose) {
  return cam.pupil_dist_mm + pose.distance_offset_mm;
}

namespace {
Vec2 project_posed(const CameraModel& cam, double depth, Vec2 posed) {
  const double f = cam.focal_px();
  const Vec2 pp = cam.principal_point();
  return {pp.x + f * posed.x / depth, pp.y - f * posed.y / depth};
}
} // namespace

Projection project(const CameraModel& cam, const PatternPose& pose, std::span<const Vec2> pts) {
  const double depth = pattern_depth(cam, pose);
  Projection out;
  out.pixels.reserve(pts.size());
  out.in_front.reserve(pts.size());
  for (Vec2 p : pts) {
    const bool front = depth > 0.0;
    out.in_front.push_back(front);
    out.pixels.push_back(front ? project_posed(cam, depth, apply_pose(pose, p)) : Vec2{});
  }
  return out;
}

std::optional<Vec2> project(const CameraModel& cam, const PatternPose& pose, Vec2 pt) {
  const double depth = pattern_depth(cam, pose);
  if (!(depth > 0.0)) return std::nullopt;
  return project_posed(cam, depth, apply_pose(pose, pt));
}

Vec2 unproject(const CameraModel& cam, const PatternPose& pose, Vec2 pixel) {
  const double depth = pattern_depth(cam, pose);
  require(depth > 0.0, "unproject: pattern plane behind camera");
  const double f = cam.focal_px();
  const Vec2 pp = cam.principal_point();
  const Vec2 posed{(pixel.x - pp.x) * depth / f, -(pixel.y - pp.y) * depth / f};
  return rotated(posed - pose.translation_mm, -pose.rotation_deg);
}

double visibility_radius_mm(const CameraModel& cam, double pattern_radius_mm) {
  const double factor = std::clamp(1.0 - (cam.pupil_mm - kSiliconeLensDiameterMm) / 24.0, 0.15, 1.0);
  return pattern_radius_mm * factor;
}

double dot_radius_px(const CameraModel& cam, const PatternPose& pose) {
  const double depth = pattern_depth(cam, pose);
  require(depth > 0.0, "dot_radius_px: pattern plane behind camera");
  return std::max(2.0, cam.focal_px() * (kStencilDotDiameterMm / 2.0) / depth);
}

bool point_visible(const CameraModel& cam, const PatternPose& pose, Vec2 posed_mm, double r_vis_mm) {
  const double depth = pattern_depth(cam, pose);
  if (!(depth > 0.0)) return false;
  if (norm(posed_mm) > r_vis_mm + 1e-9) return false;
  const Vec2 px = project_posed(cam, depth, posed_mm);
  const double margin = dot_radius_px(cam, pose);
  return px.x >= margin && px.y >= margin && px.x <= cam.width - 1 - margin && px.y <= cam.height - 1 - margin;
}

std::vector<AxialCoord> visible_subset(const CameraModel& cam, const HexPattern& p, const PatternPose& pose) {
  const double r_vis = visibility_radius_mm(cam, p.radius() * p.pitch_mm());
  std::vector<AxialCoord> out;
  for (AxialCoord c : p.disc().coords) {
    if (point_visible(cam, pose, apply_pose(pose, p.position(c)), r_vis)) out.push_back(c);
  }
  return out;
}

} // namespace lensleech
