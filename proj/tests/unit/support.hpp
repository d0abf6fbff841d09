#pragma once

#include <random>
#include <vector>

#include "lensleech/detect.hpp"
#include "lensleech/pattern.hpp"
#include "lensleech/render.hpp"

namespace lensleech::testing {

inline const HexPattern& default_pattern() {
  static const HexPattern p = [] {
    GenerateOptions o;
    o.seed = 7;
    return generate(o);
  }();
  return p;
}

inline const LookupTable& default_table() {
  static const LookupTable t = build_lookup(default_pattern());
  return t;
}

inline IlluminationModel clean_light() {
  IlluminationModel ill;
  ill.lux = 500.0;
  ill.noise_sigma = 0.0;
  return ill;
}

inline Frame render_clean(const HexPattern& p, const PatternPose& pose, const DeformationState& d = {},
                          std::uint64_t seed = 0) {
  return render(p, d, pose, CameraModel{}, clean_light(), Image{}, {seed, {}});
}

// Labeled points straight from ground truth, optionally jittered; skips the image path.
inline std::vector<LabeledPoint> truth_points(const Frame& f, double jitter_px = 0.0, std::uint64_t seed = 0) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> n(0.0, jitter_px > 0.0 ? jitter_px : 1.0);
  std::vector<LabeledPoint> out;
  for (const auto& gt : f.truth) {
    if (!gt.visible) continue;
    LabeledPoint lp;
    lp.position = gt.pixel;
    if (jitter_px > 0.0) lp.position += Vec2{n(rng), n(rng)};
    lp.color_class = gt.color;
    lp.confidence = 1.0;
    out.push_back(lp);
  }
  return out;
}

// Jittered projections of the visible deformed points, without drawing an image.
inline std::vector<LabeledPoint> projected_points(const HexPattern& p, const PatternPose& pose,
                                                  const DeformationState& d, double jitter_px, std::uint64_t seed) {
  const CameraModel cam;
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> n(0.0, jitter_px > 0.0 ? jitter_px : 1.0);
  const double r_vis = visibility_radius_mm(cam, p.radius() * p.pitch_mm());
  std::vector<LabeledPoint> out;
  for (AxialCoord c : p.disc().coords) {
    const Vec2 posed = apply_pose(pose, apply(d, p.position(c)));
    if (!point_visible(cam, pose, posed, r_vis)) continue;
    LabeledPoint lp;
    lp.position = *project(cam, PatternPose{{}, 0.0, pose.distance_offset_mm}, posed);
    if (jitter_px > 0.0) lp.position += Vec2{n(rng), n(rng)};
    lp.color_class = p.color(c);
    lp.confidence = 1.0;
    out.push_back(lp);
  }
  return out;
}

// Ground-truth point closest to a pixel, or nullptr beyond max_px.
inline const GroundTruthPoint* truth_at(const Frame& f, Vec2 px, double max_px = 1.0) {
  const GroundTruthPoint* best = nullptr;
  double bd = max_px;
  for (const auto& gt : f.truth) {
    if (!gt.visible) continue;
    const double d = distance(gt.pixel, px);
    if (d < bd) bd = d, best = &gt;
  }
  return best;
}

} // namespace lensleech::testing
