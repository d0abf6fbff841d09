// SPDX-License-Identifier: Apache-2.0
#include "lensleech/deform.hpp"

#include <cmath>

#include "lensleech/config.hpp"
#include "lensleech/error.hpp"
#include "lensleech/textio.hpp"

namespace lensleech {

bool DeformationState::is_identity() const {
  return !press && push_mm == Vec2{} && rotate_deg == 0.0 && !squeeze;
}

void validate(const DeformationState& d) {
  if (d.press) {
    require(d.press->sigma_mm > 0.0, "press sigma must be positive");
    require(std::isfinite(d.press->amplitude_mm), "press amplitude must be finite");
  }
  if (d.squeeze) require(d.squeeze->ratio > 0.0 && d.squeeze->ratio <= 1.0, "squeeze ratio must lie in (0, 1]");
}

Vec2 apply(const DeformationState& d, Vec2 p) {
  if (d.squeeze) {
    const Vec2 axis = rotated({1.0, 0.0}, d.squeeze->axis_deg);
    p += axis * ((d.squeeze->ratio - 1.0) * dot(p, axis));
  }
  if (d.press) {
    const Vec2 rel = p - d.press->center_mm;
    const double r = norm(rel);
    // A point exactly under the press center has no radial direction and stays put.
    if (r > 0.0) {
      const double s = d.press->sigma_mm;
      const double mag = d.press->amplitude_mm * std::exp(-(r * r) / (2.0 * s * s));
      p += rel * (mag / r);
    }
  }
  if (d.rotate_deg != 0.0) p = rotated(p, d.rotate_deg);
  return p + d.push_mm;
}

std::vector<Vec2> apply(const DeformationState& d, std::span<const Vec2> pts) {
  validate(d);
  std::vector<Vec2> out;
  out.reserve(pts.size());
  for (Vec2 p : pts) out.push_back(apply(d, p));
  return out;
}

std::string to_key_values(const DeformationState& d) {
  std::string s;
  auto kv = [&](const char* k, double v) { s += std::string(k) + " = " + format_double(v) + "\n"; };
  if (d.press) {
    kv("press_x_mm", d.press->center_mm.x);
    kv("press_y_mm", d.press->center_mm.y);
    kv("press_amplitude_mm", d.press->amplitude_mm);
    kv("press_sigma_mm", d.press->sigma_mm);
  }
  if (d.push_mm != Vec2{}) {
    kv("push_x_mm", d.push_mm.x);
    kv("push_y_mm", d.push_mm.y);
  }
  if (d.rotate_deg != 0.0) kv("rotate_deg", d.rotate_deg);
  if (d.squeeze) {
    kv("squeeze_axis_deg", d.squeeze->axis_deg);
    kv("squeeze_ratio", d.squeeze->ratio);
  }
  return s;
}

DeformationState deformation_from(const KeyValueDoc& doc, const std::string& section) {
  DeformationState d;
  if (doc.has(section, "press_amplitude_mm") || doc.has(section, "press_x_mm") || doc.has(section, "press_y_mm")) {
    Press p;
    p.center_mm = {doc.get_double(section, "press_x_mm", 0.0), doc.get_double(section, "press_y_mm", 0.0)};
    p.amplitude_mm = doc.get_double(section, "press_amplitude_mm", p.amplitude_mm);
    p.sigma_mm = doc.get_double(section, "press_sigma_mm", p.sigma_mm);
    d.press = p;
  }
  d.push_mm = {doc.get_double(section, "push_x_mm", 0.0), doc.get_double(section, "push_y_mm", 0.0)};
  d.rotate_deg = doc.get_double(section, "rotate_deg", 0.0);
  if (doc.has(section, "squeeze_ratio")) {
    d.squeeze = Squeeze{doc.get_double(section, "squeeze_axis_deg", 0.0), doc.get_double(section, "squeeze_ratio", 1.0)};
  }
  validate(d);
  return d;
}

} // namespace lensleech
