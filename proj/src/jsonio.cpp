// SPDX-License-Identifier: Apache-2.0
#include "lensleech/jsonio.hpp"

#include <json.hpp>

namespace lensleech {

using nlohmann::json;

namespace {

json coord(AxialCoord c) { return json{{"q", c.q}, {"r", c.r}}; }
json vec(Vec2 v) { return json::array({v.x, v.y}); }

} // namespace

std::string points_to_json(std::span<const LabeledPoint> points) {
  json arr = json::array();
  for (const auto& p : points) {
    arr.push_back({{"x", p.position.x}, {"y", p.position.y}, {"class", p.color_class}, {"confidence", p.confidence}, {"hue", p.hue}});
  }
  return json{{"points", arr}}.dump(2) + "\n";
}

std::vector<LabeledPoint> points_from_json(std::string_view text) {
  std::vector<LabeledPoint> out;
  try {
    const json j = json::parse(text);
    for (const auto& p : j.at("points")) {
      LabeledPoint lp;
      lp.position = {p.at("x").get<double>(), p.at("y").get<double>()};
      lp.color_class = p.at("class").get<int>();
      lp.confidence = p.value("confidence", 1.0);
      lp.hue = p.value("hue", 0.0);
      if (lp.color_class < 0) fail(ErrorKind::Parse, "points: negative class");
      out.push_back(lp);
    }
  } catch (const json::exception& e) {
    fail(ErrorKind::Parse, std::string("points: ") + e.what());
  }
  return out;
}

std::string frame_sidecar_json(const Frame& f, const PatternPose& pose, const DeformationState& d,
                               const IlluminationModel& ill) {
  json def = json::object();
  if (d.press) {
    def["press"] = {{"center_mm", vec(d.press->center_mm)}, {"amplitude_mm", d.press->amplitude_mm}, {"sigma_mm", d.press->sigma_mm}};
  }
  def["push_mm"] = vec(d.push_mm);
  def["rotate_deg"] = d.rotate_deg;
  if (d.squeeze) def["squeeze"] = {{"axis_deg", d.squeeze->axis_deg}, {"ratio", d.squeeze->ratio}};
  json pts = json::array();
  for (const auto& t : f.truth) {
    pts.push_back({{"q", t.coord.q}, {"r", t.coord.r}, {"color", t.color}, {"x", t.pixel.x}, {"y", t.pixel.y}, {"visible", t.visible}});
  }
  json j = {
      {"pose", {{"translation_mm", vec(pose.translation_mm)}, {"rotation_deg", pose.rotation_deg}, {"distance_offset_mm", pose.distance_offset_mm}}},
      {"deformation", def},
      {"illumination", {{"lux", ill.lux}, {"gain", ill.gain}, {"blur_sigma_px", ill.blur_sigma_px}, {"noise_sigma", ill.noise_sigma}}},
      {"visible_count", f.visible_count()},
      {"points", pts},
  };
  return j.dump(2) + "\n";
}

std::string analysis_to_json(const FrameAnalysis& fa) {
  const auto& cs = fa.correspondences;
  json windows = json::array();
  for (const auto& w : fa.windows) {
    windows.push_back({{"center", w.center}, {"ring", w.ring}, {"code_center", w.code.center}, {"code_ring", w.code.ring}});
  }
  json pairs = json::array();
  for (const auto& c : cs.pairs) {
    pairs.push_back({{"point", c.point}, {"q", c.coord.q}, {"r", c.coord.r}, {"x", c.image.x}, {"y", c.image.y}});
  }
  json j = {
      {"point_count", fa.points.size()},
      {"reference_deg", fa.reference_deg},
      {"windows", windows},
      {"rotation", cs.rotation},
      {"raw_hits", cs.raw_hits},
      {"scores", cs.scores},
      {"residual_px", cs.residual_px},
      {"insufficient", cs.insufficient},
      {"match_count", cs.match_count()},
      {"pairs", pairs},
  };
  if (!fa.note.empty()) j["note"] = fa.note;
  return j.dump(2) + "\n";
}

std::string event_to_json(const GestureEvent& e) {
  json j;
  j["frame"] = e.frame;
  j["kind"] = to_string(e.kind);
  j["phase"] = to_string(e.phase);
  j["magnitude"] = e.magnitude;
  j["direction"] = e.direction ? vec(*e.direction) : json(nullptr);
  if (e.axis_deg) j["axis_deg"] = *e.axis_deg;
  j["location"] = e.location ? coord(*e.location) : json(nullptr);
  j["cumulative_rotation"] = e.cumulative_rotation_deg;
  return j.dump();
}

std::string lookup_to_json(const LookupTable& t) {
  json entries = json::array();
  for (const auto& e : t.entries()) {
    entries.push_back({{"code", e.code}, {"q", e.placement.center.q}, {"r", e.placement.center.r}, {"rotation", e.placement.rotation}});
  }
  return json{{"colors", t.colors()}, {"radius", t.radius()}, {"entries", entries}}.dump(2) + "\n";
}

std::string report_to_json(const UniquenessReport& r) {
  json coll = json::array();
  auto place = [](const WindowPlacement& p) { return json{{"q", p.center.q}, {"r", p.center.r}, {"rotation", p.rotation}}; };
  for (const auto& c : r.collisions) coll.push_back({{"a", place(c.a)}, {"b", place(c.b)}});
  json all = json::array(), given = json::array();
  for (auto c : r.unique_all_orientations) all.push_back(coord(c));
  for (auto c : r.unique_given_only) given.push_back(coord(c));
  return json{{"mode", to_string(r.mode)},
              {"valid", r.valid()},
              {"window_count", r.window_count},
              {"collisions", coll},
              {"unique_all_orientations", all},
              {"unique_given_orientation_only", given}}
             .dump(2) +
         "\n";
}

std::string pose_to_json(const PoseEstimate& p) {
  return json{{"rotation_deg", p.rotation_deg}, {"translation", vec(p.translation)}, {"scale_residual", p.scale_residual}}.dump();
}

std::string error_to_json(ErrorKind kind, std::string_view message) {
  return json{{"error", {{"kind", to_string(kind)}, {"message", message}}}}.dump();
}

std::string error_to_json(const Error& e) {
  json j = {{"error", {{"kind", to_string(e.kind())}, {"message", e.what()}}}};
  if (const auto* pe = dynamic_cast<const ParseError*>(&e)) {
    j["error"]["line"] = pe->line();
    j["error"]["field"] = pe->field();
  }
  return j.dump();
}

} // namespace lensleech
