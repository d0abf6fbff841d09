// SPDX-License-Identifier: Apache-2.0
#include "lensleech/pipeline.hpp"

#include <filesystem>
#include <map>
#include <set>

#include "lensleech/config.hpp"
#include "lensleech/error.hpp"
#include "lensleech/textio.hpp"

namespace lensleech {

namespace {

const std::map<std::string, std::set<std::string>>& known_keys() {
  static const std::map<std::string, std::set<std::string>> keys = {
      {"camera", {"width", "height", "fov_deg", "pupil_mm", "pupil_dist_mm"}},
      {"segment", {"s_min", "v_min", "hue_lo", "hue_hi", "min_area", "max_area"}},
      {"match", {"ratio_lo", "ratio_hi", "min_matches", "align_to_lattice"}},
      {"gesture", {"press_on", "press_off", "push_on", "push_off", "rotate_step_deg", "squeeze_on", "squeeze_off"}},
      {"patterns", {"files"}},
  };
  return keys;
}

} // namespace

PipelineConfig parse_pipeline_config(const std::string& text, const std::string& base_dir) {
  const KeyValueDoc doc = KeyValueDoc::parse(text);
  for (const auto& b : doc.blocks()) {
    if (b.name.empty()) {
      if (!b.entries.empty()) throw ParseError(b.entry_lines.front(), 1, "keys must sit inside a section");
      continue;
    }
    const auto it = known_keys().find(b.name);
    if (it == known_keys().end()) throw ParseError(b.line, 1, "unknown section [" + b.name + "]");
    for (std::size_t i = 0; i < b.entries.size(); ++i) {
      if (!it->second.count(b.entries[i].first))
        throw ParseError(b.entry_lines[i], 1, "unknown key '" + b.entries[i].first + "' in [" + b.name + "]");
    }
  }

  PipelineConfig cfg;
  auto& cam = cfg.camera;
  cam.width = static_cast<int>(doc.get_int("camera", "width", cam.width));
  cam.height = static_cast<int>(doc.get_int("camera", "height", cam.height));
  cam.fov_deg = doc.get_double("camera", "fov_deg", cam.fov_deg);
  cam.pupil_mm = doc.get_double("camera", "pupil_mm", cam.pupil_mm);
  cam.pupil_dist_mm = doc.get_double("camera", "pupil_dist_mm", cam.pupil_dist_mm);

  auto& seg = cfg.segment;
  seg.s_min = doc.get_double("segment", "s_min", seg.s_min);
  seg.v_min = doc.get_double("segment", "v_min", seg.v_min);
  seg.hue_lo = doc.get_double("segment", "hue_lo", seg.hue_lo);
  seg.hue_hi = doc.get_double("segment", "hue_hi", seg.hue_hi);
  seg.min_area = static_cast<int>(doc.get_int("segment", "min_area", seg.min_area));
  seg.max_area = static_cast<int>(doc.get_int("segment", "max_area", seg.max_area));

  auto& mc = cfg.match;
  mc.ratio_lo = doc.get_double("match", "ratio_lo", mc.ratio_lo);
  mc.ratio_hi = doc.get_double("match", "ratio_hi", mc.ratio_hi);
  mc.min_matches = static_cast<int>(doc.get_int("match", "min_matches", mc.min_matches));
  mc.align_to_lattice = doc.get_bool("match", "align_to_lattice", mc.align_to_lattice);

  auto& g = cfg.gesture;
  g.press_on = doc.get_double("gesture", "press_on", g.press_on);
  g.press_off = doc.get_double("gesture", "press_off", g.press_off);
  g.push_on = doc.get_double("gesture", "push_on", g.push_on);
  g.push_off = doc.get_double("gesture", "push_off", g.push_off);
  g.rotate_step_deg = doc.get_double("gesture", "rotate_step_deg", g.rotate_step_deg);
  g.squeeze_on = doc.get_double("gesture", "squeeze_on", g.squeeze_on);
  g.squeeze_off = doc.get_double("gesture", "squeeze_off", g.squeeze_off);

  for (const auto& f : doc.get_list("patterns", "files")) {
    std::filesystem::path p(f);
    if (p.is_relative() && !base_dir.empty()) p = std::filesystem::path(base_dir) / p;
    cfg.pattern_files.push_back(p.string());
  }
  validate(cfg);
  return cfg;
}

PipelineConfig load_pipeline_config(const std::string& path) {
  const std::string text = read_file(path);
  return parse_pipeline_config(text, std::filesystem::path(path).parent_path().string());
}

void validate(const PipelineConfig& cfg) {
  validate(cfg.camera);
  validate(cfg.segment);
  validate(cfg.match);
  validate(cfg.gesture);
}

std::vector<LoadedPattern> load_patterns(const std::vector<std::string>& files) {
  std::vector<LoadedPattern> out;
  for (const auto& f : files) {
    HexPattern p = load_pattern(f);
    const auto report = verify(p, UniquenessMode::PerRotation);
    if (!report.valid())
      fail(ErrorKind::Domain, f + ": pattern has " + std::to_string(report.collisions.size()) + " window collisions");
    LookupTable t = build_lookup(p);
    out.push_back({f, std::move(p), std::move(t)});
  }
  return out;
}

FrameAnalysis analyze_points(std::vector<LabeledPoint> points, const LookupTable& lut, const MatchConfig& mc) {
  FrameAnalysis fa;
  fa.points = std::move(points);
  fa.correspondences.insufficient = true;
  if (fa.points.size() < 7) {
    fa.note = "only " + std::to_string(fa.points.size()) + " points detected";
    return fa;
  }
  fa.windows = group(fa.points, mc, 0.0);
  if (mc.align_to_lattice && !fa.windows.empty()) {
    fa.reference_deg = lattice_orientation(fa.points, fa.windows);
    if (fa.reference_deg != 0.0) fa.windows = group(fa.points, mc, fa.reference_deg);
  }
  if (fa.windows.empty()) {
    fa.note = "no complete 7-point windows";
    return fa;
  }
  try {
    fa.correspondences = resolve(fa.points, fa.windows, lut, mc);
  } catch (const Error& e) {
    if (e.kind() != ErrorKind::NoMatch) throw;
    fa.note = e.what();
    return fa;
  }
  if (fa.correspondences.insufficient)
    fa.note = std::to_string(fa.correspondences.match_count()) + " matched points, below " +
              std::to_string(mc.min_matches);
  return fa;
}

FrameAnalysis analyze_frame(const Image& frame, const LookupTable& lut, const SegmentConfig& seg,
                            const MatchConfig& mc) {
  return analyze_points(detect(frame, seg), lut, mc);
}

} // namespace lensleech
