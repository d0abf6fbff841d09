// SPDX-License-Identifier: Apache-2.0
#include "lensleech/evalharness.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <limits>
#include <mutex>
#include <numeric>
#include <random>
#include <sstream>

#include "lensleech/config.hpp"
#include "lensleech/error.hpp"
#include "lensleech/textio.hpp"

namespace lensleech {

// ---- scenario scripts -------------------------------------------------------

namespace {

const Image& procedural_cached(int w, int h, int index) {
  static std::mutex mu;
  static std::map<std::tuple<int, int, int>, Image> cache;
  const std::lock_guard<std::mutex> lock(mu);
  const auto key = std::make_tuple(w, h, index);
  auto it = cache.find(key);
  if (it == cache.end()) it = cache.emplace(key, procedural_background(w, h, index)).first;
  return it->second;
}

constexpr std::string_view kProcedural = "procedural:";

ScriptFrame frame_from(const KeyValueDoc& doc, ScriptFrame f) {
  f.pose.rotation_deg = doc.get_double("", "rotation_deg", f.pose.rotation_deg);
  f.pose.translation_mm.x = doc.get_double("", "translate_x_mm", f.pose.translation_mm.x);
  f.pose.translation_mm.y = doc.get_double("", "translate_y_mm", f.pose.translation_mm.y);
  f.pose.distance_offset_mm = doc.get_double("", "distance_offset_mm", f.pose.distance_offset_mm);
  f.deformation = deformation_from(doc, "");
  auto& ill = f.illumination;
  ill.lux = doc.get_double("", "lux", ill.lux);
  ill.gain[0] = doc.get_double("", "gain_r", ill.gain[0]);
  ill.gain[1] = doc.get_double("", "gain_g", ill.gain[1]);
  ill.gain[2] = doc.get_double("", "gain_b", ill.gain[2]);
  ill.blur_sigma_px = doc.get_double("", "blur_sigma_px", ill.blur_sigma_px);
  ill.noise_sigma = doc.get_double("", "noise_sigma", ill.noise_sigma);
  f.background = static_cast<int>(doc.get_int("", "background", f.background));
  return f;
}

} // namespace

ScenarioScript parse_script(const std::string& text, const std::string& base_dir) {
  const KeyValueDoc doc = KeyValueDoc::parse(text);
  ScenarioScript s;
  s.pattern = doc.get_string("", "pattern", "");
  if (!s.pattern.empty() && !base_dir.empty() && std::filesystem::path(s.pattern).is_relative())
    s.pattern = (std::filesystem::path(base_dir) / s.pattern).string();
  s.seed = static_cast<std::uint64_t>(doc.get_int("", "seed", 0));
  if (doc.has("", "backgrounds")) {
    s.backgrounds.clear();
    for (auto& b : doc.get_list("", "backgrounds")) {
      if (b != "flat" && b.rfind(kProcedural, 0) != 0 && !base_dir.empty() && std::filesystem::path(b).is_relative())
        b = (std::filesystem::path(base_dir) / b).string();
      s.backgrounds.push_back(b);
    }
  }
  for (const auto& b : s.backgrounds) {
    if (b == "flat" || b.rfind(kProcedural, 0) == 0) continue;
    if (!std::filesystem::exists(b)) fail(ErrorKind::Domain, "script: background '" + b + "' does not exist");
  }
  for (const auto& b : doc.blocks()) {
    if (b.name.empty()) continue;
    if (b.name != "frame") throw ParseError(b.line, 1, "unknown section [" + b.name + "]");
    const KeyValueDoc fd = KeyValueDoc::from_block(b);
    const ScriptFrame f = frame_from(fd, {});
    validate(f.deformation);
    validate(f.illumination);
    if (f.background < 0 || f.background >= static_cast<int>(s.backgrounds.size()))
      throw ParseError(b.line, 1, "background index " + std::to_string(f.background) + " out of range");
    const long long repeat = fd.get_int("", "repeat", 1);
    if (repeat < 1 || repeat > 100000) throw ParseError(b.line, 1, "repeat must lie in [1, 100000]");
    for (long long i = 0; i < repeat; ++i) s.frames.push_back(f);
  }
  if (s.frames.empty()) fail(ErrorKind::Domain, "script: no [frame] blocks");
  return s;
}

std::string serialize_script(const ScenarioScript& s) {
  std::ostringstream o;
  if (!s.pattern.empty()) o << "pattern = \"" << s.pattern << "\"\n";
  o << "seed = " << s.seed << "\n";
  o << "backgrounds = ";
  for (std::size_t i = 0; i < s.backgrounds.size(); ++i) o << (i ? ", " : "") << s.backgrounds[i];
  o << "\n";
  const ScriptFrame defaults;
  for (const auto& f : s.frames) {
    o << "\n[frame]\n";
    auto kv = [&](const char* k, double v, double def) {
      if (v != def) o << k << " = " << format_double(v) << "\n";
    };
    kv("rotation_deg", f.pose.rotation_deg, 0.0);
    kv("translate_x_mm", f.pose.translation_mm.x, 0.0);
    kv("translate_y_mm", f.pose.translation_mm.y, 0.0);
    kv("distance_offset_mm", f.pose.distance_offset_mm, 0.0);
    o << to_key_values(f.deformation);
    const auto& ill = f.illumination;
    const auto& d = defaults.illumination;
    kv("lux", ill.lux, d.lux);
    kv("gain_r", ill.gain[0], d.gain[0]);
    kv("gain_g", ill.gain[1], d.gain[1]);
    kv("gain_b", ill.gain[2], d.gain[2]);
    kv("blur_sigma_px", ill.blur_sigma_px, d.blur_sigma_px);
    kv("noise_sigma", ill.noise_sigma, d.noise_sigma);
    if (f.background != 0) o << "background = " << f.background << "\n";
  }
  return o.str();
}

Image load_background(const std::string& ref, const CameraModel& cam) {
  if (ref == "flat" || ref.empty()) return {};
  if (ref.rfind(kProcedural, 0) == 0) {
    long long idx = 0;
    if (!parse_int(std::string_view(ref).substr(kProcedural.size()), idx))
      fail(ErrorKind::Domain, "bad procedural background '" + ref + "'");
    return procedural_cached(cam.width, cam.height, static_cast<int>(idx));
  }
  Image img = load_image(ref);
  if (img.width != cam.width || img.height != cam.height)
    fail(ErrorKind::Domain, "background '" + ref + "' does not match the camera size");
  return img;
}

std::uint64_t trial_seed(std::uint64_t run_seed, std::uint64_t index) {
  // splitmix64 over the combined value.
  std::uint64_t z = run_seed * 0x9e3779b97f4a7c15ULL + index + 0x632be59bd9b4e019ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

std::vector<Frame> render_script(const ScenarioScript& s, const HexPattern& p, const CameraModel& cam) {
  std::vector<Image> bgs;
  for (const auto& b : s.backgrounds) bgs.push_back(load_background(b, cam));
  std::vector<Frame> out;
  out.reserve(s.frames.size());
  for (std::size_t i = 0; i < s.frames.size(); ++i) {
    const auto& f = s.frames[i];
    RenderOptions ro;
    ro.seed = trial_seed(s.seed, i);
    out.push_back(render(p, f.deformation, f.pose, cam, f.illumination, bgs.at(static_cast<std::size_t>(f.background)), ro));
  }
  return out;
}

// ---- shared setup -----------------------------------------------------------

HarnessSetup default_setup(std::uint64_t pattern_seed) {
  GenerateOptions go;
  go.seed = pattern_seed;
  HexPattern p = generate(go);
  LookupTable t = build_lookup(p);
  return {std::move(p), std::move(t), {}, {}, {}, {}};
}

HarnessSetup setup_from(const PipelineConfig& cfg, const HexPattern& p) {
  return {p, build_lookup(p), cfg.camera, cfg.segment, cfg.match, cfg.gesture};
}

std::vector<AxialCoord> nearest_points(const HexPattern& p, std::size_t n) {
  std::vector<std::size_t> idx(p.size());
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
    return norm(point_position(p.disc().coords[a], 1.0)) < norm(point_position(p.disc().coords[b], 1.0)) - 1e-9;
  });
  std::vector<AxialCoord> out;
  for (std::size_t i = 0; i < std::min(n, idx.size()); ++i) out.push_back(p.disc().coords[idx[i]]);
  return out;
}

// ---- gesture sequences ------------------------------------------------------

std::string to_string(ScriptedKind k) {
  switch (k) {
  case ScriptedKind::Rest: return "rest";
  case ScriptedKind::Press: return "press";
  case ScriptedKind::Push: return "push";
  case ScriptedKind::Rotate: return "rotate";
  case ScriptedKind::Squeeze: return "squeeze";
  }
  return "?";
}

ScriptedKind parse_scripted_kind(const std::string& s) {
  for (auto k : {ScriptedKind::Rest, ScriptedKind::Press, ScriptedKind::Push, ScriptedKind::Rotate, ScriptedKind::Squeeze})
    if (to_string(k) == s) return k;
  fail(ErrorKind::Domain, "unknown sequence kind '" + s + "' (rest, press, push, rotate, squeeze)");
}

std::optional<GestureKind> gesture_of(ScriptedKind k) {
  switch (k) {
  case ScriptedKind::Press: return GestureKind::Press;
  case ScriptedKind::Push: return GestureKind::Push;
  case ScriptedKind::Rotate: return GestureKind::Rotate;
  case ScriptedKind::Squeeze: return GestureKind::Squeeze;
  case ScriptedKind::Rest: break;
  }
  return std::nullopt;
}

ScenarioScript scripted_sequence(ScriptedKind kind, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  auto uniform = [&](double lo, double hi) { return lo + (hi - lo) * unit(rng); };

  ScenarioScript s;
  s.seed = seed;
  s.backgrounds = {"procedural:" + std::to_string(static_cast<int>(uniform(0, kProceduralBackgroundCount)))};
  ScriptFrame base;
  base.pose.rotation_deg = uniform(0.0, 360.0);
  base.pose.translation_mm = {uniform(-1.0, 1.0), uniform(-1.0, 1.0)};
  base.illumination.lux = uniform(350.0, 700.0);

  // Level in [0, 1] over: 3 rest, 5 ramp up, 3 hold, 3 ramp down, 2 rest.
  std::vector<double> levels;
  for (int i = 0; i < 3; ++i) levels.push_back(0.0);
  for (int i = 1; i <= 5; ++i) levels.push_back(i / 5.0);
  for (int i = 0; i < 3; ++i) levels.push_back(1.0);
  for (int i = 2; i >= 0; --i) levels.push_back(i / 3.0);
  for (int i = 0; i < 2; ++i) levels.push_back(0.0);

  const double pitch = kDefaultPitchMm;
  const double press_amp = uniform(0.7, 1.3);
  const int press_cell = static_cast<int>(uniform(0.0, 19.0)); // within hex distance 2
  const double push_len = uniform(0.6, 1.2) * pitch;
  const double push_dir = uniform(0.0, 360.0);
  const double rot_total = uniform(6.0, 30.0) * (unit(rng) < 0.5 ? -1.0 : 1.0);
  const double sq_ratio = uniform(0.72, 0.82);
  const double sq_axis = uniform(0.0, 180.0);

  for (double lv : levels) {
    ScriptFrame f = base;
    auto& d = f.deformation;
    if (lv > 0.0) {
      switch (kind) {
      case ScriptedKind::Press: {
        Press pr;
        pr.center_mm = point_position(hex_disc(2).coords[static_cast<std::size_t>(press_cell)], pitch);
        pr.amplitude_mm = press_amp * lv;
        d.press = pr;
        break;
      }
      case ScriptedKind::Push: d.push_mm = rotated({push_len * lv, 0.0}, push_dir); break;
      case ScriptedKind::Rotate: d.rotate_deg = rot_total * lv; break;
      case ScriptedKind::Squeeze: d.squeeze = Squeeze{sq_axis, 1.0 - (1.0 - sq_ratio) * lv}; break;
      case ScriptedKind::Rest: break;
      }
    }
    s.frames.push_back(f);
  }
  return s;
}

SequenceOutcome run_sequence(const HarnessSetup& s, const ScenarioScript& script) {
  const auto frames = render_script(script, s.pattern, s.camera);
  Tracker tracker(s.gesture);
  SequenceOutcome out;
  for (std::size_t i = 0; i < frames.size(); ++i) {
    const FrameAnalysis fa = analyze_frame(frames[i].image, s.table, s.segment, s.match);
    if (fa.correspondences.insufficient) ++out.insufficient_frames;
    for (auto& e : tracker.step(fa.correspondences, static_cast<std::int64_t>(i))) {
      if (!out.first_onset && e.phase != GesturePhase::Release) out.first_onset = e.kind;
      out.events.push_back(e);
    }
  }
  return out;
}

DiscriminationResult run_gesture_discrimination(const HarnessSetup& s, int per_kind, int rest_count,
                                                std::uint64_t seed) {
  DiscriminationResult r;
  const ScriptedKind kinds[] = {ScriptedKind::Press, ScriptedKind::Push, ScriptedKind::Rotate, ScriptedKind::Squeeze};
  std::uint64_t index = 0;
  for (int ki = 0; ki < 4; ++ki) {
    for (int i = 0; i < per_kind; ++i) {
      const auto out = run_sequence(s, scripted_sequence(kinds[ki], trial_seed(seed, index++)));
      ++r.gesture_sequences;
      const int observed = out.first_onset ? static_cast<int>(*out.first_onset) : 4;
      ++r.confusion[static_cast<std::size_t>(ki)][static_cast<std::size_t>(observed)];
      if (out.first_onset && *out.first_onset == *gesture_of(kinds[ki])) ++r.correct;
    }
  }
  for (int i = 0; i < rest_count; ++i) {
    const auto out = run_sequence(s, scripted_sequence(ScriptedKind::Rest, trial_seed(seed, index++)));
    ++r.rest_sequences;
    r.rest_false_onsets += static_cast<int>(out.events.size());
  }
  return r;
}

// ---- sweeps -----------------------------------------------------------------

namespace {

double percentile(std::vector<double> v, double q) {
  if (v.empty()) return 0.0;
  std::sort(v.begin(), v.end());
  const double pos = q * static_cast<double>(v.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const auto hi = std::min(lo + 1, v.size() - 1);
  return v[lo] + (v[hi] - v[lo]) * (pos - static_cast<double>(lo));
}

std::vector<Vec2> rest_of(const CorrespondenceSet& cs) {
  std::vector<Vec2> out;
  for (const auto& c : cs.pairs) out.push_back(point_position(c.coord, 1.0));
  return out;
}

std::vector<Vec2> obs_of(const CorrespondenceSet& cs) {
  std::vector<Vec2> out;
  for (const auto& c : cs.pairs) out.push_back(image_to_math(c.image));
  return out;
}

double rotation_of(const CorrespondenceSet& cs) { return kabsch_rotation(rest_of(cs), obs_of(cs)); }

void mean_std(const std::vector<double>& v, double& mean, double& sd) {
  mean = sd = 0.0;
  if (v.empty()) return;
  mean = std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
  double ss = 0.0;
  for (double x : v) ss += (x - mean) * (x - mean);
  sd = v.size() > 1 ? std::sqrt(ss / static_cast<double>(v.size() - 1)) : 0.0;
}

} // namespace

RotationAccuracy run_rotation_at(const HarnessSetup& s, const std::vector<double>& angles, std::uint64_t seed) {
  RotationAccuracy r;
  std::vector<double> errs;
  for (std::size_t i = 0; i < angles.size(); ++i) {
    PatternPose pose;
    pose.rotation_deg = angles[i];
    const Image& bg = procedural_cached(s.camera.width, s.camera.height, static_cast<int>(i % kProceduralBackgroundCount));
    RenderOptions ro;
    ro.seed = trial_seed(seed, i);
    // Clean frames: optics blur and scene clutter, no sensor noise.
    IlluminationModel ill;
    ill.noise_sigma = 0.0;
    const Frame f = render(s.pattern, {}, pose, s.camera, ill, bg, ro);
    const FrameAnalysis fa = analyze_frame(f.image, s.table, s.segment, s.match);
    if (fa.correspondences.insufficient)
      fail(ErrorKind::Internal, "rotation harness: clean frame at " + format_fixed(angles[i], 3) + " deg did not match (" + fa.note + ")");
    RotationTrial t;
    t.truth_deg = wrap_degrees(angles[i]);
    t.estimate_deg = rotation_of(fa.correspondences);
    t.error_deg = std::fabs(angle_diff(t.estimate_deg, t.truth_deg));
    t.matched = fa.correspondences.match_count();
    errs.push_back(t.error_deg);
    r.trials.push_back(t);
  }
  if (!errs.empty()) {
    r.mean_error = std::accumulate(errs.begin(), errs.end(), 0.0) / static_cast<double>(errs.size());
    r.p50_error = percentile(errs, 0.5);
    r.p99_error = percentile(errs, 0.99);
    r.max_error = *std::max_element(errs.begin(), errs.end());
  }
  return r;
}

RotationAccuracy run_rotation_accuracy(const HarnessSetup& s, int n, std::uint64_t seed) {
  require(n >= 100, "rotation harness: need at least 100 trials");
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> angle(0.0, 360.0);
  std::vector<double> angles(static_cast<std::size_t>(n));
  for (auto& a : angles) a = angle(rng);
  return run_rotation_at(s, angles, seed);
}

bool SweepResult::monotone_within_std(bool non_increasing) const {
  for (std::size_t i = 1; i < rows.size(); ++i) {
    const double tol = std::max(rows[i].std_detected, rows[i - 1].std_detected);
    const double step = rows[i].mean_detected - rows[i - 1].mean_detected;
    if (non_increasing ? step > tol : step < -tol) return false;
  }
  return true;
}

bool SweepResult::knee_exists() const {
  bool high = false;
  std::optional<double> lowest;
  for (const auto& r : rows) {
    if (r.mean_visible <= 0.0) continue;
    const double frac = r.mean_detected / r.mean_visible;
    if (frac >= 0.9) high = true;
    if (r.x > 0.0 && !lowest) lowest = frac;
  }
  return high && lowest && *lowest < 0.5;
}

namespace {

struct TrialCounts {
  double visible = 0, detected = 0, matched = 0;
  std::optional<double> rot_err;
};

// Visible dots with a detection near their true center. A dot that breaks into fragments
// counts once and clutter counts not at all.
std::size_t detected_dots(const Frame& f, const std::vector<LabeledPoint>& points) {
  std::vector<Vec2> dots;
  for (const auto& g : f.truth)
    if (g.visible) dots.push_back(g.pixel);
  double spacing = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < dots.size(); ++i)
    for (std::size_t j = i + 1; j < dots.size(); ++j) spacing = std::min(spacing, distance(dots[i], dots[j]));
  const double reach = 0.35 * spacing;
  std::size_t n = 0;
  for (const Vec2& d : dots)
    for (const auto& p : points)
      if (distance(p.position, d) <= reach) {
        ++n;
        break;
      }
  return n;
}

TrialCounts run_trial(const HarnessSetup& s, const CameraModel& cam, const IlluminationModel& ill, int bg_index,
                      double rotation, std::uint64_t seed) {
  PatternPose pose;
  pose.rotation_deg = rotation;
  RenderOptions ro;
  ro.seed = seed;
  const Frame f = render(s.pattern, {}, pose, cam, ill, procedural_cached(cam.width, cam.height, bg_index), ro);
  const FrameAnalysis fa = analyze_frame(f.image, s.table, s.segment, s.match);
  TrialCounts t;
  t.visible = static_cast<double>(f.visible_count());
  t.detected = static_cast<double>(detected_dots(f, fa.points));
  t.matched = static_cast<double>(fa.correspondences.insufficient ? 0 : fa.correspondences.match_count());
  if (!fa.correspondences.insufficient) t.rot_err = std::fabs(angle_diff(rotation_of(fa.correspondences), rotation));
  return t;
}

SweepRow summarize(double x, const std::vector<TrialCounts>& trials) {
  SweepRow row;
  row.x = x;
  row.trials = static_cast<int>(trials.size());
  std::vector<double> vis, det, mat, err;
  for (const auto& t : trials) {
    vis.push_back(t.visible);
    det.push_back(t.detected);
    mat.push_back(t.matched);
    if (t.rot_err) err.push_back(*t.rot_err);
  }
  double sd = 0.0;
  mean_std(vis, row.mean_visible, sd);
  mean_std(det, row.mean_detected, row.std_detected);
  mean_std(mat, row.mean_matched, row.std_matched);
  mean_std(err, row.rotation_error_deg, sd);
  return row;
}

} // namespace

SweepResult run_illuminance_sweep(const HarnessSetup& s, const std::vector<int>& backgrounds,
                                  const std::vector<double>& lux_levels, int trials_per_level, std::uint64_t seed) {
  require(!backgrounds.empty(), "illuminance sweep: need at least one background");
  require(trials_per_level >= 1, "illuminance sweep: need at least one trial per level");
  require(lux_levels.size() >= 5, "illuminance sweep: need at least 5 lux levels");
  require(std::is_sorted(lux_levels.begin(), lux_levels.end()), "illuminance sweep: lux levels must be ascending");
  SweepResult res;
  res.variable = "lux";
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> angle(0.0, 360.0);
  std::uint64_t index = 0;
  for (double lux : lux_levels) {
    std::vector<TrialCounts> trials;
    for (int t = 0; t < trials_per_level; ++t) {
      IlluminationModel ill;
      ill.lux = lux;
      const int bg = backgrounds[static_cast<std::size_t>(t) % backgrounds.size()];
      trials.push_back(run_trial(s, s.camera, ill, bg, angle(rng), trial_seed(seed, index++)));
    }
    res.rows.push_back(summarize(lux, trials));
    const auto& row = res.rows.back();
    if (!res.knee && row.mean_visible > 0.0 && row.mean_detected >= 0.9 * row.mean_visible) res.knee = lux;
  }
  return res;
}

SweepResult run_pupil_sweep(const HarnessSetup& s, const std::vector<double>& pupils_mm, int trials,
                            std::uint64_t seed) {
  require(pupils_mm.size() >= 3, "pupil sweep: need at least 3 pupil diameters");
  require(trials >= 1, "pupil sweep: need at least one trial");
  SweepResult res;
  res.variable = "pupil_mm";
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> angle(0.0, 360.0);
  std::uint64_t index = 0;
  for (double pupil : pupils_mm) {
    CameraModel cam = s.camera;
    cam.pupil_mm = pupil;
    std::vector<TrialCounts> rows;
    for (int t = 0; t < trials; ++t)
      rows.push_back(run_trial(s, cam, {}, t % kProceduralBackgroundCount, angle(rng), trial_seed(seed, index++)));
    res.rows.push_back(summarize(pupil, rows));
  }
  return res;
}

std::vector<CropRow> run_crop_sweep(const HarnessSetup& s, const std::vector<std::size_t>& counts,
                                    double push_pitches, std::uint64_t seed) {
  std::vector<CropRow> out;
  const Image& bg = procedural_cached(s.camera.width, s.camera.height, 0);
  RenderOptions full;
  full.seed = trial_seed(seed, 0);
  const Frame rest = render(s.pattern, {}, {}, s.camera, {}, bg, full);
  const FrameAnalysis rest_fa = analyze_frame(rest.image, s.table, s.segment, s.match);
  for (std::size_t i = 0; i < counts.size(); ++i) {
    DeformationState d;
    d.push_mm = {push_pitches * s.pattern.pitch_mm(), 0.0};
    RenderOptions ro;
    ro.seed = trial_seed(seed, i + 1);
    ro.only = nearest_points(s.pattern, counts[i]);
    const Frame f = render(s.pattern, d, {}, s.camera, {}, bg, ro);
    const FrameAnalysis fa = analyze_frame(f.image, s.table, s.segment, s.match);
    Tracker tracker(s.gesture);
    tracker.step(rest_fa.correspondences, 0);
    const auto events = tracker.step(fa.correspondences, 1);
    CropRow row;
    row.drawn = f.visible_count();
    row.detected = fa.points.size();
    row.matched = fa.correspondences.match_count();
    row.insufficient = fa.correspondences.insufficient;
    if (!row.insufficient) {
      estimate_pose(fa.correspondences, *tracker.reference());
      row.pose_produced = true;
    }
    row.events = events.size();
    out.push_back(row);
  }
  return out;
}

std::vector<BenchRow> run_bench(const HarnessSetup& s, const std::vector<std::size_t>& counts, int frames,
                                std::uint64_t seed) {
  require(frames >= 1, "bench: need at least one frame");
  std::vector<BenchRow> out;
  std::uint64_t index = 0;
  for (std::size_t n : counts) {
    std::vector<Image> images;
    const auto only = nearest_points(s.pattern, n);
    for (int i = 0; i < frames; ++i) {
      DeformationState d;
      d.rotate_deg = 0.5 * i; // slow turn so the tracker has work to do
      RenderOptions ro;
      ro.seed = trial_seed(seed, index++);
      ro.only = only;
      images.push_back(render(s.pattern, d, {}, s.camera, {},
                              procedural_cached(s.camera.width, s.camera.height, i % kProceduralBackgroundCount), ro)
                           .image);
    }
    Tracker tracker(s.gesture);
    double matched = 0.0;
    const auto t0 = std::chrono::steady_clock::now();
    for (int i = 0; i < frames; ++i) {
      const FrameAnalysis fa = analyze_frame(images[static_cast<std::size_t>(i)], s.table, s.segment, s.match);
      tracker.step(fa.correspondences, i);
      matched += static_cast<double>(fa.correspondences.match_count());
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    BenchRow row;
    row.points = n;
    row.frames = frames;
    row.seconds = secs;
    row.fps = secs > 0.0 ? frames / secs : 0.0;
    row.mean_matched = matched / frames;
    out.push_back(row);
  }
  return out;
}

// ---- CSV --------------------------------------------------------------------

std::string to_csv(const RotationAccuracy& r) {
  std::string s = "trial,truth_deg,estimate_deg,error_deg,matched\n";
  for (std::size_t i = 0; i < r.trials.size(); ++i) {
    const auto& t = r.trials[i];
    s += std::to_string(i) + "," + format_fixed(t.truth_deg, 6) + "," + format_fixed(t.estimate_deg, 6) + "," +
         format_fixed(t.error_deg, 6) + "," + std::to_string(t.matched) + "\n";
  }
  return s;
}

std::string to_csv(const SweepResult& r) {
  std::string s = r.variable + ",trials,mean_visible,mean_detected,std_detected,mean_matched,std_matched,rotation_error_deg\n";
  for (const auto& row : r.rows) {
    s += format_double(row.x) + "," + std::to_string(row.trials) + "," + format_fixed(row.mean_visible, 3) + "," +
         format_fixed(row.mean_detected, 3) + "," + format_fixed(row.std_detected, 3) + "," +
         format_fixed(row.mean_matched, 3) + "," + format_fixed(row.std_matched, 3) + "," +
         format_fixed(row.rotation_error_deg, 6) + "\n";
  }
  return s;
}

std::string to_csv(const std::vector<CropRow>& rows) {
  std::string s = "drawn,detected,matched,insufficient,pose_produced,events\n";
  for (const auto& r : rows) {
    s += std::to_string(r.drawn) + "," + std::to_string(r.detected) + "," + std::to_string(r.matched) + "," +
         (r.insufficient ? "1" : "0") + "," + (r.pose_produced ? "1" : "0") + "," + std::to_string(r.events) + "\n";
  }
  return s;
}

std::string to_csv(const std::vector<BenchRow>& rows) {
  std::string s = "points,frames,seconds,fps,mean_matched\n";
  for (const auto& r : rows) {
    s += std::to_string(r.points) + "," + std::to_string(r.frames) + "," + format_fixed(r.seconds, 4) + "," +
         format_fixed(r.fps, 2) + "," + format_fixed(r.mean_matched, 2) + "\n";
  }
  return s;
}

std::string to_csv(const DiscriminationResult& r) {
  static const char* observed[] = {"press", "push", "rotate", "squeeze", "none"};
  std::string s = "expected,press,push,rotate,squeeze,none\n";
  for (std::size_t i = 0; i < 4; ++i) {
    s += observed[i];
    for (int c : r.confusion[i]) s += "," + std::to_string(c);
    s += "\n";
  }
  s += "rest," + std::to_string(r.rest_false_onsets) + ",,,,\n";
  return s;
}

} // namespace lensleech
