// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "lensleech/gesture.hpp"
#include "lensleech/pattern.hpp"
#include "lensleech/pipeline.hpp"
#include "lensleech/render.hpp"

namespace lensleech {

// ---- scenario scripts -------------------------------------------------------

struct ScriptFrame {
  PatternPose pose;
  DeformationState deformation;
  IlluminationModel illumination;
  int background = 0; // index into ScenarioScript::backgrounds
};

// Text form: top-level `pattern`, `seed`, `backgrounds` (comma list), then one [frame]
// block per frame. Frame keys: rotation_deg, translate_x_mm, translate_y_mm,
// distance_offset_mm, the deformation keys, lux, gain_r, gain_g, gain_b, blur_sigma_px,
// noise_sigma, background, repeat. A background is "procedural:N", "flat", or an image path.
struct ScenarioScript {
  std::string pattern; // pattern file; may be empty when the caller supplies the pattern
  std::uint64_t seed = 0;
  std::vector<std::string> backgrounds{"flat"};
  std::vector<ScriptFrame> frames;
};

// Throws ParseError for malformed text and Error(Domain) for broken invariants
// (no frames, background index out of range, missing background file).
ScenarioScript parse_script(const std::string& text, const std::string& base_dir = "");
std::string serialize_script(const ScenarioScript& s);

// Empty image for "flat".
Image load_background(const std::string& ref, const CameraModel& cam);

// Per-trial seed derived from a run seed, so trials stay reproducible in any order.
std::uint64_t trial_seed(std::uint64_t run_seed, std::uint64_t index);

std::vector<Frame> render_script(const ScenarioScript& s, const HexPattern& p, const CameraModel& cam);

// ---- shared setup -----------------------------------------------------------

struct HarnessSetup {
  HexPattern pattern;
  LookupTable table;
  CameraModel camera;
  SegmentConfig segment;
  MatchConfig match;
  GestureThresholds gesture;
};

// Radius-6, 2-color pattern from the given seed with default camera and thresholds.
HarnessSetup default_setup(std::uint64_t pattern_seed = 7);
HarnessSetup setup_from(const PipelineConfig& cfg, const HexPattern& p);

// The n pattern points nearest the origin (ties in disc order).
std::vector<AxialCoord> nearest_points(const HexPattern& p, std::size_t n);

// ---- gesture sequences ------------------------------------------------------

enum class ScriptedKind { Rest, Press, Push, Rotate, Squeeze };
std::string to_string(ScriptedKind k);
ScriptedKind parse_scripted_kind(const std::string& s);
std::optional<GestureKind> gesture_of(ScriptedKind k);

// Rest frames, a ramp to a randomized level above the onset threshold, a hold, and a
// ramp back to rest. Parameters are drawn from `seed`.
ScenarioScript scripted_sequence(ScriptedKind kind, std::uint64_t seed);

struct SequenceOutcome {
  std::vector<GestureEvent> events;
  std::optional<GestureKind> first_onset; // first onset or rotate delta
  int insufficient_frames = 0;
};

SequenceOutcome run_sequence(const HarnessSetup& s, const ScenarioScript& script);

struct DiscriminationResult {
  int gesture_sequences = 0;
  int correct = 0;
  int rest_sequences = 0;
  int rest_false_onsets = 0; // events emitted in rest sequences
  // confusion[expected][observed]; observed index 4 means "no onset".
  std::array<std::array<int, 5>, 4> confusion{};

  double accuracy() const { return gesture_sequences ? static_cast<double>(correct) / gesture_sequences : 0.0; }
};

DiscriminationResult run_gesture_discrimination(const HarnessSetup& s, int per_kind, int rest_count,
                                                std::uint64_t seed);

// ---- sweeps -----------------------------------------------------------------

struct RotationTrial {
  double truth_deg = 0.0;
  double estimate_deg = 0.0;
  double error_deg = 0.0;
  std::size_t matched = 0;
};

struct RotationAccuracy {
  std::vector<RotationTrial> trials;
  double mean_error = 0.0;
  double p50_error = 0.0;
  double p99_error = 0.0;
  double max_error = 0.0;
};

// At least 100 clean (noise-free) frames at uniform random rotations. Throws Error(Internal) when a clean frame
// fails to match.
RotationAccuracy run_rotation_accuracy(const HarnessSetup& s, int n, std::uint64_t seed);
// Same pipeline at an explicit list of angles.
RotationAccuracy run_rotation_at(const HarnessSetup& s, const std::vector<double>& angles, std::uint64_t seed);

struct SweepRow {
  double x = 0.0;
  int trials = 0;
  double mean_visible = 0.0;
  double mean_detected = 0.0;
  double std_detected = 0.0;
  double mean_matched = 0.0;
  double std_matched = 0.0;
  double rotation_error_deg = 0.0; // mean over trials that matched
};

struct SweepResult {
  std::string variable;
  std::vector<SweepRow> rows;
  std::optional<double> knee; // first x detecting >= 90% of the visible points

  // Each mean detected count is at least the previous one minus the larger of the two stds.
  bool monotone_within_std(bool non_increasing = false) const;
  // Some level detects >= 90% while the lowest nonzero level detects < 50%.
  bool knee_exists() const;
};

// Needs at least 5 ascending lux levels. Backgrounds are procedural indices; every (level, trial)
// pair picks one in turn.
SweepResult run_illuminance_sweep(const HarnessSetup& s, const std::vector<int>& backgrounds,
                                  const std::vector<double>& lux_levels, int trials_per_level, std::uint64_t seed);
SweepResult run_pupil_sweep(const HarnessSetup& s, const std::vector<double>& pupils_mm, int trials,
                            std::uint64_t seed);

struct CropRow {
  std::size_t drawn = 0;
  std::size_t detected = 0;
  std::size_t matched = 0;
  bool insufficient = true;
  bool pose_produced = false;
  std::size_t events = 0;
};

// For each count, a fresh tracker sees one full rest frame, then a frame that draws only
// the `count` nearest points while pushed by `push_pitches` grid units.
std::vector<CropRow> run_crop_sweep(const HarnessSetup& s, const std::vector<std::size_t>& counts,
                                    double push_pitches, std::uint64_t seed);

struct BenchRow {
  std::size_t points = 0;
  int frames = 0;
  double seconds = 0.0;
  double fps = 0.0;
  double mean_matched = 0.0;
};

// Frames are rendered up front; only detect + match + tracker time is measured.
std::vector<BenchRow> run_bench(const HarnessSetup& s, const std::vector<std::size_t>& counts, int frames,
                                std::uint64_t seed);

// ---- CSV --------------------------------------------------------------------

std::string to_csv(const RotationAccuracy& r);
std::string to_csv(const SweepResult& r);
std::string to_csv(const std::vector<CropRow>& rows);
std::string to_csv(const std::vector<BenchRow>& rows);
std::string to_csv(const DiscriminationResult& r);

} // namespace lensleech
