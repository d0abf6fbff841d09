// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <string>
#include <vector>

#include "lensleech/detect.hpp"
#include "lensleech/gesture.hpp"
#include "lensleech/match.hpp"
#include "lensleech/optics.hpp"
#include "lensleech/pattern.hpp"

namespace lensleech {

// Everything the frame-stream tools need, read from one key-value file with the
// sections [camera], [segment], [match], [gesture] and [patterns].
struct PipelineConfig {
  CameraModel camera;
  SegmentConfig segment;
  MatchConfig match;
  GestureThresholds gesture;
  std::vector<std::string> pattern_files; // resolved against the config file directory
};

// Unknown sections or keys are parse errors. Pattern files are not opened here.
PipelineConfig parse_pipeline_config(const std::string& text, const std::string& base_dir = "");
PipelineConfig load_pipeline_config(const std::string& path);
void validate(const PipelineConfig& cfg);

struct LoadedPattern {
  std::string path;
  HexPattern pattern;
  LookupTable table;
};

// Loads and verifies every pattern file. Throws Error(Domain) for a pattern that fails
// per-rotation verification.
std::vector<LoadedPattern> load_patterns(const std::vector<std::string>& files);

struct FrameAnalysis {
  std::vector<LabeledPoint> points;
  std::vector<ObservedWindow> windows;
  double reference_deg = 0.0;
  CorrespondenceSet correspondences; // flagged insufficient when detection or matching fell short
  std::string note;                  // why the frame is insufficient, empty otherwise
};

// detect + group + resolve. Too few points, no windows, and no table hit all produce an
// insufficient correspondence set instead of an error.
FrameAnalysis analyze_frame(const Image& frame, const LookupTable& lut, const SegmentConfig& seg,
                            const MatchConfig& mc);
FrameAnalysis analyze_points(std::vector<LabeledPoint> points, const LookupTable& lut, const MatchConfig& mc);

} // namespace lensleech
