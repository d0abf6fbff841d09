// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "lensleech/detect.hpp"
#include "lensleech/error.hpp"
#include "lensleech/gesture.hpp"
#include "lensleech/pattern.hpp"
#include "lensleech/pipeline.hpp"
#include "lensleech/render.hpp"

namespace lensleech {

// {"points": [{"x", "y", "class", "confidence", "hue"}, ...]}
std::string points_to_json(std::span<const LabeledPoint> points);
// Inverse of points_to_json. Throws Error(Parse).
std::vector<LabeledPoint> points_from_json(std::string_view text);

// Render sidecar: pose, deformation, illumination and per-point ground truth.
std::string frame_sidecar_json(const Frame& f, const PatternPose& pose, const DeformationState& d,
                               const IlluminationModel& ill);

// Windows, table hits per rotation, and the resolved pairs of one frame.
std::string analysis_to_json(const FrameAnalysis& fa);

// One JSON Lines record without the trailing newline.
std::string event_to_json(const GestureEvent& e);

std::string lookup_to_json(const LookupTable& t);
std::string report_to_json(const UniquenessReport& r);
std::string pose_to_json(const PoseEstimate& p);

// {"error": {"kind", "message"}} plus line/field for parse errors.
std::string error_to_json(const Error& e);
std::string error_to_json(ErrorKind kind, std::string_view message);

} // namespace lensleech
