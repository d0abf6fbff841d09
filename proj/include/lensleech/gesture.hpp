// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "lensleech/match.hpp"
#include "lensleech/registration.hpp"

namespace lensleech {

// Image-space frame of the rest pattern, learned from a baseline frame.
struct PoseReference {
  double scale_px = 1.0; // pixels per grid pitch
  Vec2 origin;           // grid origin, image math coordinates (y up)
  double rotation_deg = 0.0;
};

// Throws Error(Insufficient) when cs is flagged insufficient.
PoseReference reference_from(const CorrespondenceSet& cs);

struct PoseEstimate {
  double rotation_deg = 0.0;  // [0, 360), rest grid to image
  Vec2 translation;           // centroid offset from the reference, grid pitch units, y up
  double scale_residual = 0.0; // similarity RMS in grid pitch units
};

// Throws Error(Insufficient) when cs is flagged insufficient.
PoseEstimate estimate_pose(const CorrespondenceSet& cs, const PoseReference& ref);

struct LocalStrain {
  AxialCoord coord;
  double strain = 1.0;
  int neighbors = 0;
};

struct StrainSummary {
  std::vector<LocalStrain> local; // sorted by coord
  std::array<double, 4> tensor{1.0, 0.0, 0.0, 1.0}; // row-major, symmetric
  double major_stretch = 1.0;
  double minor_stretch = 1.0;
  double minor_axis_deg = 0.0; // [0, 180), in the rotation-free pattern frame
  double rotation_deg = 0.0;

  const LocalStrain* peak() const;
};

inline constexpr int kMinStrainNeighbors = 3;

// Local strain uses matched grid neighbors only; points with fewer than
// kMinStrainNeighbors of them are skipped. The global tensor comes from an affine fit
// of rest to observed after removing the Kabsch rotation, divided by scale_px.
// Throws Error(Insufficient) for an insufficient set and Error(Degenerate) when the
// affine fit is singular.
StrainSummary strain(const CorrespondenceSet& cs, double scale_px);

struct GestureThresholds {
  double press_on = 1.12;
  double press_off = 1.06;
  double push_on = 0.35; // grid pitch units
  double push_off = 0.2;
  double rotate_step_deg = 0.5;
  double squeeze_on = 0.88;
  double squeeze_off = 0.94;
};

void validate(const GestureThresholds& t);

enum class GestureKind { Press, Push, Rotate, Squeeze };
enum class GesturePhase { Onset, Release, Delta };

std::string to_string(GestureKind k);
std::string to_string(GesturePhase p);

struct GestureEvent {
  std::int64_t frame = 0;
  GestureKind kind = GestureKind::Press;
  GesturePhase phase = GesturePhase::Onset;
  double magnitude = 0.0;
  std::optional<Vec2> direction;      // unit vector; squeeze carries its axis
  std::optional<double> axis_deg;     // squeeze only
  std::optional<AxialCoord> location; // press only
  double cumulative_rotation_deg = 0.0;
};

// Hysteresis state machine over a strictly increasing frame stream. The first
// sufficient frame becomes the rest reference.
class Tracker {
public:
  explicit Tracker(GestureThresholds t = {});

  // Throws Error(Sequencing) when frame does not exceed the previous one.
  std::vector<GestureEvent> step(const CorrespondenceSet& cs, std::int64_t frame);

  const GestureThresholds& thresholds() const { return thresholds_; }
  const std::optional<PoseReference>& reference() const { return reference_; }
  const std::optional<PoseEstimate>& last_pose() const { return last_pose_; }
  double cumulative_rotation_deg() const { return cumulative_deg_; }
  bool pressed() const { return pressed_; }
  bool pushed() const { return pushed_; }
  bool squeezed() const { return squeezed_; }

private:
  GestureThresholds thresholds_;
  std::optional<std::int64_t> last_frame_;
  std::optional<PoseReference> reference_;
  std::optional<PoseEstimate> last_pose_;
  double last_rotation_deg_ = 0.0;
  double cumulative_deg_ = 0.0;
  double emitted_deg_ = 0.0;
  bool pressed_ = false;
  AxialCoord press_location_;
  bool pushed_ = false;
  bool squeezed_ = false;
};

} // namespace lensleech
