// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <array>
#include <span>
#include <vector>

#include "lensleech/detect.hpp"
#include "lensleech/pattern.hpp"

namespace lensleech {

inline constexpr int kMinMatchedPoints = 19;

struct MatchConfig {
  double ratio_lo = 0.6; // ring distances relative to the median nearest-neighbor distance
  double ratio_hi = 1.6;
  int min_matches = kMinMatchedPoints;
  // Start rings at the dominant lattice direction instead of +x; see lattice_orientation.
  bool align_to_lattice = true;
};

void validate(const MatchConfig& cfg);

// A detected point and its six nearest neighbors, ordered CCW (y up) by image angle,
// starting at the neighbor closest to the reference direction.
struct ObservedWindow {
  int center = 0;
  std::array<int, 6> ring{};
  WindowCode code;
};

// Throws Error(Insufficient) for fewer than 7 points.
std::vector<ObservedWindow> group(std::span<const LabeledPoint> points, const MatchConfig& cfg,
                                  double reference_deg = 0.0);

// Dominant hex-lattice direction of the windows' ring vectors, in (-30, 30] degrees.
// Using it as the ring reference keeps every window's starting neighbor consistent even
// when the lattice sits near +-30 degrees from +x.
double lattice_orientation(std::span<const LabeledPoint> points, std::span<const ObservedWindow> windows);

struct Correspondence {
  int point = 0;     // index into the detected points
  AxialCoord coord;  // grid position
  Vec2 image;        // pixel position
};

struct CorrespondenceSet {
  std::vector<Correspondence> pairs; // sorted by point index; one-to-one
  int rotation = 0;                  // global rotation hypothesis k, pattern turned by ~k*60 degrees
  std::array<int, 6> raw_hits{};     // table hits per hypothesis
  std::array<int, 6> scores{};       // neighbor-consistent windows per hypothesis
  double residual_px = 0.0;          // RMS after the best similarity alignment
  bool insufficient = true;          // fewer than min_matches pairs

  std::size_t match_count() const { return pairs.size(); }
};

// Votes the windows against the table under all six rotations. Throws Error(NoMatch)
// when no window hits the table under any rotation.
CorrespondenceSet resolve(std::span<const LabeledPoint> points, std::span<const ObservedWindow> windows,
                          const LookupTable& lut, const MatchConfig& cfg);

// group (with lattice alignment when configured) + resolve.
struct MatchResult {
  std::vector<ObservedWindow> windows;
  double reference_deg = 0.0;
  CorrespondenceSet correspondences;
};
MatchResult match(std::span<const LabeledPoint> points, const LookupTable& lut, const MatchConfig& cfg);

struct RegisteredPattern {
  PatternFamilyId id;
  const LookupTable* table = nullptr;
};

struct Identification {
  std::size_t index = 0; // into the registered list
  PatternFamilyId id;
  CorrespondenceSet correspondences;
  std::vector<int> scores; // consistent match count per registered pattern
};

// The registered pattern whose table yields the most matched points; earlier entries win
// ties. Throws Error(Insufficient) when every candidate stays below min_matches.
Identification identify_pattern(std::span<const LabeledPoint> points, std::span<const ObservedWindow> windows,
                                std::span<const RegisteredPattern> registered, const MatchConfig& cfg);

} // namespace lensleech
