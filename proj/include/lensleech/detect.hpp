// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <span>
#include <vector>

#include "lensleech/geometry.hpp"
#include "lensleech/image.hpp"

namespace lensleech {

// HSV background removal. The default band [60, 260] degrees covers green through blue.
struct SegmentConfig {
  double s_min = 0.25;
  double v_min = 0.12;
  double hue_lo = 60.0;
  double hue_hi = 260.0;
  int min_area = 4;
  int max_area = 0; // 0 means 1% of the frame

  int effective_max_area(int width, int height) const;
};

void validate(const SegmentConfig& cfg);

struct Blob {
  Vec2 centroid; // value-weighted, pixel centers on integer coordinates
  int area = 0;
  double mean_hue = 0.0;
  double mean_saturation = 0.0;
  double mean_value = 0.0;
};

// 8-connected components of passing pixels, filtered by area, in raster order of first pixel.
std::vector<Blob> segment(const Image& frame, const SegmentConfig& cfg);

struct OtsuResult {
  double threshold = 0.0; // values below go to the lower class
  int bin = 0;            // first bin of the upper class, in [1, 255]
  double lo = 0.0;        // histogram range
  double hi = 0.0;
};

inline constexpr int kOtsuBins = 256;

// Histogram bin of a value for the range [lo, hi].
int otsu_bin(double value, double lo, double hi);

// Otsu's method on a 256-bin histogram spanning the value range. Ties go to the lowest bin.
// Throws Error(Degenerate) for constant input and Error(Domain) for fewer than two values.
OtsuResult otsu(std::span<const double> values);
inline double otsu_threshold(std::span<const double> values) { return otsu(values).threshold; }

struct LabeledPoint {
  Vec2 position;
  int color_class = 0;     // 0 = lower hue (green side), 1 = upper hue (blue side)
  double confidence = 0.0; // hue distance from the midpoint of the class means over half their gap, clipped to 1
  double hue = 0.0;
};

// Per-frame two-class split of blob hues. Needs at least two blobs.
std::vector<LabeledPoint> classify(std::span<const Blob> blobs);

// segment + classify. Returns an empty list when fewer than two blobs are found.
std::vector<LabeledPoint> detect(const Image& frame, const SegmentConfig& cfg);

// Copy of the frame with a ring around each point: white for class 0, yellow for class 1.
Image debug_overlay(const Image& frame, std::span<const LabeledPoint> points);

} // namespace lensleech
