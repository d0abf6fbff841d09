// SPDX-License-Identifier: Apache-2.0
#include "lensleech/detect.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>

#include "lensleech/error.hpp"

namespace lensleech {

int SegmentConfig::effective_max_area(int width, int height) const {
  if (max_area > 0) return max_area;
  return std::max(min_area + 1, static_cast<int>(static_cast<long long>(width) * height / 100));
}

void validate(const SegmentConfig& cfg) {
  require(cfg.min_area > 0, "segment: min_area must be positive");
  require(cfg.max_area == 0 || cfg.max_area > cfg.min_area, "segment: max_area must exceed min_area");
  require(cfg.s_min >= 0.0 && cfg.s_min <= 1.0, "segment: s_min must lie in [0, 1]");
  require(cfg.v_min >= 0.0 && cfg.v_min <= 1.0, "segment: v_min must lie in [0, 1]");
  require(cfg.hue_lo >= 0.0 && cfg.hue_lo < cfg.hue_hi && cfg.hue_hi <= 360.0, "segment: invalid hue band");
}

std::vector<Blob> segment(const Image& frame, const SegmentConfig& cfg) {
  validate(cfg);
  const int w = frame.width, h = frame.height;
  const std::size_t n = static_cast<std::size_t>(w) * static_cast<std::size_t>(h);
  std::vector<Hsv> hsv(n);
  std::vector<std::uint8_t> pass(n, 0);
  for (std::size_t i = 0; i < n; ++i) {
    const std::uint8_t* p = frame.rgb.data() + i * 3;
    // Cheap reject before the HSV conversion: too dark.
    if (std::max({p[0], p[1], p[2]}) < cfg.v_min * 255.0) continue;
    const Hsv c = rgb_to_hsv(p[0], p[1], p[2]);
    if (c.s >= cfg.s_min && c.v >= cfg.v_min && c.h >= cfg.hue_lo && c.h <= cfg.hue_hi) {
      pass[i] = 1;
      hsv[i] = c;
    }
  }

  const int max_area = cfg.effective_max_area(w, h);
  std::vector<Blob> blobs;
  std::vector<int> stack;
  for (int y0 = 0; y0 < h; ++y0) {
    for (int x0 = 0; x0 < w; ++x0) {
      const std::size_t seed = static_cast<std::size_t>(y0) * w + x0;
      if (pass[seed] != 1) continue;
      pass[seed] = 2;
      stack.assign(1, static_cast<int>(seed));
      double sw = 0, sx = 0, sy = 0, sh = 0, ss = 0, sv = 0;
      int area = 0;
      while (!stack.empty()) {
        const int idx = stack.back();
        stack.pop_back();
        const int x = idx % w, y = idx / w;
        const Hsv& c = hsv[static_cast<std::size_t>(idx)];
        ++area;
        // Chroma above the saturation cutoff: fades to zero at the mask edge, so the
        // centroid does not jump as rim pixels enter or leave the mask.
        const std::uint8_t* px = frame.rgb.data() + static_cast<std::size_t>(idx) * 3;
        const double mx = std::max({px[0], px[1], px[2]}), mn = std::min({px[0], px[1], px[2]});
        const double wt = std::max(mx - mn - cfg.s_min * mx, 1e-3);
        sw += wt;
        sx += wt * x;
        sy += wt * y;
        sh += c.h;
        ss += c.s;
        sv += c.v;
        for (int dy = -1; dy <= 1; ++dy) {
          const int yy = y + dy;
          if (yy < 0 || yy >= h) continue;
          for (int dx = -1; dx <= 1; ++dx) {
            const int xx = x + dx;
            if (xx < 0 || xx >= w || (dx == 0 && dy == 0)) continue;
            const std::size_t j = static_cast<std::size_t>(yy) * w + xx;
            if (pass[j] == 1) {
              pass[j] = 2;
              stack.push_back(static_cast<int>(j));
            }
          }
        }
      }
      if (area < cfg.min_area || area > max_area || sw <= 0.0) continue;
      Blob b;
      b.area = area;
      b.centroid = {sx / sw, sy / sw};
      b.mean_hue = sh / area;
      b.mean_saturation = ss / area;
      b.mean_value = sv / area;
      blobs.push_back(b);
    }
  }
  return blobs;
}

int otsu_bin(double value, double lo, double hi) {
  const double width = (hi - lo) / kOtsuBins;
  const int b = static_cast<int>(std::floor((value - lo) / width));
  return std::clamp(b, 0, kOtsuBins - 1);
}

OtsuResult otsu(std::span<const double> values) {
  if (values.size() < 2) fail(ErrorKind::Domain, "otsu: need at least two values");
  // Keeps the exact 128-bit comparison below from overflowing.
  if (values.size() > 400000) fail(ErrorKind::Domain, "otsu: too many values");
  const auto [mn, mx] = std::minmax_element(values.begin(), values.end());
  OtsuResult res;
  res.lo = *mn;
  res.hi = *mx;
  if (!(res.hi > res.lo)) fail(ErrorKind::Degenerate, "otsu: values have no spread");

  std::array<std::int64_t, kOtsuBins> hist{};
  for (double v : values) ++hist[static_cast<std::size_t>(otsu_bin(v, res.lo, res.hi))];

  std::int64_t n_total = 0, s_total = 0;
  for (int b = 0; b < kOtsuBins; ++b) {
    n_total += hist[static_cast<std::size_t>(b)];
    s_total += b * hist[static_cast<std::size_t>(b)];
  }

  // Between-class variance is proportional to (n0*S1 - n1*S0)^2 / (n0*n1) with S the
  // bin-index sums; compared exactly as 128-bit cross products.
  __int128 best_num = -1, best_den = 1;
  int best_t = -1;
  std::int64_t n0 = 0, s0 = 0;
  for (int t = 1; t < kOtsuBins; ++t) {
    n0 += hist[static_cast<std::size_t>(t - 1)];
    s0 += (t - 1) * hist[static_cast<std::size_t>(t - 1)];
    const std::int64_t n1 = n_total - n0, s1 = s_total - s0;
    if (n0 == 0 || n1 == 0) continue;
    const __int128 diff = static_cast<__int128>(n0) * s1 - static_cast<__int128>(n1) * s0;
    const __int128 num = diff * diff;
    const __int128 den = static_cast<__int128>(n0) * n1;
    if (best_t < 0 || num * best_den > best_num * den) {
      best_num = num;
      best_den = den;
      best_t = t;
    }
  }
  if (best_t < 0) fail(ErrorKind::Degenerate, "otsu: all values fall in one bin");
  res.bin = best_t;
  res.threshold = res.lo + best_t * (res.hi - res.lo) / kOtsuBins;
  return res;
}

std::vector<LabeledPoint> classify(std::span<const Blob> blobs) {
  if (blobs.size() < 2) fail(ErrorKind::Insufficient, "classify: need at least two blobs for a two-class split");
  std::vector<double> hues;
  hues.reserve(blobs.size());
  for (const Blob& b : blobs) hues.push_back(b.mean_hue);
  const OtsuResult o = otsu(hues);
  std::vector<LabeledPoint> out;
  out.reserve(blobs.size());
  std::array<double, 2> sum{}, count{};
  for (const Blob& b : blobs) {
    LabeledPoint lp;
    lp.position = b.centroid;
    lp.hue = b.mean_hue;
    lp.color_class = otsu_bin(b.mean_hue, o.lo, o.hi) < o.bin ? 0 : 1;
    sum[static_cast<std::size_t>(lp.color_class)] += lp.hue;
    count[static_cast<std::size_t>(lp.color_class)] += 1.0;
    out.push_back(lp);
  }
  // Every threshold inside the empty gap between the classes splits the same way and Otsu
  // settles on the lowest, so confidence is measured from the midpoint of the class means.
  const double m0 = sum[0] / count[0], m1 = sum[1] / count[1];
  const double boundary = (m0 + m1) / 2.0, half_gap = (m1 - m0) / 2.0;
  for (LabeledPoint& lp : out) lp.confidence = std::clamp(std::fabs(lp.hue - boundary) / half_gap, 0.0, 1.0);
  return out;
}

std::vector<LabeledPoint> detect(const Image& frame, const SegmentConfig& cfg) {
  const auto blobs = segment(frame, cfg);
  if (blobs.size() < 2) return {};
  return classify(blobs);
}

Image debug_overlay(const Image& frame, std::span<const LabeledPoint> points) {
  Image out = frame;
  for (const LabeledPoint& p : points) {
    const std::uint8_t col[3] = {255, 255, static_cast<std::uint8_t>(p.color_class == 0 ? 255 : 0)};
    const double r = 6.0;
    for (int a = 0; a < 64; ++a) {
      const double t = a * 2.0 * 3.141592653589793 / 64.0;
      const int x = static_cast<int>(std::lround(p.position.x + r * std::cos(t)));
      const int y = static_cast<int>(std::lround(p.position.y + r * std::sin(t)));
      if (x < 0 || y < 0 || x >= out.width || y >= out.height) continue;
      std::copy(col, col + 3, out.px(x, y));
    }
  }
  return out;
}

} // namespace lensleech
