// SPDX-License-Identifier: Apache-2.0
#include "lensleech/render.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <unordered_set>

#include "lensleech/error.hpp"
#include "lensleech/pattern.hpp"

namespace lensleech {

namespace {

constexpr double kSurfaceLevel = 0.5;  // diffuse top surface, neutral gray
constexpr double kSurfaceAlpha = 0.9;
constexpr double kDotSaturation = 0.8235;
constexpr double kDotValue = 0.85;
constexpr int kSupersample = 4;
constexpr std::size_t kQuantiles = 4096;

// Standard normal quantiles at (i + 0.5) / kQuantiles. Sensor noise draws index this
// table with 12 random bits, which is far cheaper than a per-pixel transform.
const std::array<float, kQuantiles>& normal_quantiles() {
  static const auto table = [] {
    std::array<float, kQuantiles> t{};
    for (std::size_t i = 0; i < kQuantiles; ++i) {
      const double p = (static_cast<double>(i) + 0.5) / kQuantiles;
      double lo = -10.0, hi = 10.0;
      for (int it = 0; it < 80; ++it) {
        const double mid = 0.5 * (lo + hi);
        (0.5 * std::erfc(-mid / std::sqrt(2.0)) < p ? lo : hi) = mid;
      }
      t[i] = static_cast<float>(0.5 * (lo + hi));
    }
    return t;
  }();
  return table;
}

std::array<double, 3> hsv_to_rgb(double h, double s, double v) {
  const double c = v * s;
  const double hp = std::fmod(h, 360.0) / 60.0;
  const double x = c * (1.0 - std::fabs(std::fmod(hp, 2.0) - 1.0));
  double r = 0, g = 0, b = 0;
  if (hp < 1) r = c, g = x;
  else if (hp < 2) r = x, g = c;
  else if (hp < 3) g = c, b = x;
  else if (hp < 4) g = x, b = c;
  else if (hp < 5) r = x, b = c;
  else r = c, b = x;
  const double m = v - c;
  return {r + m, g + m, b + m};
}

struct Canvas {
  int w, h;
  std::vector<float> px; // rgb

  Canvas(int w_, int h_) : w(w_), h(h_), px(static_cast<std::size_t>(w_) * h_ * 3, 0.0f) {}
  float* at(int x, int y) { return px.data() + (static_cast<std::size_t>(y) * w + x) * 3; }

  void blend(int x, int y, const std::array<double, 3>& rgb, double alpha) {
    float* p = at(x, y);
    for (int c = 0; c < 3; ++c) p[c] = static_cast<float>(p[c] * (1.0 - alpha) + rgb[static_cast<std::size_t>(c)] * alpha);
  }

  // Anti-aliased filled circle: exact inside/outside for pixels far from the edge,
  // supersampled coverage near it.
  void circle(Vec2 center, double radius, const std::array<double, 3>& rgb, double alpha) {
    const int x0 = std::max(0, static_cast<int>(std::floor(center.x - radius - 1)));
    const int x1 = std::min(w - 1, static_cast<int>(std::ceil(center.x + radius + 1)));
    const int y0 = std::max(0, static_cast<int>(std::floor(center.y - radius - 1)));
    const int y1 = std::min(h - 1, static_cast<int>(std::ceil(center.y + radius + 1)));
    const double r2 = radius * radius;
    for (int y = y0; y <= y1; ++y) {
      for (int x = x0; x <= x1; ++x) {
        const double d = std::hypot(x - center.x, y - center.y);
        double cov;
        if (d <= radius - 0.75) {
          cov = 1.0;
        } else if (d >= radius + 0.75) {
          continue;
        } else {
          int inside = 0;
          for (int sy = 0; sy < kSupersample; ++sy) {
            for (int sx = 0; sx < kSupersample; ++sx) {
              const double px = x - 0.5 + (sx + 0.5) / kSupersample - center.x;
              const double py = y - 0.5 + (sy + 0.5) / kSupersample - center.y;
              if (px * px + py * py <= r2) ++inside;
            }
          }
          cov = static_cast<double>(inside) / (kSupersample * kSupersample);
        }
        if (cov > 0.0) blend(x, y, rgb, alpha * cov);
      }
    }
  }

  void gaussian_blur(double sigma) {
    if (!(sigma > 0.0)) return;
    const int rad = static_cast<int>(std::ceil(3.0 * sigma));
    std::vector<float> k(static_cast<std::size_t>(2 * rad + 1));
    double sum = 0.0;
    for (int i = -rad; i <= rad; ++i) {
      const double v = std::exp(-(i * i) / (2.0 * sigma * sigma));
      k[static_cast<std::size_t>(i + rad)] = static_cast<float>(v);
      sum += v;
    }
    for (auto& v : k) v = static_cast<float>(v / sum);
    std::vector<float> tmp(px.size());
    // Horizontal pass, clamped edges.
    const auto tap = [&](const float* row, int x, int n, float* o) {
      float acc[3] = {0, 0, 0};
      for (int i = -rad; i <= rad; ++i) {
        const float* p = row + static_cast<std::size_t>(std::clamp(x + i, 0, n - 1)) * 3;
        const float kv = k[static_cast<std::size_t>(i + rad)];
        acc[0] += kv * p[0];
        acc[1] += kv * p[1];
        acc[2] += kv * p[2];
      }
      o[0] = acc[0], o[1] = acc[1], o[2] = acc[2];
    };
    for (int y = 0; y < h; ++y) {
      const float* row = at(0, y);
      float* out = tmp.data() + static_cast<std::size_t>(y) * w * 3;
      for (int x = 0; x < w; ++x) {
        if (x < rad || x >= w - rad) {
          tap(row, x, w, out + static_cast<std::size_t>(x) * 3);
          continue;
        }
        float acc[3] = {0, 0, 0};
        const float* p = row + static_cast<std::size_t>(x - rad) * 3;
        for (int i = 0; i <= 2 * rad; ++i, p += 3) {
          const float kv = k[static_cast<std::size_t>(i)];
          acc[0] += kv * p[0];
          acc[1] += kv * p[1];
          acc[2] += kv * p[2];
        }
        float* o = out + static_cast<std::size_t>(x) * 3;
        o[0] = acc[0], o[1] = acc[1], o[2] = acc[2];
      }
    }
    // Vertical pass, accumulated row by row.
    const std::size_t stride = static_cast<std::size_t>(w) * 3;
    for (int y = 0; y < h; ++y) {
      float* out = at(0, y);
      std::fill(out, out + stride, 0.0f);
      for (int i = -rad; i <= rad; ++i) {
        const float* src = tmp.data() + static_cast<std::size_t>(std::clamp(y + i, 0, h - 1)) * stride;
        const float kv = k[static_cast<std::size_t>(i + rad)];
        for (std::size_t j = 0; j < stride; ++j) out[j] += kv * src[j];
      }
    }
  }
};

} // namespace

void validate(const IlluminationModel& ill) {
  require(ill.lux >= 0.0, "illuminance must be >= 0");
  require(ill.full_scale_lux > 0.0, "full-scale lux must be positive");
  for (double g : ill.gain) require(g > 0.0, "color gains must be positive");
  require(ill.blur_sigma_px >= 0.0, "blur sigma must be >= 0");
  require(ill.noise_sigma >= 0.0, "noise sigma must be >= 0");
}

double brightness_scale(const IlluminationModel& ill) { return std::min(ill.lux / ill.full_scale_lux, 1.0); }

std::size_t Frame::visible_count() const {
  return static_cast<std::size_t>(std::count_if(truth.begin(), truth.end(), [](const auto& t) { return t.visible; }));
}

std::array<double, 3> dot_rgb(int color, int colors) {
  const double hue = colors <= 1 ? 120.0 : 120.0 + 100.0 * color / (colors - 1);
  return hsv_to_rgb(hue, kDotSaturation, kDotValue);
}

Frame render(const HexPattern& p, const DeformationState& d, const PatternPose& pose, const CameraModel& cam,
             const IlluminationModel& ill, const Image& background, const RenderOptions& opts) {
  validate(cam);
  validate(ill);
  validate(d);
  if (!background.empty() && (background.width != cam.width || background.height != cam.height))
    fail(ErrorKind::Domain, "render: background is " + std::to_string(background.width) + "x" +
                                std::to_string(background.height) + " but camera is " + std::to_string(cam.width) +
                                "x" + std::to_string(cam.height));
  const double depth = pattern_depth(cam, pose);
  require(depth > 0.0, "render: pattern plane must lie in front of the camera");

  const double scale = brightness_scale(ill);
  Canvas cv(cam.width, cam.height);

  if (background.empty()) {
    std::fill(cv.px.begin(), cv.px.end(), static_cast<float>(0.5 * scale));
  } else {
    for (std::size_t i = 0; i < cv.px.size(); ++i) cv.px[i] = static_cast<float>(background.rgb[i] / 255.0 * scale);
  }

  // Diffuse top surface of the silicone body, centered on the (pushed) body axis.
  const double f = cam.focal_px();
  const double pattern_radius = p.radius() * p.pitch_mm();
  if (const auto center = project(cam, pose, apply(d, Vec2{}))) {
    const double disc_px = (pattern_radius + 0.6 * p.pitch_mm()) * f / depth;
    const double level = kSurfaceLevel * scale;
    cv.circle(*center, disc_px, {level, level, level}, kSurfaceAlpha);
  }

  std::unordered_set<AxialCoord, AxialCoordHash> only;
  if (opts.only) only.insert(opts.only->begin(), opts.only->end());

  const double r_vis = visibility_radius_mm(cam, pattern_radius);
  const double dot_px = dot_radius_px(cam, pose);
  Frame frame;
  frame.truth.reserve(p.size());
  for (std::size_t i = 0; i < p.size(); ++i) {
    const AxialCoord c = p.disc().coords[i];
    const Vec2 posed = apply_pose(pose, apply(d, p.position(c)));
    GroundTruthPoint gt;
    gt.coord = c;
    gt.color = p.color_at(i);
    gt.pixel = {cam.principal_point().x + f * posed.x / depth, cam.principal_point().y - f * posed.y / depth};
    gt.visible = point_visible(cam, pose, posed, r_vis) && (!opts.only || only.count(c) > 0);
    if (gt.visible) {
      auto rgb = dot_rgb(gt.color, p.colors());
      for (auto& v : rgb) v *= scale;
      cv.circle(gt.pixel, dot_px, rgb, 1.0);
    }
    frame.truth.push_back(gt);
  }

  for (std::size_t i = 0; i < cv.px.size(); i += 3) {
    cv.px[i] = static_cast<float>(cv.px[i] * ill.gain[0]);
    cv.px[i + 1] = static_cast<float>(cv.px[i + 1] * ill.gain[1]);
    cv.px[i + 2] = static_cast<float>(cv.px[i + 2] * ill.gain[2]);
  }
  cv.gaussian_blur(ill.blur_sigma_px);

  frame.image = Image(cam.width, cam.height);
  std::mt19937_64 rng(opts.seed);
  const auto& table = normal_quantiles();
  const bool noisy = ill.noise_sigma > 0.0;
  std::uint64_t bits = 0;
  int left = 0;
  for (std::size_t i = 0; i < cv.px.size(); ++i) {
    double v = cv.px[i] * 255.0;
    if (noisy) {
      if (left == 0) bits = rng(), left = 5;
      v += ill.noise_sigma * table[bits & (kQuantiles - 1)];
      bits >>= 12;
      --left;
    }
    frame.image.rgb[i] = static_cast<std::uint8_t>(std::lround(std::clamp(v, 0.0, 255.0)));
  }
  return frame;
}

// ---------------------------------------------------------------------------

namespace {

// Smooth value noise in [0, 1] from a hashed lattice.
double lattice(int x, int y, int seed) {
  std::uint32_t h = static_cast<std::uint32_t>(x) * 374761393u + static_cast<std::uint32_t>(y) * 668265263u +
                    static_cast<std::uint32_t>(seed) * 2147483647u;
  h = (h ^ (h >> 13)) * 1274126177u;
  h ^= h >> 16;
  return (h & 0xffffff) / static_cast<double>(0xffffff);
}

double value_noise(double x, double y, int seed) {
  const int xi = static_cast<int>(std::floor(x));
  const int yi = static_cast<int>(std::floor(y));
  const double tx = x - xi, ty = y - yi;
  const double sx = tx * tx * (3 - 2 * tx), sy = ty * ty * (3 - 2 * ty);
  const double a = lattice(xi, yi, seed), b = lattice(xi + 1, yi, seed);
  const double c = lattice(xi, yi + 1, seed), e = lattice(xi + 1, yi + 1, seed);
  return (a + (b - a) * sx) * (1 - sy) + (c + (e - c) * sx) * sy;
}

double fbm(double x, double y, int seed) {
  double v = 0, amp = 0.5, freq = 1;
  for (int o = 0; o < 4; ++o) {
    v += amp * value_noise(x * freq, y * freq, seed + o);
    amp *= 0.5;
    freq *= 2;
  }
  return v / 0.9375;
}

std::array<double, 3> mix(const std::array<double, 3>& a, const std::array<double, 3>& b, double t) {
  return {a[0] + (b[0] - a[0]) * t, a[1] + (b[1] - a[1]) * t, a[2] + (b[2] - a[2]) * t};
}

} // namespace

Image procedural_background(int width, int height, int index) {
  require(width > 0 && height > 0, "background size must be positive");
  index = ((index % kProceduralBackgroundCount) + kProceduralBackgroundCount) % kProceduralBackgroundCount;
  Image img(width, height);
  for (int y = 0; y < height; ++y) {
    for (int x = 0; x < width; ++x) {
      const double u = static_cast<double>(x) / width, v = static_cast<double>(y) / height;
      std::array<double, 3> c{};
      switch (index) {
        case 0: c = mix({0.85, 0.85, 0.85}, {0.25, 0.25, 0.25}, v); break;
        case 1: c = mix({0.95, 0.65, 0.35}, {0.35, 0.22, 0.12}, u); break;
        case 2: {
          const double r = std::hypot(u - 0.5, v - 0.5) / 0.7;
          c = mix({0.95, 0.92, 0.85}, {0.3, 0.28, 0.25}, std::min(r, 1.0));
          break;
        }
        case 3: {
          const bool on = ((x / 32) + (y / 32)) % 2 == 0;
          c = on ? std::array<double, 3>{0.8, 0.8, 0.78} : std::array<double, 3>{0.3, 0.3, 0.32};
          break;
        }
        case 4: {
          const double n = fbm(x / 48.0, y / 48.0, 11);
          c = {n, n, n};
          break;
        }
        case 5: {
          const double n = fbm(x / 64.0, y / 64.0, 23);
          c = mix({0.45, 0.2, 0.15}, {0.95, 0.6, 0.45}, n);
          break;
        }
        case 6: {
          const bool stripe = (x / 24) % 2 == 0;
          c = stripe ? std::array<double, 3>{0.9, 0.82, 0.65} : std::array<double, 3>{0.55, 0.4, 0.28};
          break;
        }
        case 7: c = mix({0.7, 0.5, 0.75}, {0.3, 0.15, 0.35}, (u + v) / 2); break;
        case 8: {
          const double n = fbm(x / 80.0, y / 80.0, 37);
          c = mix({0.55, 0.6, 0.68}, {0.8, 0.84, 0.9}, n); // cool cast, low saturation
          break;
        }
        case 9: c = mix({0.6, 0.68, 0.58}, {0.35, 0.4, 0.33}, v); break; // faint green cast
        case 10: {
          // Wall above, wooden floor below.
          if (v < 0.6) {
            c = mix({0.92, 0.88, 0.8}, {0.75, 0.7, 0.62}, v / 0.6);
          } else {
            const double grain = fbm(x / 12.0, y / 90.0, 51);
            c = mix({0.45, 0.28, 0.15}, {0.7, 0.48, 0.28}, grain);
          }
          break;
        }
        default: {
          const bool line = (x % 40) < 3 || (y % 40) < 3;
          c = line ? std::array<double, 3>{0.1, 0.1, 0.1} : std::array<double, 3>{0.88, 0.86, 0.84};
          break;
        }
      }
      auto* p = img.px(x, y);
      for (int ch = 0; ch < 3; ++ch)
        p[ch] = static_cast<std::uint8_t>(std::lround(std::clamp(c[static_cast<std::size_t>(ch)], 0.0, 1.0) * 255.0));
    }
  }
  return img;
}

} // namespace lensleech
