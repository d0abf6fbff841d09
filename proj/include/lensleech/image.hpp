// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace lensleech {

// Interleaved 8-bit RGB, row-major, no padding.
struct Image {
  int width = 0;
  int height = 0;
  std::vector<std::uint8_t> rgb;

  Image() = default;
  Image(int w, int h, std::uint8_t fill = 0);

  std::uint8_t* px(int x, int y) { return rgb.data() + (static_cast<std::size_t>(y) * width + x) * 3; }
  const std::uint8_t* px(int x, int y) const { return rgb.data() + (static_cast<std::size_t>(y) * width + x) * 3; }
  bool empty() const { return width == 0 || height == 0; }

  friend bool operator==(const Image&, const Image&) = default;
};

// Binary PPM (P6, maxval 255).
std::string encode_ppm(const Image& img);
Image decode_ppm(std::string_view bytes);

std::string encode_png(const Image& img);
Image decode_png(std::string_view bytes);

// Format chosen by extension: .png, .ppm (or .pnm). Anything else is a domain error.
Image load_image(const std::string& path);
void save_image(const Image& img, const std::string& path);

struct Hsv {
  double h = 0.0; // degrees [0, 360)
  double s = 0.0; // [0, 1]
  double v = 0.0; // [0, 1]
};

Hsv rgb_to_hsv(std::uint8_t r, std::uint8_t g, std::uint8_t b);

} // namespace lensleech
