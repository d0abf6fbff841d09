// SPDX-License-Identifier: Apache-2.0
#include "lensleech/image.hpp"

#include <png.h>

#include <algorithm>
#include <cctype>
#include <csetjmp>
#include <cstdio>
#include <cstdlib>
#include <cstring>

#include "lensleech/error.hpp"
#include "lensleech/textio.hpp"

namespace lensleech {

Image::Image(int w, int h, std::uint8_t fill) : width(w), height(h) {
  require(w >= 0 && h >= 0, "image dimensions must be non-negative");
  rgb.assign(static_cast<std::size_t>(w) * static_cast<std::size_t>(h) * 3, fill);
}

std::string encode_ppm(const Image& img) {
  std::string out = "P6\n" + std::to_string(img.width) + " " + std::to_string(img.height) + "\n255\n";
  out.append(reinterpret_cast<const char*>(img.rgb.data()), img.rgb.size());
  return out;
}

Image decode_ppm(std::string_view bytes) {
  std::size_t pos = 0;
  // Reads one whitespace-delimited header token, skipping '#' comments.
  auto token = [&]() -> std::string_view {
    while (pos < bytes.size()) {
      const char c = bytes[pos];
      if (c == '#') {
        while (pos < bytes.size() && bytes[pos] != '\n') ++pos;
      } else if (c == ' ' || c == '\t' || c == '\n' || c == '\r') {
        ++pos;
      } else {
        break;
      }
    }
    const std::size_t start = pos;
    while (pos < bytes.size() && !std::strchr(" \t\r\n", bytes[pos])) ++pos;
    return bytes.substr(start, pos - start);
  };
  if (token() != "P6") fail(ErrorKind::Parse, "ppm: missing P6 magic");
  long long w = 0, h = 0, maxval = 0;
  if (!parse_int(token(), w) || !parse_int(token(), h) || !parse_int(token(), maxval))
    fail(ErrorKind::Parse, "ppm: malformed header");
  if (w <= 0 || h <= 0 || w > 1 << 15 || h > 1 << 15) fail(ErrorKind::Parse, "ppm: bad dimensions");
  if (maxval != 255) fail(ErrorKind::Parse, "ppm: only maxval 255 is supported");
  ++pos; // single whitespace byte after maxval
  Image img(static_cast<int>(w), static_cast<int>(h));
  if (bytes.size() < pos + img.rgb.size()) fail(ErrorKind::Parse, "ppm: truncated pixel data");
  std::memcpy(img.rgb.data(), bytes.data() + pos, img.rgb.size());
  return img;
}

namespace {

void png_write_to_string(png_structp png, png_bytep data, png_size_t len) {
  auto* out = static_cast<std::string*>(png_get_io_ptr(png));
  out->append(reinterpret_cast<const char*>(data), len);
}

struct ReadCursor {
  std::string_view bytes;
  std::size_t pos = 0;
};

void png_read_from_string(png_structp png, png_bytep data, png_size_t len) {
  auto* cur = static_cast<ReadCursor*>(png_get_io_ptr(png));
  if (cur->pos + len > cur->bytes.size()) png_error(png, "truncated data");
  std::memcpy(data, cur->bytes.data() + cur->pos, len);
  cur->pos += len;
}

// libpng reports errors by longjmp; the message is kept here for the C++ caller.
struct PngErrorSink {
  char message[256] = "unknown error";
};

void png_error_store(png_structp png, png_const_charp msg) {
  auto* sink = static_cast<PngErrorSink*>(png_get_error_ptr(png));
  std::snprintf(sink->message, sizeof sink->message, "%s", msg);
  png_longjmp(png, 1);
}

void png_warning_ignore(png_structp, png_const_charp) {}

// The two workers below hold no objects with destructors between setjmp and any
// libpng call, so a longjmp out of libpng skips nothing.
bool png_write_rows(const Image& img, std::string* out, PngErrorSink* sink) {
  png_structp png = png_create_write_struct(PNG_LIBPNG_VER_STRING, sink, png_error_store, png_warning_ignore);
  if (!png) return false;
  png_infop info = png_create_info_struct(png);
  if (!info || setjmp(png_jmpbuf(png))) {
    png_destroy_write_struct(&png, &info);
    return false;
  }
  png_set_write_fn(png, out, png_write_to_string, nullptr);
  png_set_IHDR(png, info, static_cast<png_uint_32>(img.width), static_cast<png_uint_32>(img.height), 8,
               PNG_COLOR_TYPE_RGB, PNG_INTERLACE_NONE, PNG_COMPRESSION_TYPE_DEFAULT, PNG_FILTER_TYPE_DEFAULT);
  png_write_info(png, info);
  for (int y = 0; y < img.height; ++y) png_write_row(png, const_cast<png_bytep>(img.px(0, y)));
  png_write_end(png, nullptr);
  png_destroy_write_struct(&png, &info);
  return true;
}

bool png_read_rows(ReadCursor* cur, Image* img, PngErrorSink* sink) {
  png_structp png = png_create_read_struct(PNG_LIBPNG_VER_STRING, sink, png_error_store, png_warning_ignore);
  if (!png) return false;
  png_infop info = png_create_info_struct(png);
  // Modified after setjmp, so volatile keeps it valid on the error path.
  png_bytep* volatile rows = nullptr;
  if (!info || setjmp(png_jmpbuf(png))) {
    std::free(rows);
    png_destroy_read_struct(&png, &info, nullptr);
    return false;
  }
  png_set_read_fn(png, cur, png_read_from_string);
  png_read_info(png, info);
  const int color_type = png_get_color_type(png, info);
  const int depth = png_get_bit_depth(png, info);
  if (depth == 16) png_set_strip_16(png);
  if (color_type == PNG_COLOR_TYPE_PALETTE) png_set_palette_to_rgb(png);
  if (color_type == PNG_COLOR_TYPE_GRAY && depth < 8) png_set_expand_gray_1_2_4_to_8(png);
  if (color_type == PNG_COLOR_TYPE_GRAY || color_type == PNG_COLOR_TYPE_GRAY_ALPHA) png_set_gray_to_rgb(png);
  if (color_type & PNG_COLOR_MASK_ALPHA) png_set_strip_alpha(png);
  if (png_get_valid(png, info, PNG_INFO_tRNS)) png_set_strip_alpha(png);
  png_read_update_info(png, info);
  const auto w = png_get_image_width(png, info);
  const auto h = png_get_image_height(png, info);
  if (w == 0 || h == 0 || w > (1u << 15) || h > (1u << 15) || png_get_rowbytes(png, info) != w * 3)
    png_error(png, "unsupported image layout");
  img->width = static_cast<int>(w);
  img->height = static_cast<int>(h);
  img->rgb.resize(static_cast<std::size_t>(w) * h * 3);
  rows = static_cast<png_bytep*>(std::malloc(sizeof(png_bytep) * h));
  if (!rows) png_error(png, "out of memory");
  for (png_uint_32 y = 0; y < h; ++y) rows[y] = img->rgb.data() + static_cast<std::size_t>(y) * w * 3;
  png_read_image(png, rows);
  png_read_end(png, nullptr);
  std::free(rows);
  png_destroy_read_struct(&png, &info, nullptr);
  return true;
}

bool ends_with(const std::string& s, std::string_view suffix) {
  if (s.size() < suffix.size()) return false;
  std::string tail = s.substr(s.size() - suffix.size());
  std::transform(tail.begin(), tail.end(), tail.begin(), [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return tail == suffix;
}

} // namespace

std::string encode_png(const Image& img) {
  require(!img.empty(), "encode_png: empty image");
  std::string out;
  PngErrorSink sink;
  if (!png_write_rows(img, &out, &sink)) fail(ErrorKind::Internal, std::string("png: ") + sink.message);
  return out;
}

Image decode_png(std::string_view bytes) {
  if (bytes.size() < 8 || png_sig_cmp(reinterpret_cast<png_const_bytep>(bytes.data()), 0, 8) != 0)
    fail(ErrorKind::Parse, "png: bad signature");
  ReadCursor cur{bytes, 0};
  Image img;
  PngErrorSink sink;
  if (!png_read_rows(&cur, &img, &sink)) fail(ErrorKind::Parse, std::string("png: ") + sink.message);
  return img;
}

Image load_image(const std::string& path) {
  if (ends_with(path, ".png")) return decode_png(read_file(path));
  if (ends_with(path, ".ppm") || ends_with(path, ".pnm")) return decode_ppm(read_file(path));
  fail(ErrorKind::Domain, "unsupported image extension: " + path);
}

void save_image(const Image& img, const std::string& path) {
  if (ends_with(path, ".png")) return write_file(path, encode_png(img));
  if (ends_with(path, ".ppm") || ends_with(path, ".pnm")) return write_file(path, encode_ppm(img));
  fail(ErrorKind::Domain, "unsupported image extension: " + path);
}

Hsv rgb_to_hsv(std::uint8_t r8, std::uint8_t g8, std::uint8_t b8) {
  const double r = r8 / 255.0, g = g8 / 255.0, b = b8 / 255.0;
  const double mx = std::max({r, g, b});
  const double mn = std::min({r, g, b});
  const double delta = mx - mn;
  Hsv out;
  out.v = mx;
  out.s = mx > 0.0 ? delta / mx : 0.0;
  if (delta <= 0.0) return out;
  double h;
  if (mx == r) h = 60.0 * ((g - b) / delta);
  else if (mx == g) h = 60.0 * ((b - r) / delta + 2.0);
  else h = 60.0 * ((r - g) / delta + 4.0);
  if (h < 0.0) h += 360.0;
  out.h = h;
  return out;
}

} // namespace lensleech
