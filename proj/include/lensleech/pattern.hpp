// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "lensleech/hexgrid.hpp"

namespace lensleech {

enum class UniquenessMode {
  PerRotation,  // windows are distinct when compared in the same orientation
  AllRotations, // windows are distinct under any relative 60-degree rotation
};

const char* to_string(UniquenessMode m);
UniquenessMode parse_mode(std::string_view s);

inline constexpr double kDefaultPitchMm = 2.0;
inline constexpr double kStencilDotDiameterMm = 1.0;

// A 7-point window: center color plus the six neighbors in canonical CCW order.
struct WindowCode {
  int center = 0;
  std::array<int, 6> ring{};

  friend bool operator==(const WindowCode&, const WindowCode&) = default;
};

// Integer in [0, k^7): center is the most significant digit, then ring[0..5].
std::uint32_t encode(const WindowCode& w, int colors);
WindowCode decode(std::uint32_t code, int colors);
std::uint32_t code_space(int colors); // k^7

// Window as seen after rotating the pattern by j * 60 degrees CCW:
// result.ring[i] = w.ring[(i - j) mod 6].
WindowCode rotate_window(const WindowCode& w, int j);
std::uint32_t rotate_code(std::uint32_t code, int j, int colors);

// Necklace class of a window: minimal code over the six ring rotations.
struct PatternFamilyId {
  std::uint32_t code = 0; // canonical (minimal) window code
  int colors = 2;

  std::string to_string() const; // "center:ringdigits", e.g. "1:000111"
  static PatternFamilyId parse(std::string_view text, int colors);
  friend bool operator==(const PatternFamilyId&, const PatternFamilyId&) = default;
};

PatternFamilyId canonical_class(const WindowCode& w, int colors);

// Every necklace class for k colors, sorted by canonical code.
std::vector<PatternFamilyId> necklace_classes(int colors);

// Number of windows that can be pairwise distinct in the given mode.
std::uint64_t window_capacity(int colors, UniquenessMode mode);

class HexPattern {
public:
  HexPattern(int radius, int colors, double pitch_mm);

  int radius() const { return disc_.radius; }
  int colors() const { return colors_; }
  double pitch_mm() const { return pitch_mm_; }
  UniquenessMode mode() const { return mode_; }
  std::uint64_t seed() const { return seed_; }
  void set_mode(UniquenessMode m) { mode_ = m; }
  void set_seed(std::uint64_t s) { seed_ = s; }
  void set_pitch_mm(double p);

  const HexDisc& disc() const { return disc_; }
  std::size_t size() const { return disc_.coords.size(); }

  int color(AxialCoord c) const;
  int color_at(std::size_t index) const { return colors_of_[index]; }
  void set_color(AxialCoord c, int color);
  void set_color_at(std::size_t index, int color);
  std::span<const std::uint8_t> assignment() const { return colors_of_; }

  // Window centered on an interior coordinate (hex length <= radius - 1).
  WindowCode window_at(AxialCoord center) const;
  std::vector<AxialCoord> interior() const;

  Vec2 position(AxialCoord c) const { return point_position(c, pitch_mm_); }

  friend bool operator==(const HexPattern&, const HexPattern&);

private:
  HexDisc disc_;
  int colors_;
  double pitch_mm_;
  UniquenessMode mode_ = UniquenessMode::PerRotation;
  std::uint64_t seed_ = 0;
  std::vector<std::uint8_t> colors_of_;
};

struct GenerateOptions {
  int radius = 6;
  int colors = 2;
  UniquenessMode mode = UniquenessMode::PerRotation;
  std::optional<PatternFamilyId> center_class;
  std::uint64_t seed = 0;
  double pitch_mm = kDefaultPitchMm;
  std::uint64_t backtrack_budget = 100000; // color attempts per restart
  int max_restarts = 100;
};

// Randomized depth-first assignment in disc order. Throws Error(Unsatisfiable)
// when every restart exhausts its budget, Error(Domain) for impossible requests.
HexPattern generate(const GenerateOptions& opts);

struct WindowPlacement {
  AxialCoord center;
  int rotation = 0;
  friend bool operator==(const WindowPlacement&, const WindowPlacement&) = default;
};

struct Collision {
  WindowPlacement a;
  WindowPlacement b;
};

struct UniquenessReport {
  UniquenessMode mode = UniquenessMode::PerRotation;
  std::size_t window_count = 0;
  std::vector<Collision> collisions;
  std::vector<AxialCoord> unique_all_orientations; // no other placement shares the code
  std::vector<AxialCoord> unique_given_only;       // unique only in the stored orientation

  bool valid() const { return collisions.empty(); }
};

UniquenessReport verify(const HexPattern& p, UniquenessMode mode);

class LookupTable {
public:
  int colors() const { return colors_; }
  int radius() const { return radius_; }
  std::size_t size() const { return entries_.size(); }

  // All placements whose rotated window produces `code`. Empty when absent.
  std::span<const WindowPlacement> find(std::uint32_t code) const;
  // The placement for `code` under rotation `rotation`, if any.
  std::optional<AxialCoord> find(std::uint32_t code, int rotation) const;

  struct Entry {
    std::uint32_t code;
    WindowPlacement placement;
  };
  std::span<const Entry> entries() const { return entries_; }

private:
  friend LookupTable build_lookup(const HexPattern& p);
  int colors_ = 2;
  int radius_ = 0;
  std::vector<Entry> entries_;                 // sorted by code, then rotation
  std::vector<WindowPlacement> placements_;    // parallel to entries_
};

// Throws Error(Domain) unless p verifies in per-rotation mode.
LookupTable build_lookup(const HexPattern& p);

PatternFamilyId identify(const HexPattern& p);

std::string serialize(const HexPattern& p);
HexPattern deserialize(std::string_view text); // throws ParseError

HexPattern load_pattern(const std::string& path);
void save_pattern(const HexPattern& p, const std::string& path);

// SVG drawing in millimetres: one 1.0 mm circle per dot of `color` plus the disc outline.
std::string export_stencil(const HexPattern& p, int color);

} // namespace lensleech
