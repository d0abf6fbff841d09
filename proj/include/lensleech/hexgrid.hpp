// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <array>
#include <compare>
#include <cstdlib>
#include <functional>
#include <vector>

#include "lensleech/geometry.hpp"

namespace lensleech {

// Axial hex coordinate, pointy-top layout. The implied cube coordinate is s = -q - r.
struct AxialCoord {
  int q = 0;
  int r = 0;

  constexpr int s() const { return -q - r; }
  friend constexpr AxialCoord operator+(AxialCoord a, AxialCoord b) { return {a.q + b.q, a.r + b.r}; }
  friend constexpr AxialCoord operator-(AxialCoord a, AxialCoord b) { return {a.q - b.q, a.r - b.r}; }
  friend constexpr auto operator<=>(AxialCoord, AxialCoord) = default;
};

struct AxialCoordHash {
  std::size_t operator()(AxialCoord c) const noexcept {
    return std::hash<long long>{}((static_cast<long long>(c.q) << 32) ^ static_cast<unsigned>(c.r));
  }
};

constexpr int hex_length(AxialCoord c) {
  const int aq = c.q < 0 ? -c.q : c.q;
  const int ar = c.r < 0 ? -c.r : c.r;
  const int as = c.s() < 0 ? -c.s() : c.s();
  return (aq + ar + as) / 2;
}

constexpr int hex_distance(AxialCoord a, AxialCoord b) { return hex_length(a - b); }

// Unit steps in canonical counter-clockwise order, starting at +q (0 degrees).
// This order is the digit order of every window code.
inline constexpr std::array<AxialCoord, 6> kHexDirections = {{
    {1, 0}, {0, 1}, {-1, 1}, {-1, 0}, {0, -1}, {1, -1},
}};

std::array<AxialCoord, 6> neighbors(AxialCoord c);

// Rotation by k * 60 degrees counter-clockwise about the origin. Any integer k.
AxialCoord rotate60(AxialCoord c, int k);

// Number of cells in a disc: 1 + 3r(r+1).
constexpr int disc_size(int radius) { return 1 + 3 * radius * (radius + 1); }

struct HexDisc {
  int radius = 0;
  std::vector<AxialCoord> coords; // ring by ring, each ring CCW from +q

  // Index of c in coords, or -1.
  int index_of(AxialCoord c) const;
  bool contains(AxialCoord c) const { return hex_length(c) <= radius; }
};

HexDisc hex_disc(int radius);

// Cells at exactly the given ring distance, CCW starting at (ring, 0).
std::vector<AxialCoord> hex_ring(int ring);

// Planar position with y up; neighbors are exactly `pitch` apart and (1,0) lies on +x.
Vec2 point_position(AxialCoord c, double pitch);

} // namespace lensleech
