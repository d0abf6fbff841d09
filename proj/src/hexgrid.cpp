// SPDX-License-Identifier: Apache-2.0
#include "lensleech/hexgrid.hpp"

#include <cmath>

#include "lensleech/error.hpp"

namespace lensleech {

std::array<AxialCoord, 6> neighbors(AxialCoord c) {
  std::array<AxialCoord, 6> out;
  for (std::size_t i = 0; i < 6; ++i) out[i] = c + kHexDirections[i];
  return out;
}

AxialCoord rotate60(AxialCoord c, int k) {
  k %= 6;
  if (k < 0) k += 6;
  for (int i = 0; i < k; ++i) c = {-c.r, c.q + c.r};
  return c;
}

std::vector<AxialCoord> hex_ring(int ring) {
  require(ring >= 0, "ring must be non-negative");
  if (ring == 0) return {AxialCoord{0, 0}};
  std::vector<AxialCoord> out;
  out.reserve(static_cast<std::size_t>(6 * ring));
  // Start on the +q axis and walk the six edges; corner i sits at direction i.
  AxialCoord c{ring, 0};
  for (int side = 0; side < 6; ++side) {
    const AxialCoord step = kHexDirections[static_cast<std::size_t>((side + 2) % 6)];
    for (int i = 0; i < ring; ++i) {
      out.push_back(c);
      c = c + step;
    }
  }
  return out;
}

HexDisc hex_disc(int radius) {
  if (radius < 0) fail(ErrorKind::Domain, "hex_disc: radius must be >= 0");
  HexDisc d;
  d.radius = radius;
  d.coords.reserve(static_cast<std::size_t>(disc_size(radius)));
  for (int m = 0; m <= radius; ++m) {
    for (AxialCoord c : hex_ring(m)) d.coords.push_back(c);
  }
  return d;
}

int HexDisc::index_of(AxialCoord c) const {
  const int m = hex_length(c);
  if (m > radius) return -1;
  if (m == 0) return 0;
  // Offset of the ring start, then position along the walk.
  const int base = disc_size(m - 1);
  for (int i = 0; i < 6 * m; ++i) {
    if (coords[static_cast<std::size_t>(base + i)] == c) return base + i;
  }
  return -1;
}

Vec2 point_position(AxialCoord c, double pitch) {
  if (!(pitch > 0.0)) fail(ErrorKind::Domain, "point_position: pitch must be positive");
  static const double kHalfSqrt3 = std::sqrt(3.0) / 2.0;
  return {pitch * (c.q + 0.5 * c.r), pitch * kHalfSqrt3 * c.r};
}

} // namespace lensleech
