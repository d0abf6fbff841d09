#include <gtest/gtest.h>

#include <map>
#include <queue>
#include <random>
#include <set>

#include "lensleech/error.hpp"
#include "lensleech/hexgrid.hpp"

using namespace lensleech;

namespace {

// Breadth-first distance over the six unit steps; independent of the cube formula.
int bfs_distance(AxialCoord from, AxialCoord to) {
  std::map<AxialCoord, int> seen{{from, 0}};
  std::queue<AxialCoord> todo;
  todo.push(from);
  while (!todo.empty()) {
    AxialCoord c = todo.front();
    todo.pop();
    if (c == to) return seen[c];
    for (AxialCoord d : kHexDirections) {
      AxialCoord n = c + d;
      if (!seen.count(n) && std::abs(n.q) <= 20 && std::abs(n.r) <= 20) {
        seen[n] = seen[c] + 1;
        todo.push(n);
      }
    }
  }
  return -1;
}

} // namespace

TEST(HexGrid, DiscSizeMatchesEnumeration) {
  for (int radius = 0; radius <= 9; ++radius) {
    int count = 0;
    for (int q = -radius; q <= radius; ++q)
      for (int r = -radius; r <= radius; ++r)
        if (std::max({std::abs(q), std::abs(r), std::abs(q + r)}) <= radius) ++count;
    EXPECT_EQ(disc_size(radius), count) << radius;
    EXPECT_EQ(static_cast<int>(hex_disc(radius).coords.size()), count) << radius;
  }
  EXPECT_EQ(disc_size(6), 127);
  EXPECT_EQ(disc_size(5), 91);
}

TEST(HexGrid, DiscIsRingOrderedAndUnique) {
  const HexDisc d = hex_disc(6);
  std::set<AxialCoord> unique(d.coords.begin(), d.coords.end());
  EXPECT_EQ(unique.size(), d.coords.size());
  int last = 0;
  for (std::size_t i = 0; i < d.coords.size(); ++i) {
    const int len = hex_length(d.coords[i]);
    EXPECT_GE(len, last);
    last = len;
    EXPECT_EQ(d.index_of(d.coords[i]), static_cast<int>(i));
  }
  EXPECT_EQ(d.index_of({7, 0}), -1);
  EXPECT_TRUE(d.coords.front() == (AxialCoord{0, 0}));
}

TEST(HexGrid, RingSizes) {
  EXPECT_EQ(hex_ring(0).size(), 1u);
  for (int n = 1; n <= 6; ++n) {
    auto ring = hex_ring(n);
    ASSERT_EQ(ring.size(), static_cast<std::size_t>(6 * n));
    EXPECT_TRUE(ring.front() == (AxialCoord{n, 0}));
    for (auto c : ring) EXPECT_EQ(hex_length(c), n);
    // consecutive cells are adjacent, so the walk is closed
    for (std::size_t i = 0; i < ring.size(); ++i)
      EXPECT_EQ(hex_distance(ring[i], ring[(i + 1) % ring.size()]), 1);
  }
}

TEST(HexGrid, DistanceAgreesWithBfs) {
  const HexDisc d = hex_disc(4);
  for (std::size_t i = 0; i < d.coords.size(); i += 3)
    for (std::size_t j = 0; j < d.coords.size(); j += 5)
      EXPECT_EQ(hex_distance(d.coords[i], d.coords[j]), bfs_distance(d.coords[i], d.coords[j]));
}

TEST(HexGrid, Rotate60MatchesPlanarRotation) {
  for (AxialCoord c : hex_disc(6).coords) {
    for (int k = -7; k <= 7; ++k) {
      const Vec2 expected = rotated(point_position(c, 1.0), 60.0 * k);
      const Vec2 got = point_position(rotate60(c, k), 1.0);
      EXPECT_NEAR(got.x, expected.x, 1e-9);
      EXPECT_NEAR(got.y, expected.y, 1e-9);
    }
  }
  EXPECT_TRUE(rotate60({1, 0}, 1) == (AxialCoord{0, 1}));
  EXPECT_TRUE(rotate60({2, -1}, 6) == (AxialCoord{2, -1}));
}

TEST(HexGrid, DirectionsAreCounterClockwiseFromPlusX) {
  for (int i = 0; i < 6; ++i) {
    const Vec2 p = point_position(kHexDirections[i], 2.0);
    EXPECT_NEAR(norm(p), 2.0, 1e-12);
    EXPECT_NEAR(std::atan2(p.y, p.x), deg2rad(60.0 * i > 180.0 ? 60.0 * i - 360.0 : 60.0 * i), 1e-12);
  }
}

TEST(HexGrid, NeighborsArePitchApart) {
  for (AxialCoord c : hex_disc(3).coords)
    for (AxialCoord n : neighbors(c)) {
      EXPECT_EQ(hex_distance(c, n), 1);
      EXPECT_NEAR(distance(point_position(c, 1.5), point_position(n, 1.5)), 1.5, 1e-12);
    }
}

TEST(HexGrid, NeighborOrderOfOrigin) {
  const auto n = neighbors({0, 0});
  const std::array<AxialCoord, 6> expected{{{1, 0}, {0, 1}, {-1, 1}, {-1, 0}, {0, -1}, {1, -1}}};
  EXPECT_EQ(n, expected);
  for (AxialCoord c : neighbors({2, -1})) EXPECT_EQ(hex_distance(c, {2, -1}), 1);
}

TEST(HexGrid, InteriorNeighborsStayInDisc) {
  const HexDisc outer = hex_disc(6);
  for (AxialCoord c : hex_disc(5).coords)
    for (AxialCoord n : neighbors(c)) EXPECT_GE(outer.index_of(n), 0);
}

TEST(HexGrid, RotationCommutesWithNeighborhoods) {
  for (AxialCoord c : hex_disc(5).coords) {
    std::multiset<AxialCoord> a, b;
    for (AxialCoord n : neighbors(c)) a.insert(rotate60(n, 1));
    for (AxialCoord n : neighbors(rotate60(c, 1))) b.insert(n);
    EXPECT_EQ(a, b);
  }
}

TEST(HexGrid, RotationExamples) {
  EXPECT_TRUE(rotate60({3, -2}, 3) == (AxialCoord{-3, 2}));
  std::mt19937_64 rng(1);
  std::uniform_int_distribution<int> u(-50, 50);
  for (int i = 0; i < 1000; ++i) {
    const AxialCoord c{u(rng), u(rng)};
    EXPECT_EQ(rotate60(c, 6), c);
  }
}

TEST(HexGrid, DiscsAreNested) {
  for (int r = 0; r <= 8; ++r) {
    const HexDisc big = hex_disc(r + 1);
    for (AxialCoord c : hex_disc(r).coords) EXPECT_GE(big.index_of(c), 0);
  }
  EXPECT_EQ(hex_disc(0).coords.size(), 1u);
}

TEST(HexGrid, PositionsAreInjective) {
  for (double pitch : {0.1, 2.0, 7.3}) {
    std::set<std::pair<long long, long long>> seen;
    for (AxialCoord c : hex_disc(8).coords) {
      const Vec2 p = point_position(c, pitch);
      seen.insert({std::llround(p.x * 1e6), std::llround(p.y * 1e6)});
    }
    EXPECT_EQ(seen.size(), static_cast<std::size_t>(disc_size(8)));
  }
  EXPECT_EQ(point_position({0, 0}, 1.5), (Vec2{0, 0}));
  EXPECT_EQ(point_position({1, 0}, 1.5), (Vec2{1.5, 0}));
}

TEST(HexGrid, RejectsInvalidArguments) {
  EXPECT_THROW(hex_disc(-1), Error);
  EXPECT_THROW(point_position({1, 0}, 0.0), Error);
  EXPECT_THROW(point_position({1, 0}, -2.0), Error);
}
