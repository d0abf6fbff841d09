#include <gtest/gtest.h>

#include <algorithm>
#include <map>
#include <random>
#include <regex>
#include <set>

#include "lensleech/error.hpp"
#include "lensleech/pattern.hpp"

using namespace lensleech;

namespace {

// Window read straight off the color map, digit order center then ring CCW from +q.
std::array<int, 7> raw_window(const HexPattern& p, AxialCoord c) {
  std::array<int, 7> w{};
  w[0] = p.color(c);
  const AxialCoord dirs[6] = {{1, 0}, {0, 1}, {-1, 1}, {-1, 0}, {0, -1}, {1, -1}};
  for (int i = 0; i < 6; ++i) w[i + 1] = p.color(c + dirs[i]);
  return w;
}

std::array<int, 7> turn(const std::array<int, 7>& w, int j) {
  std::array<int, 7> out = w;
  for (int i = 0; i < 6; ++i) out[1 + i] = w[1 + ((i - j) % 6 + 6) % 6];
  return out;
}

std::vector<AxialCoord> interior_of(int radius) {
  std::vector<AxialCoord> out;
  for (int q = -radius; q <= radius; ++q)
    for (int r = -radius; r <= radius; ++r)
      if (std::max({std::abs(q), std::abs(r), std::abs(q + r)}) <= radius - 1) out.push_back({q, r});
  return out;
}

// O(n^2) pairwise comparison of all placements.
std::size_t brute_collisions(const HexPattern& p, bool all_rotations) {
  std::vector<std::pair<std::array<int, 7>, int>> placed;
  for (AxialCoord c : interior_of(p.radius())) {
    const auto w = raw_window(p, c);
    for (int j = 0; j < (all_rotations ? 6 : 1); ++j) placed.push_back({turn(w, j), j});
  }
  std::size_t n = 0;
  for (std::size_t a = 0; a < placed.size(); ++a)
    for (std::size_t b = a + 1; b < placed.size(); ++b)
      if (placed[a].first == placed[b].first) ++n;
  return n;
}

std::size_t phi(std::size_t n) {
  std::size_t r = 0;
  for (std::size_t i = 1; i <= n; ++i) r += std::gcd(i, n) == 1;
  return r;
}

// Burnside over the cyclic group of order 6, times the free center digit.
std::size_t burnside_classes(std::size_t k) {
  std::size_t sum = 0;
  for (std::size_t d : {1u, 2u, 3u, 6u}) {
    std::size_t pw = 1;
    for (std::size_t i = 0; i < 6 / d; ++i) pw *= k;
    sum += phi(d) * pw;
  }
  return k * sum / 6;
}

GenerateOptions opts(std::uint64_t seed, int radius = 6, int colors = 2) {
  GenerateOptions o;
  o.radius = radius;
  o.colors = colors;
  o.seed = seed;
  return o;
}

} // namespace

TEST(WindowCode, EncodingIsBijective) {
  for (int k : {2, 3}) {
    const std::uint32_t n = code_space(k);
    EXPECT_EQ(n, static_cast<std::uint32_t>(std::pow(k, 7)));
    std::vector<bool> hit(n, false);
    for (std::uint32_t code = 0; code < n; ++code) {
      const WindowCode w = decode(code, k);
      EXPECT_LT(w.center, k);
      const std::uint32_t back = encode(w, k);
      ASSERT_LT(back, n);
      EXPECT_EQ(back, code);
      hit[back] = true;
    }
    EXPECT_TRUE(std::all_of(hit.begin(), hit.end(), [](bool b) { return b; }));
  }
  // center is the most significant digit
  WindowCode w{1, {0, 0, 0, 0, 0, 1}};
  EXPECT_EQ(encode(w, 2), 64u + 1u);
}

TEST(WindowCode, RotationPermutesRingOnly) {
  WindowCode w{1, {0, 1, 1, 0, 0, 0}};
  WindowCode r = rotate_window(w, 1);
  EXPECT_EQ(r.center, 1);
  EXPECT_EQ(r.ring, (std::array<int, 6>{0, 0, 1, 1, 0, 0}));
  for (int j = 0; j < 12; ++j) EXPECT_EQ(rotate_window(rotate_window(w, j), 6 - j % 6), w);
  EXPECT_EQ(rotate_code(encode(w, 2), 1, 2), encode(r, 2));
}

TEST(Necklace, ClassCountMatchesBurnsideAndEnumeration) {
  for (int k : {2, 3}) {
    std::set<std::array<int, 7>> canon;
    const std::uint32_t n = code_space(k);
    for (std::uint32_t code = 0; code < n; ++code) {
      std::array<int, 7> w{};
      std::uint32_t c = code;
      for (int i = 6; i >= 0; --i) {
        w[i] = static_cast<int>(c % k);
        c /= k;
      }
      std::array<int, 7> best = w;
      for (int j = 1; j < 6; ++j) best = std::min(best, turn(w, j));
      canon.insert(best);
    }
    EXPECT_EQ(canon.size(), burnside_classes(k));
    EXPECT_EQ(necklace_classes(k).size(), canon.size());
  }
  EXPECT_EQ(necklace_classes(2).size(), 28u);
  EXPECT_EQ(necklace_classes(3).size(), 390u);
}

TEST(Necklace, CanonicalIsMinimumAndRotationInvariant) {
  for (std::uint32_t code = 0; code < code_space(2); ++code) {
    const WindowCode w = decode(code, 2);
    const PatternFamilyId id = canonical_class(w, 2);
    std::uint32_t lo = code;
    for (int j = 0; j < 6; ++j) {
      lo = std::min(lo, rotate_code(code, j, 2));
      EXPECT_EQ(canonical_class(rotate_window(w, j), 2), id);
    }
    EXPECT_EQ(id.code, lo);
  }
}

TEST(Necklace, FamilyIdTextRoundTrip) {
  for (const auto& id : necklace_classes(2)) {
    const std::string s = id.to_string();
    EXPECT_TRUE(std::regex_match(s, std::regex("[01]:[01]{6}"))) << s;
    EXPECT_EQ(PatternFamilyId::parse(s, 2), id);
  }
  EXPECT_THROW(PatternFamilyId::parse("2:000000", 2), Error);
  EXPECT_THROW(PatternFamilyId::parse("1-000000", 2), Error);
}

TEST(Generate, Radius6TwoColorsIsUnique) {
  const HexPattern p = generate(opts(11));
  EXPECT_EQ(p.size(), 127u);
  EXPECT_EQ(p.interior().size(), 91u);
  std::set<std::array<int, 7>> windows;
  for (AxialCoord c : interior_of(6)) windows.insert(raw_window(p, c));
  EXPECT_EQ(windows.size(), 91u);
  EXPECT_EQ(brute_collisions(p, false), 0u);
  const auto rep = verify(p, UniquenessMode::PerRotation);
  EXPECT_TRUE(rep.valid());
  EXPECT_EQ(rep.window_count, 91u);
  for (std::size_t i = 0; i < p.size(); ++i) EXPECT_LT(p.color_at(i), 2);
}

TEST(Generate, RadiusOneIsASingleWindow) {
  const HexPattern p = generate(opts(3, 1));
  EXPECT_EQ(p.size(), 7u);
  EXPECT_EQ(p.interior().size(), 1u);
  EXPECT_TRUE(verify(p, UniquenessMode::PerRotation).valid());
}

TEST(Generate, DeterministicForSeed) {
  EXPECT_EQ(serialize(generate(opts(5))), serialize(generate(opts(5))));
  EXPECT_NE(serialize(generate(opts(5))), serialize(generate(opts(6))));
}

TEST(Generate, EveryCenterClassYieldsItsFamily) {
  std::set<std::uint32_t> seen;
  for (const auto& cls : necklace_classes(2)) {
    GenerateOptions o = opts(100);
    o.center_class = cls;
    const HexPattern p = generate(o);
    EXPECT_TRUE(verify(p, UniquenessMode::PerRotation).valid());
    EXPECT_EQ(identify(p), cls);
    seen.insert(identify(p).code);
  }
  EXPECT_EQ(seen.size(), 28u);
}

TEST(Generate, AllRotationsNeedsThreeColors) {
  GenerateOptions o = opts(1);
  o.mode = UniquenessMode::AllRotations;
  try {
    generate(o);
    FAIL() << "expected a domain error";
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::Domain);
  }
  o.colors = 3;
  const HexPattern p = generate(o);
  EXPECT_TRUE(verify(p, UniquenessMode::AllRotations).valid());
  EXPECT_EQ(brute_collisions(p, true), 0u);
}

TEST(Generate, RejectsBadArguments) {
  EXPECT_THROW(generate(opts(1, 6, 1)), Error);
  EXPECT_THROW(generate(opts(1, -1, 2)), Error);
}

TEST(Generate, ExhaustedBudgetIsUnsatisfiable) {
  GenerateOptions o = opts(1);
  o.backtrack_budget = 10;
  o.max_restarts = 2;
  try {
    generate(o);
    FAIL() << "expected budget exhaustion";
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::Unsatisfiable);
    EXPECT_NE(std::string(e.what()).find("2"), std::string::npos);
  }
}

TEST(Verify, ConstantPatternCollidesEverywhere) {
  HexPattern p(2, 2, 2.0);
  for (std::size_t i = 0; i < p.size(); ++i) p.set_color_at(i, 1);
  const auto rep = verify(p, UniquenessMode::PerRotation);
  EXPECT_EQ(rep.window_count, 7u);
  EXPECT_EQ(rep.collisions.size(), 7u * 6u / 2u);
  EXPECT_EQ(rep.collisions.size(), brute_collisions(p, false));
  EXPECT_TRUE(rep.unique_all_orientations.empty());
}

TEST(Verify, AllRotationsCountMatchesBruteForce) {
  for (std::uint64_t seed : {1, 2, 3, 4, 5}) {
    const HexPattern p = generate(opts(seed));
    const auto rep = verify(p, UniquenessMode::AllRotations);
    EXPECT_EQ(rep.collisions.size(), brute_collisions(p, true)) << seed;
    EXPECT_FALSE(rep.valid());
    // windows unique in all orientations form a subset of the interior
    EXPECT_LE(rep.unique_all_orientations.size() + rep.unique_given_only.size(), 91u);
  }
}

TEST(Verify, InjectedCollisionIsReported) {
  HexPattern p = generate(opts(21));
  // Copy the origin window onto (2,0): its ring overlaps, so copy the whole 7 cells
  // of a window that shares no cells with the origin window.
  const AxialCoord target{3, -1};
  p.set_color(target, p.color({0, 0}));
  for (int i = 0; i < 6; ++i) p.set_color(target + kHexDirections[i], p.color(kHexDirections[i]));
  const auto rep = verify(p, UniquenessMode::PerRotation);
  EXPECT_FALSE(rep.valid());
  EXPECT_EQ(rep.collisions.size(), brute_collisions(p, false));
  bool found = false;
  for (const auto& c : rep.collisions)
    found |= (c.a.center == AxialCoord{0, 0} && c.b.center == target) ||
             (c.b.center == AxialCoord{0, 0} && c.a.center == target);
  EXPECT_TRUE(found);
  EXPECT_THROW(build_lookup(p), Error);
}

TEST(Lookup, RoundTripsEveryPlacement) {
  const HexPattern p = generate(opts(8));
  const LookupTable t = build_lookup(p);
  std::set<AxialCoord> coords;
  for (const auto& e : t.entries()) coords.insert(e.placement.center);
  EXPECT_EQ(coords.size(), 91u);
  EXPECT_LE(t.size(), 91u * 6u);
  int cases = 0;
  for (AxialCoord c : interior_of(6)) {
    const auto w = raw_window(p, c);
    for (int j = 0; j < 6; ++j) {
      const auto rw = turn(w, j);
      std::uint32_t code = 0;
      for (int d : rw) code = code * 2 + d;
      const auto hit = t.find(code, j);
      ASSERT_TRUE(hit.has_value());
      EXPECT_EQ(*hit, c);
      const auto all = t.find(code);
      EXPECT_TRUE(std::any_of(all.begin(), all.end(), [&](const WindowPlacement& wp) {
        return wp.center == c && wp.rotation == j;
      }));
      ++cases;
    }
  }
  EXPECT_EQ(cases, 546);
  EXPECT_EQ(t.find(encode(p.window_at({0, 0}), 2), 0), std::optional<AxialCoord>(AxialCoord{0, 0}));
}

TEST(Lookup, AbsentCodeIsEmpty) {
  // 7 windows in 6 rotations cannot cover the 128 codes.
  const HexPattern p = generate(opts(8, 2));
  const LookupTable t = build_lookup(p);
  std::set<std::uint32_t> present;
  for (const auto& e : t.entries()) present.insert(e.code);
  ASSERT_LT(present.size(), code_space(2));
  for (std::uint32_t code = 0; code < code_space(2); ++code) {
    if (present.count(code)) continue;
    EXPECT_TRUE(t.find(code).empty());
    EXPECT_FALSE(t.find(code, 0).has_value());
  }
}

TEST(Identify, InvariantUnderWholePatternRotation) {
  const HexPattern p = generate(opts(13));
  for (int k = 1; k < 6; ++k) {
    HexPattern q(p.radius(), p.colors(), p.pitch_mm());
    for (AxialCoord c : p.disc().coords) q.set_color(rotate60(c, k), p.color(c));
    EXPECT_EQ(identify(q), identify(p));
    EXPECT_TRUE(verify(q, UniquenessMode::PerRotation).valid());
  }
}

TEST(Serialize, RoundTripsRandomPatterns) {
  std::mt19937_64 rng(99);
  for (int i = 0; i < 20; ++i) {
    const int radius = 1 + static_cast<int>(rng() % 6);
    const int colors = 2 + static_cast<int>(rng() % 3);
    HexPattern p(radius, colors, 0.5 + (rng() % 1000) / 250.0);
    p.set_seed(rng());
    for (std::size_t j = 0; j < p.size(); ++j) p.set_color_at(j, static_cast<int>(rng() % colors));
    const std::string text = serialize(p);
    const HexPattern back = deserialize(text);
    EXPECT_TRUE(back == p);
    EXPECT_EQ(serialize(back), text);
  }
}

TEST(Serialize, ParseErrorsCarryPosition) {
  const std::string good = serialize(generate(opts(2)));
  auto line_of = [](const std::string& text) {
    try {
      deserialize(text);
    } catch (const ParseError& e) {
      return std::pair(e.line(), e.field());
    }
    return std::pair(0, 0);
  };
  {
    std::string bad = good;
    bad.replace(bad.find("colors 2"), 8, "colors x");
    EXPECT_EQ(line_of(bad), std::pair(3, 2));
  }
  {
    std::string bad = good;
    const auto pos = bad.find("\n0 0 ");
    bad.replace(pos + 5, 1, "7");
    EXPECT_EQ(line_of(bad), std::pair(7, 3));
  }
  EXPECT_EQ(line_of("garbage\n"), std::pair(1, 1));
  EXPECT_EQ(line_of(good.substr(0, good.size() / 2)).first > 6, true);
}

TEST(Stencil, CirclesMatchPointPositions) {
  const HexPattern p = generate(opts(4));
  std::size_t total = 0;
  const std::regex circle(R"re(<circle cx="([-0-9.]+)" cy="([-0-9.]+)" r="0\.5[0]*" data-q="(-?\d+)" data-r="(-?\d+)")re");
  for (int color = 0; color < 2; ++color) {
    const std::string svg = export_stencil(p, color);
    std::vector<std::pair<AxialCoord, Vec2>> pts;
    for (auto it = std::sregex_iterator(svg.begin(), svg.end(), circle); it != std::sregex_iterator(); ++it) {
      const auto& m = *it;
      AxialCoord c{std::stoi(m[3]), std::stoi(m[4])};
      EXPECT_EQ(p.color(c), color);
      pts.push_back({c, {std::stod(m[1]), -std::stod(m[2])}});
    }
    total += pts.size();
    for (std::size_t a = 0; a < pts.size(); a += 3)
      for (std::size_t b = a + 1; b < pts.size(); ++b)
        EXPECT_NEAR(distance(pts[a].second, pts[b].second),
                    distance(point_position(pts[a].first, 2.0), point_position(pts[b].first, 2.0)), 1e-6);
  }
  EXPECT_EQ(total, 127u);
  EXPECT_THROW(export_stencil(p, 2), Error);
}

TEST(Stencil, SingleColorPattern) {
  HexPattern p(6, 2, 2.0);
  const std::regex circle("data-q=");
  auto count = [&](const std::string& s) {
    return std::distance(std::sregex_iterator(s.begin(), s.end(), circle), std::sregex_iterator());
  };
  EXPECT_EQ(count(export_stencil(p, 0)), 127);
  EXPECT_EQ(count(export_stencil(p, 1)), 0);
}
