#include <gtest/gtest.h>

#include <random>

#include "lensleech/error.hpp"
#include "lensleech/hexgrid.hpp"
#include "lensleech/registration.hpp"

using namespace lensleech;

namespace {

std::vector<Vec2> grid(int radius) {
  std::vector<Vec2> pts;
  for (AxialCoord c : hex_disc(radius).coords) pts.push_back(point_position(c, 1.0));
  return pts;
}

struct Centered {
  std::vector<Vec2> from, to;
  Centered(const std::vector<Vec2>& f, const std::vector<Vec2>& t) {
    Vec2 mf, mt;
    for (std::size_t i = 0; i < f.size(); ++i) mf += f[i], mt += t[i];
    mf = mf / static_cast<double>(f.size());
    mt = mt / static_cast<double>(t.size());
    for (std::size_t i = 0; i < f.size(); ++i) from.push_back(f[i] - mf), to.push_back(t[i] - mt);
  }
  double rms(double deg) const {
    const double c = std::cos(deg2rad(deg)), s = std::sin(deg2rad(deg));
    double sum = 0;
    for (std::size_t i = 0; i < from.size(); ++i) {
      const double rx = c * from[i].x - s * from[i].y - to[i].x;
      const double ry = s * from[i].x + c * from[i].y - to[i].y;
      sum += rx * rx + ry * ry;
    }
    return std::sqrt(sum / from.size());
  }
};

} // namespace

TEST(Kabsch, IdentityIsZero) {
  const auto pts = grid(3);
  EXPECT_NEAR(kabsch_rotation(pts, pts), 0.0, 1e-12);
}

TEST(Kabsch, ExactRotation) {
  const auto pts = grid(3);
  std::vector<Vec2> out;
  for (Vec2 p : pts) out.push_back(rotated(p, 37.5) + Vec2{4, -2});
  EXPECT_NEAR(kabsch_rotation(pts, out), 37.5, 1e-6);
}

TEST(Kabsch, BeatsFineAngleGrid) {
  std::mt19937_64 rng(12);
  std::uniform_real_distribution<double> ang(0.0, 360.0);
  std::normal_distribution<double> noise(0.0, 0.05);
  for (int inst = 0; inst < 100; ++inst) {
    const auto pts = grid(2);
    const double truth = ang(rng);
    std::vector<Vec2> obs;
    for (Vec2 p : pts) obs.push_back(rotated(p, truth) + Vec2{noise(rng), noise(rng)});
    const double k = kabsch_rotation(pts, obs);
    const Centered c(pts, obs);
    const double best = c.rms(k);
    for (int step = 0; step < 360000; ++step) ASSERT_LE(best, c.rms(step * 0.001) + 1e-12) << inst;
  }
}

TEST(Kabsch, Equivariant) {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(-3.0, 3.0), ang(0.0, 360.0);
  for (int i = 0; i < 50; ++i) {
    std::vector<Vec2> from, to;
    for (int j = 0; j < 12; ++j) {
      from.push_back({u(rng), u(rng)});
      to.push_back(from.back() + Vec2{u(rng) * 0.1, u(rng) * 0.1});
    }
    const double base = kabsch_rotation(from, to);
    const double alpha = ang(rng);
    std::vector<Vec2> turned;
    for (Vec2 p : to) turned.push_back(rotated(p, alpha));
    EXPECT_NEAR(angle_diff(kabsch_rotation(from, turned), base + alpha), 0.0, 1e-9);
  }
}

TEST(Kabsch, DegenerateAndShortInput) {
  const std::vector<Vec2> same(5, Vec2{1, 1});
  const auto pts = grid(1);
  const std::vector<Vec2> five(pts.begin(), pts.begin() + 5);
  try {
    kabsch_rotation(five, same);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::Degenerate);
  }
  const std::vector<Vec2> one{{0, 0}};
  EXPECT_THROW(kabsch_rotation(one, one), Error);
  EXPECT_THROW(kabsch_rotation(pts, five), Error);
}

TEST(Similarity, RecoversScaleRotationTranslation) {
  const auto pts = grid(3);
  std::vector<Vec2> out;
  for (Vec2 p : pts) out.push_back(rotated(p, 212.0) * 27.5 + Vec2{320, -240});
  const Similarity s = fit_similarity(pts, out);
  EXPECT_NEAR(s.rotation_deg, 212.0, 1e-9);
  EXPECT_NEAR(s.scale, 27.5, 1e-9);
  EXPECT_NEAR(s.translation.x, 320.0, 1e-9);
  EXPECT_NEAR(s.translation.y, -240.0, 1e-9);
  EXPECT_NEAR(s.rms, 0.0, 1e-9);
  EXPECT_NEAR(distance(s.apply(pts[5]), out[5]), 0.0, 1e-9);
}

TEST(Similarity, ImageToMathFlipsY) {
  EXPECT_EQ(image_to_math({3, 4}), (Vec2{3, -4}));
}
