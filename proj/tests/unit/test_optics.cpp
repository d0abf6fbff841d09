#include <gtest/gtest.h>

#include <algorithm>
#include <random>

#include "lensleech/error.hpp"
#include "lensleech/optics.hpp"
#include "lensleech/pattern.hpp"

using namespace lensleech;

TEST(Lens, FocalLengthOfSiliconeBody) {
  EXPECT_NEAR(focal_length({7.5, 1.41, 1.3}), 18.29, 0.01);
  EXPECT_DOUBLE_EQ(focal_length({7.5, 2.0, 1.3}), 7.5);
  EXPECT_DOUBLE_EQ(focal_length({10.0, 1.5, 1.3}), 20.0);
  EXPECT_NEAR(body_height({7.5, 1.41, 1.3}), 7.5 / 0.41 * 1.3, 1e-12);
}

TEST(Lens, FocalLengthMonotonicity) {
  double prev = 1e300;
  for (double n = 1.05; n < 2.5; n += 0.05) {
    const double f = focal_length({7.5, n, 1.0});
    EXPECT_LT(f, prev);
    prev = f;
  }
  prev = 0.0;
  for (double r = 1.0; r < 30.0; r += 0.5) {
    const double f = focal_length({r, 1.41, 1.0});
    EXPECT_GT(f, prev);
    prev = f;
  }
}

TEST(Lens, RejectsInvalidSpecs) {
  EXPECT_THROW(focal_length({0.0, 1.41, 1.3}), Error);
  EXPECT_THROW(focal_length({7.5, 1.0, 1.3}), Error);
  EXPECT_THROW(validate(LensSpec{7.5, 1.41, 0.9}), Error);
}

TEST(Camera, FocalPixelsFromFov) {
  CameraModel cam;
  EXPECT_NEAR(cam.focal_px(), 320.0 / std::tan(deg2rad(42.0)), 1e-9);
  cam.fov_deg = 90.0;
  EXPECT_NEAR(cam.focal_px(), 320.0, 1e-9);
  cam.fov_deg = 5.0;
  EXPECT_THROW(validate(cam), Error);
  cam.fov_deg = 175.0;
  EXPECT_THROW(validate(cam), Error);
}

TEST(Camera, ParsesKeyValueText) {
  const CameraModel cam = parse_camera("width = 320\nheight = 240\nfov_deg = 70\npupil_mm = 4\npupil_dist_mm = 30\n");
  EXPECT_EQ(cam.width, 320);
  EXPECT_EQ(cam.height, 240);
  EXPECT_DOUBLE_EQ(cam.fov_deg, 70.0);
  EXPECT_DOUBLE_EQ(cam.pupil_mm, 4.0);
  EXPECT_DOUBLE_EQ(cam.pupil_dist_mm, 30.0);
  EXPECT_THROW(parse_camera("fov_deg = 200\n"), Error);
}

TEST(Projection, OriginHitsPrincipalPoint) {
  CameraModel cam;
  const auto px = project(cam, PatternPose{}, Vec2{0, 0});
  ASSERT_TRUE(px.has_value());
  EXPECT_NEAR(px->x, cam.principal_point().x, 1e-12);
  EXPECT_NEAR(px->y, cam.principal_point().y, 1e-12);
}

TEST(Projection, MatchesPinholeFormula) {
  CameraModel cam;
  PatternPose pose{{1.0, -2.0}, 30.0, 5.0};
  const Vec2 p{3.0, 4.0};
  const double c = std::cos(deg2rad(30.0)), s = std::sin(deg2rad(30.0));
  const double X = c * 3.0 - s * 4.0 + 1.0, Y = s * 3.0 + c * 4.0 - 2.0, Z = 30.0;
  const double f = 320.0 / std::tan(deg2rad(42.0));
  const auto px = project(cam, pose, p);
  ASSERT_TRUE(px);
  EXPECT_NEAR(px->x, 319.5 + f * X / Z, 1e-9);
  EXPECT_NEAR(px->y, 239.5 - f * Y / Z, 1e-9);
}

TEST(Projection, RotationCommutesWithImageRotation) {
  CameraModel cam;
  const Vec2 pp = cam.principal_point();
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(-10.0, 10.0);
  for (int i = 0; i < 100; ++i) {
    const Vec2 p{u(rng), u(rng)};
    const Vec2 a = *project(cam, PatternPose{{}, 60.0, 0.0}, p);
    const Vec2 b = *project(cam, PatternPose{}, p);
    // image y is down: a CCW rotation on screen is a rotation of (x, -y)
    const Vec2 m = rotated(Vec2{b.x - pp.x, -(b.y - pp.y)}, 60.0);
    EXPECT_NEAR(a.x, pp.x + m.x, 1e-9);
    EXPECT_NEAR(a.y, pp.y - m.y, 1e-9);
  }
}

TEST(Projection, UnprojectRoundTrip) {
  CameraModel cam;
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> u(-12.0, 12.0), rot(0.0, 360.0), off(-3.0, 3.0);
  int tested = 0;
  while (tested < 500) {
    const PatternPose pose{{off(rng), off(rng)}, rot(rng), off(rng)};
    const Vec2 p{u(rng), u(rng)};
    const Vec2 px = *project(cam, pose, p);
    if (px.x < 0 || px.y < 0 || px.x > cam.width - 1 || px.y > cam.height - 1) continue;
    const Vec2 back = unproject(cam, pose, px);
    EXPECT_NEAR(back.x, p.x, 1e-6);
    EXPECT_NEAR(back.y, p.y, 1e-6);
    ++tested;
  }
}

TEST(Projection, BehindCameraIsFlagged) {
  CameraModel cam;
  PatternPose pose;
  pose.distance_offset_mm = -30.0;
  const std::vector<Vec2> pts{{0, 0}, {1, 1}};
  const Projection pr = project(cam, pose, pts);
  EXPECT_FALSE(pr.in_front[0]);
  EXPECT_FALSE(pr.in_front[1]);
  EXPECT_FALSE(project(cam, pose, Vec2{0, 0}).has_value());
}

TEST(Projection, PreservesCollinearity) {
  CameraModel cam;
  const PatternPose pose{{0.7, -0.3}, 21.0, 2.0};
  for (int t = -5; t <= 5; ++t) {
    const Vec2 a = *project(cam, pose, Vec2{-4.0, 1.0});
    const Vec2 b = *project(cam, pose, Vec2{6.0, 3.0});
    const Vec2 m = *project(cam, pose, Vec2{-4.0 + t, 1.0 + 0.2 * t});
    EXPECT_NEAR(cross(b - a, m - a), 0.0, 1e-6);
  }
}

TEST(Pose, NormalizesRotation) {
  EXPECT_DOUBLE_EQ((PatternPose{{}, -90.0, 0.0}.normalized().rotation_deg), 270.0);
  EXPECT_DOUBLE_EQ((PatternPose{{}, 720.0, 0.0}.normalized().rotation_deg), 0.0);
}

TEST(Visibility, PinholeSeesEveryPoint) {
  const HexPattern p(6, 2, 2.0);
  CameraModel cam;
  EXPECT_EQ(visible_subset(cam, p, PatternPose{}).size(), 127u);
  EXPECT_GE(visible_subset(cam, p, PatternPose{}).size(), 91u);
}

TEST(Visibility, VignetteRadiusModel) {
  CameraModel cam;
  for (double pupil : {0.0, 12.0}) {
    cam.pupil_mm = pupil;
    EXPECT_DOUBLE_EQ(visibility_radius_mm(cam, 12.0), 12.0);
  }
  cam.pupil_mm = 24.0;
  EXPECT_DOUBLE_EQ(visibility_radius_mm(cam, 12.0), 6.0);
  cam.pupil_mm = 100.0;
  EXPECT_DOUBLE_EQ(visibility_radius_mm(cam, 12.0), 12.0 * 0.15);
}

TEST(Visibility, LargerPupilGivesSubset) {
  const HexPattern p(6, 2, 2.0);
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> off(-3.0, 3.0), rot(0.0, 360.0);
  for (int i = 0; i < 50; ++i) {
    const PatternPose pose{{off(rng), off(rng)}, rot(rng), off(rng)};
    CameraModel small, big;
    small.pupil_mm = 8.0;
    big.pupil_mm = 16.0;
    auto a = visible_subset(small, p, pose);
    auto b = visible_subset(big, p, pose);
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    EXPECT_TRUE(std::includes(a.begin(), a.end(), b.begin(), b.end())) << i;
  }
}

TEST(Visibility, NarrowerFovGivesSubset) {
  const HexPattern p(6, 2, 2.0);
  CameraModel wide, narrow;
  narrow.fov_deg = 40.0;
  const PatternPose pose{{2.0, 1.0}, 10.0, 0.0};
  auto a = visible_subset(wide, p, pose);
  auto b = visible_subset(narrow, p, pose);
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  EXPECT_LT(b.size(), a.size());
  EXPECT_TRUE(std::includes(a.begin(), a.end(), b.begin(), b.end()));
}

TEST(Visibility, IncreasingPupilAtFixedFov) {
  const HexPattern p(6, 2, 2.0);
  std::size_t prev = 1000;
  std::vector<std::size_t> counts;
  for (double pupil : {4.0, 14.0, 24.0}) {
    CameraModel cam;
    cam.pupil_mm = pupil;
    const std::size_t n = visible_subset(cam, p, PatternPose{}).size();
    EXPECT_LE(n, prev);
    counts.push_back(n);
    prev = n;
  }
  EXPECT_GT(counts.front(), counts.back());
}
