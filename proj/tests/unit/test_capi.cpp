#include <gtest/gtest.h>

#include <cstring>
#include <filesystem>
#include <string>

#include "lensleech/lensleech.h"

namespace {

struct Owned {
  char* s = nullptr;
  ~Owned() { ll_string_free(s); }
  std::string str() const { return s ? s : ""; }
};

ll_pattern* make_pattern(uint64_t seed) {
  ll_generate_options o;
  ll_generate_options_init(&o);
  o.seed = seed;
  ll_pattern* p = nullptr;
  EXPECT_EQ(ll_pattern_generate(&o, &p), LL_OK) << ll_last_error();
  return p;
}

} // namespace

TEST(CApi, StatusNamesAndVersion) {
  EXPECT_STREQ(ll_status_name(LL_OK), "ok");
  EXPECT_STREQ(ll_status_name(LL_ERR_INSUFFICIENT), "insufficient");
  EXPECT_STREQ(ll_status_name(static_cast<ll_status>(99)), "unknown");
  EXPECT_GT(std::strlen(ll_version()), 0u);
}

TEST(CApi, FocalLength) {
  double f = 0.0;
  ASSERT_EQ(ll_focal_length(7.5, 1.41, &f), LL_OK);
  EXPECT_NEAR(f, 18.29, 0.01);
  EXPECT_STREQ(ll_last_error(), "");
  EXPECT_EQ(ll_focal_length(7.5, 1.0, &f), LL_ERR_DOMAIN);
  EXPECT_GT(std::strlen(ll_last_error()), 0u);
  Owned j{ll_last_error_json()};
  EXPECT_NE(j.str().find("\"kind\""), std::string::npos);
  EXPECT_EQ(ll_focal_length(7.5, 1.41, nullptr), LL_ERR_NULL_ARGUMENT);
}

TEST(CApi, NullHandlesAreRejected) {
  ll_pattern* p = nullptr;
  EXPECT_EQ(ll_pattern_generate(nullptr, &p), LL_ERR_NULL_ARGUMENT);
  int radius = 0, colors = 0;
  size_t points = 0, windows = 0;
  EXPECT_EQ(ll_pattern_info(nullptr, &radius, &colors, &points, &windows), LL_ERR_NULL_ARGUMENT);
  EXPECT_EQ(ll_lookup_build(nullptr, nullptr), LL_ERR_NULL_ARGUMENT);
  EXPECT_EQ(ll_analyze(nullptr, nullptr, nullptr, nullptr), LL_ERR_NULL_ARGUMENT);
  // Free functions accept NULL.
  ll_pattern_free(nullptr);
  ll_lookup_free(nullptr);
  ll_image_free(nullptr);
  ll_tracker_free(nullptr);
  ll_string_free(nullptr);
}

TEST(CApi, GenerateVerifyLookup) {
  ll_pattern* p = make_pattern(7);
  ASSERT_NE(p, nullptr);
  int radius = 0, colors = 0;
  size_t points = 0, windows = 0;
  ASSERT_EQ(ll_pattern_info(p, &radius, &colors, &points, &windows), LL_OK);
  EXPECT_EQ(radius, 6);
  EXPECT_EQ(colors, 2);
  EXPECT_EQ(points, 127u);
  EXPECT_EQ(windows, 91u);

  int valid = 0;
  Owned report;
  ASSERT_EQ(ll_pattern_verify(p, LL_MODE_PER_ROTATION, &valid, &report.s), LL_OK);
  EXPECT_EQ(valid, 1);
  EXPECT_FALSE(report.str().empty());

  ll_lookup* t = nullptr;
  ASSERT_EQ(ll_lookup_build(p, &t), LL_OK);
  size_t n = 0;
  ASSERT_EQ(ll_lookup_size(t, &n), LL_OK);
  EXPECT_EQ(n, 546u);

  size_t classes = 0;
  ASSERT_EQ(ll_necklace_class_count(2, &classes), LL_OK);
  EXPECT_EQ(classes, 28u);

  Owned text;
  ASSERT_EQ(ll_pattern_serialize(p, &text.s), LL_OK);
  ll_pattern* q = nullptr;
  ASSERT_EQ(ll_pattern_parse(text.s, &q), LL_OK);
  for (int qq = -6; qq <= 6; ++qq)
    for (int rr = -6; rr <= 6; ++rr) {
      int a = -1, b = -1;
      const ll_status sa = ll_pattern_color(p, qq, rr, &a);
      ASSERT_EQ(sa, ll_pattern_color(q, qq, rr, &b));
      if (sa == LL_OK) EXPECT_EQ(a, b);
    }
  EXPECT_EQ(ll_pattern_parse("not a pattern", &q), LL_ERR_PARSE);

  ll_generate_options o;
  ll_generate_options_init(&o);
  o.mode = LL_MODE_ALL_ROTATIONS;
  ll_pattern* bad = nullptr;
  EXPECT_EQ(ll_pattern_generate(&o, &bad), LL_ERR_DOMAIN);
  EXPECT_EQ(bad, nullptr);

  ll_pattern_free(q);
  ll_lookup_free(t);
  ll_pattern_free(p);
}

TEST(CApi, RenderAnalyzeTrack) {
  ll_pattern* p = make_pattern(7);
  ll_lookup* t = nullptr;
  ASSERT_EQ(ll_lookup_build(p, &t), LL_OK);
  ll_config* c = nullptr;
  ASSERT_EQ(ll_config_default(&c), LL_OK);
  ll_script* s = nullptr;
  ASSERT_EQ(ll_script_scripted("press", 3, &s), LL_OK);
  size_t frames = 0;
  ASSERT_EQ(ll_script_frame_count(s, &frames), LL_OK);
  ASSERT_GT(frames, 0u);

  ll_tracker* tr = nullptr;
  ASSERT_EQ(ll_tracker_new(c, &tr), LL_OK);
  size_t onsets = 0;
  for (size_t i = 0; i < frames; ++i) {
    ll_image* img = nullptr;
    ASSERT_EQ(ll_script_render_frame(s, i, p, c, &img, nullptr), LL_OK) << ll_last_error();
    ll_analysis* a = nullptr;
    ASSERT_EQ(ll_analyze(img, t, c, &a), LL_OK);
    size_t pts = 0, matched = 0;
    int rot = 0, insufficient = 1;
    ASSERT_EQ(ll_analysis_summary(a, &pts, &matched, &rot, &insufficient), LL_OK);
    EXPECT_EQ(insufficient, 0);
    Owned events;
    size_t count = 0;
    ASSERT_EQ(ll_tracker_step(tr, a, static_cast<int64_t>(i), &events.s, &count), LL_OK);
    if (count) EXPECT_NE(events.str().find("press"), std::string::npos);
    if (events.str().find("\"onset\"") != std::string::npos) ++onsets;
    if (i == 0) {
      // Frame numbers must increase.
      Owned again;
      size_t n = 0;
      EXPECT_EQ(ll_tracker_step(tr, a, 0, &again.s, &n), LL_ERR_SEQUENCING);
    }
    ll_analysis_free(a);
    ll_image_free(img);
  }
  EXPECT_EQ(onsets, 1u);

  // A blank frame analyzes fine but is flagged insufficient.
  std::vector<uint8_t> black(64 * 48 * 3, 0);
  ll_image* img = nullptr;
  ASSERT_EQ(ll_image_from_rgb(64, 48, black.data(), &img), LL_OK);
  ll_analysis* a = nullptr;
  ASSERT_EQ(ll_analyze(img, t, c, &a), LL_OK);
  size_t pts = 0, matched = 0;
  int rot = 0, insufficient = 0;
  ASSERT_EQ(ll_analysis_summary(a, &pts, &matched, &rot, &insufficient), LL_OK);
  EXPECT_EQ(insufficient, 1);
  double deg = 0.0;
  EXPECT_EQ(ll_analysis_rotation(a, &deg), LL_ERR_INSUFFICIENT);
  ll_analysis_free(a);
  ll_image_free(img);

  ll_tracker_free(tr);
  ll_script_free(s);
  ll_config_free(c);
  ll_lookup_free(t);
  ll_pattern_free(p);
}

TEST(CApi, IdentifyAmongTwo) {
  ll_pattern* ps[2] = {make_pattern(7), make_pattern(8)};
  ll_config* c = nullptr;
  ASSERT_EQ(ll_config_default(&c), LL_OK);
  ll_script* s = nullptr;
  ASSERT_EQ(ll_script_scripted("rest", 1, &s), LL_OK);
  for (size_t which = 0; which < 2; ++which) {
    ll_image* img = nullptr;
    ASSERT_EQ(ll_script_render_frame(s, 0, ps[which], c, &img, nullptr), LL_OK);
    size_t index = 9;
    Owned fam, scores;
    ASSERT_EQ(ll_identify(img, ps, 2, c, &index, &fam.s, &scores.s), LL_OK) << ll_last_error();
    EXPECT_EQ(index, which);
    Owned own;
    ASSERT_EQ(ll_pattern_family_id(ps[which], &own.s), LL_OK);
    EXPECT_EQ(fam.str(), own.str());
    ll_image_free(img);
  }
  ll_script_free(s);
  ll_config_free(c);
  ll_pattern_free(ps[0]);
  ll_pattern_free(ps[1]);
}

TEST(CApi, ImageFileRoundTrip) {
  const std::vector<uint8_t> rgb = {255, 0, 0, 0, 255, 0, 0, 0, 255, 10, 20, 30};
  ll_image* img = nullptr;
  ASSERT_EQ(ll_image_from_rgb(2, 2, rgb.data(), &img), LL_OK);
  const auto path = (std::filesystem::temp_directory_path() / "ll_capi_rt.png").string();
  ASSERT_EQ(ll_image_save(img, path.c_str()), LL_OK);
  ll_image* back = nullptr;
  ASSERT_EQ(ll_image_load(path.c_str(), &back), LL_OK);
  int w = 0, h = 0;
  ASSERT_EQ(ll_image_size(back, &w, &h), LL_OK);
  EXPECT_EQ(w, 2);
  EXPECT_EQ(h, 2);
  EXPECT_EQ(std::memcmp(ll_image_data(back), rgb.data(), rgb.size()), 0);
  EXPECT_EQ(ll_image_load("/nonexistent/x.png", &back), LL_ERR_IO);
  ll_image_free(back);
  ll_image_free(img);
  std::filesystem::remove(path);
}
