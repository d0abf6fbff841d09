#include <gtest/gtest.h>

#include <json.hpp>

#include <filesystem>
#include <random>

#include "lensleech/config.hpp"
#include "lensleech/error.hpp"
#include "lensleech/evalharness.hpp"
#include "lensleech/image.hpp"
#include "lensleech/jsonio.hpp"
#include "lensleech/pipeline.hpp"
#include "lensleech/textio.hpp"
#include "support.hpp"

using namespace lensleech;
using namespace lensleech::testing;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / ("lensleech_io_" + std::to_string(::getpid()));
  fs::create_directories(dir);
  return dir / name;
}

std::pair<int, int> parse_position(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const ParseError& e) {
    return {e.line(), e.field()};
  }
  return {0, 0};
}

} // namespace

TEST(TextIo, DoublesRoundTrip) {
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> u(-1e6, 1e6);
  for (int i = 0; i < 1000; ++i) {
    const double v = u(rng) / (1 + i);
    double back = 0;
    ASSERT_TRUE(parse_double(format_double(v), back));
    EXPECT_EQ(back, v);
  }
  EXPECT_EQ(format_fixed(1.5, 3), "1.500");
  double d;
  EXPECT_FALSE(parse_double("1.5x", d));
  long long n;
  EXPECT_TRUE(parse_int("-42", n));
  EXPECT_EQ(n, -42);
  EXPECT_FALSE(parse_int("4.2", n));
}

TEST(KeyValue, SectionsCommentsAndBlocks) {
  const auto doc = KeyValueDoc::parse("top = 1\n# note\n[a]\nx = 2.5 # trailing\nname = \"h#i\"\n[frame]\nv=1\n[frame]\nv=2\n");
  EXPECT_EQ(doc.get_int("", "top", 0), 1);
  EXPECT_DOUBLE_EQ(doc.get_double("a", "x", 0), 2.5);
  EXPECT_EQ(doc.get_string("a", "name", ""), "h#i");
  int frames = 0;
  for (const auto& b : doc.blocks()) frames += b.name == "frame";
  EXPECT_EQ(frames, 2);
  EXPECT_EQ(parse_position([] { KeyValueDoc::parse("a = 1\nbroken line\n"); }), std::pair(2, 1));
  EXPECT_EQ(parse_position([] { KeyValueDoc::parse("[open\n"); }), std::pair(1, 1));
  EXPECT_EQ(parse_position([] { KeyValueDoc::parse("[s]\nx = nope\n").get_double("s", "x", 0); }).first, 2);
}

TEST(PipelineConfigText, ParsesAllSections) {
  const std::string text =
      "[camera]\nwidth = 320\nheight = 240\nfov_deg = 70\n"
      "[segment]\ns_min = 0.3\nmin_area = 5\n"
      "[match]\nratio_hi = 1.5\nmin_matches = 20\nalign_to_lattice = false\n"
      "[gesture]\npress_on = 1.2\n"
      "[patterns]\nfiles = a.pat, /abs/b.pat\n";
  const PipelineConfig cfg = parse_pipeline_config(text, "/base");
  EXPECT_EQ(cfg.camera.width, 320);
  EXPECT_DOUBLE_EQ(cfg.segment.s_min, 0.3);
  EXPECT_EQ(cfg.segment.min_area, 5);
  EXPECT_DOUBLE_EQ(cfg.match.ratio_hi, 1.5);
  EXPECT_EQ(cfg.match.min_matches, 20);
  EXPECT_FALSE(cfg.match.align_to_lattice);
  EXPECT_DOUBLE_EQ(cfg.gesture.press_on, 1.2);
  ASSERT_EQ(cfg.pattern_files.size(), 2u);
  EXPECT_EQ(cfg.pattern_files[0], "/base/a.pat");
  EXPECT_EQ(cfg.pattern_files[1], "/abs/b.pat");
}

TEST(PipelineConfigText, RejectsUnknownKeysWithLine) {
  EXPECT_EQ(parse_position([] { parse_pipeline_config("[camera]\nwidth = 10\nwidht = 3\n"); }), std::pair(3, 1));
  EXPECT_EQ(parse_position([] { parse_pipeline_config("\n[cameras]\n"); }), std::pair(2, 1));
  EXPECT_EQ(parse_position([] { parse_pipeline_config("width = 3\n"); }), std::pair(1, 1));
  EXPECT_THROW(parse_pipeline_config("[camera]\nfov_deg = 300\n"), Error);
  EXPECT_THROW(parse_pipeline_config("[gesture]\npress_off = 2\n"), Error);
}

TEST(PipelineConfigText, LoadsPatternsAndRejectsBrokenOnes) {
  const fs::path good = scratch("good.pat"), bad = scratch("bad.pat");
  save_pattern(default_pattern(), good.string());
  HexPattern flat(6, 2, 2.0);
  save_pattern(flat, bad.string());
  const auto loaded = load_patterns({good.string()});
  ASSERT_EQ(loaded.size(), 1u);
  EXPECT_TRUE(loaded[0].pattern == default_pattern());
  EXPECT_EQ(loaded[0].table.size(), default_table().size());
  try {
    load_patterns({good.string(), bad.string()});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::Domain);
  }
  try {
    load_patterns({scratch("missing.pat").string()});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::Io);
  }
  const fs::path cfg = scratch("pipe.conf");
  write_file(cfg.string(), "[patterns]\nfiles = good.pat\n");
  EXPECT_EQ(load_pipeline_config(cfg.string()).pattern_files[0], good.string());
}

TEST(Images, PpmAndPngRoundTrip) {
  Image img(37, 23);
  std::mt19937_64 rng(3);
  for (auto& v : img.rgb) v = static_cast<std::uint8_t>(rng());
  EXPECT_TRUE(decode_ppm(encode_ppm(img)) == img);
  EXPECT_TRUE(decode_png(encode_png(img)) == img);
  for (const char* ext : {".ppm", ".png"}) {
    const fs::path p = scratch(std::string("img") + ext);
    save_image(img, p.string());
    EXPECT_TRUE(load_image(p.string()) == img);
  }
  EXPECT_EQ(encode_ppm(img).substr(0, 9), "P6\n37 23\n");
  EXPECT_THROW(decode_ppm("P3\n1 1\n255\n0 0 0\n"), Error);
  EXPECT_THROW(decode_png("not a png"), Error);
  EXPECT_THROW(save_image(img, scratch("x.bmp").string()), Error);
}

TEST(Json, PointsRoundTrip) {
  const Frame f = render_clean(default_pattern(), PatternPose{});
  const auto pts = detect(f.image, SegmentConfig{});
  const auto back = points_from_json(points_to_json(pts));
  ASSERT_EQ(back.size(), pts.size());
  for (std::size_t i = 0; i < pts.size(); ++i) {
    EXPECT_EQ(back[i].position, pts[i].position);
    EXPECT_EQ(back[i].color_class, pts[i].color_class);
  }
  EXPECT_THROW(points_from_json("{\"points\": 3}"), Error);
  EXPECT_THROW(points_from_json("{"), Error);
}

TEST(Json, EventLineFields) {
  GestureEvent e;
  e.frame = 12;
  e.kind = GestureKind::Press;
  e.magnitude = 0.2;
  e.location = AxialCoord{1, -2};
  e.cumulative_rotation_deg = 3.5;
  const std::string line = event_to_json(e);
  EXPECT_EQ(line.find('\n'), std::string::npos);
  const auto j = nlohmann::json::parse(line);
  for (const char* k : {"frame", "kind", "phase", "magnitude", "direction", "location", "cumulative_rotation"})
    EXPECT_TRUE(j.contains(k)) << k;
  EXPECT_EQ(j["kind"], "press");
  EXPECT_EQ(j["phase"], "onset");
  EXPECT_EQ(j["location"]["q"], 1);
  EXPECT_EQ(j["location"]["r"], -2);
  EXPECT_TRUE(j["direction"].is_null());
}

TEST(Json, ErrorsCarryKindAndPosition) {
  const auto j = nlohmann::json::parse(error_to_json(ParseError(4, 2, "bad")));
  EXPECT_EQ(j["error"]["kind"], "parse");
  EXPECT_EQ(j["error"]["line"], 4);
  EXPECT_EQ(j["error"]["field"], 2);
  const auto k = nlohmann::json::parse(error_to_json(ErrorKind::NoMatch, "none"));
  EXPECT_EQ(k["error"]["kind"], "no-match");
  EXPECT_EQ(k["error"]["message"], "none");
}

TEST(Json, AnalysisAndLookupDocuments) {
  const Frame f = render_clean(default_pattern(), PatternPose{});
  const FrameAnalysis fa = analyze_frame(f.image, default_table(), SegmentConfig{}, MatchConfig{});
  const auto a = nlohmann::json::parse(analysis_to_json(fa));
  EXPECT_EQ(a["pairs"].size(), 127u);
  const auto t = nlohmann::json::parse(lookup_to_json(default_table()));
  EXPECT_TRUE(t.is_object());
  const auto r = nlohmann::json::parse(report_to_json(verify(default_pattern(), UniquenessMode::PerRotation)));
  EXPECT_EQ(r["valid"], true);
}

TEST(Analyze, ShortFallsAreFlaggedNotThrown) {
  const FrameAnalysis dark = analyze_frame(Image(640, 480), default_table(), SegmentConfig{}, MatchConfig{});
  EXPECT_TRUE(dark.correspondences.insufficient);
  EXPECT_FALSE(dark.note.empty());
  std::vector<LabeledPoint> few(3);
  EXPECT_TRUE(analyze_points(few, default_table(), MatchConfig{}).correspondences.insufficient);
}

TEST(Script, ParseSerializeRoundTrip) {
  const std::string text =
      "pattern = \"p.pat\"\nseed = 9\nbackgrounds = flat, procedural:3\n"
      "[frame]\nrotation_deg = 10\nlux = 300\nrepeat = 3\n"
      "[frame]\npress_x_mm = 1\npress_amplitude_mm = 1.2\nsqueeze_axis_deg = 20\nsqueeze_ratio = 0.8\nbackground = 1\n";
  const ScenarioScript s = parse_script(text, "/data");
  EXPECT_EQ(s.pattern, "/data/p.pat");
  EXPECT_EQ(s.seed, 9u);
  ASSERT_EQ(s.frames.size(), 4u);
  EXPECT_DOUBLE_EQ(s.frames[2].pose.rotation_deg, 10.0);
  EXPECT_DOUBLE_EQ(s.frames[0].illumination.lux, 300.0);
  EXPECT_TRUE(s.frames[3].deformation.press.has_value());
  EXPECT_EQ(s.frames[3].background, 1);
  const ScenarioScript back = parse_script(serialize_script(s));
  EXPECT_EQ(serialize_script(back), serialize_script(s));
  EXPECT_EQ(back.frames.size(), 4u);
}

TEST(Script, Errors) {
  EXPECT_EQ(parse_position([] { parse_script("seed = 1\n[frame]\nbackground = 2\n"); }), std::pair(2, 1));
  EXPECT_EQ(parse_position([] { parse_script("[scene]\n"); }), std::pair(1, 1));
  EXPECT_THROW(parse_script("seed = 1\n"), Error);
  EXPECT_THROW(parse_script("backgrounds = /no/such/file.png\n[frame]\n"), Error);
  EXPECT_THROW(parse_script("[frame]\nsqueeze_ratio = 1.5\n"), Error);
}

TEST(Script, RenderIsReproducible) {
  const ScenarioScript s = scripted_sequence(ScriptedKind::Press, 5);
  const auto a = render_script(s, default_pattern(), CameraModel{});
  const auto b = render_script(s, default_pattern(), CameraModel{});
  ASSERT_EQ(a.size(), s.frames.size());
  for (std::size_t i = 0; i < a.size(); ++i) EXPECT_TRUE(a[i].image == b[i].image);
  EXPECT_NE(trial_seed(1, 0), trial_seed(1, 1));
  EXPECT_EQ(trial_seed(1, 7), trial_seed(1, 7));
}
