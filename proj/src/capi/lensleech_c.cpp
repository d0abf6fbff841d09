// SPDX-License-Identifier: Apache-2.0
#include "lensleech/lensleech.h"

#include <cstdlib>
#include <cstring>
#include <memory>
#include <new>
#include <optional>
#include <string>

#include "lensleech/evalharness.hpp"
#include "lensleech/jsonio.hpp"
#include "lensleech/optics.hpp"

using namespace lensleech;

struct ll_pattern {
  HexPattern p;
};
struct ll_lookup {
  LookupTable t;
};
struct ll_image {
  Image img;
};
struct ll_config {
  PipelineConfig cfg;
};
struct ll_script {
  ScenarioScript s;
};
struct ll_analysis {
  FrameAnalysis fa;
};
struct ll_tracker {
  Tracker t;
};

namespace {

struct LastError {
  std::string message;
  std::optional<ErrorKind> kind;
  int line = 0;
  int field = 0;
};
thread_local LastError g_last;

class NullArgument : public std::exception {
public:
  explicit NullArgument(const char* name) : msg_(std::string("null argument: ") + name) {}
  const char* what() const noexcept override { return msg_.c_str(); }

private:
  std::string msg_;
};

ll_status status_of(ErrorKind k) {
  switch (k) {
  case ErrorKind::Domain: return LL_ERR_DOMAIN;
  case ErrorKind::Parse: return LL_ERR_PARSE;
  case ErrorKind::Io: return LL_ERR_IO;
  case ErrorKind::Unsatisfiable: return LL_ERR_UNSATISFIABLE;
  case ErrorKind::Degenerate: return LL_ERR_DEGENERATE;
  case ErrorKind::Insufficient: return LL_ERR_INSUFFICIENT;
  case ErrorKind::NoMatch: return LL_ERR_NO_MATCH;
  case ErrorKind::Sequencing: return LL_ERR_SEQUENCING;
  case ErrorKind::Internal: return LL_ERR_INTERNAL;
  }
  return LL_ERR_INTERNAL;
}

template <class F>
ll_status guard(F&& f) {
  try {
    f();
    g_last = {};
    return LL_OK;
  } catch (const ParseError& e) {
    g_last = {e.what(), e.kind(), e.line(), e.field()};
    return LL_ERR_PARSE;
  } catch (const Error& e) {
    g_last = {e.what(), e.kind(), 0, 0};
    return status_of(e.kind());
  } catch (const NullArgument& e) {
    g_last = {e.what(), ErrorKind::Domain, 0, 0};
    return LL_ERR_NULL_ARGUMENT;
  } catch (const std::bad_alloc&) {
    g_last = {"out of memory", ErrorKind::Internal, 0, 0};
    return LL_ERR_INTERNAL;
  } catch (const std::exception& e) {
    g_last = {e.what(), ErrorKind::Internal, 0, 0};
    return LL_ERR_INTERNAL;
  } catch (...) {
    g_last = {"unknown exception", ErrorKind::Internal, 0, 0};
    return LL_ERR_INTERNAL;
  }
}

template <class T>
T& need(T* p, const char* name) {
  if (!p) throw NullArgument(name);
  return *p;
}

std::string need(const char* s, const char* name) {
  if (!s) throw NullArgument(name);
  return s;
}

char* dup(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (!out) throw std::bad_alloc();
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

void put(char** out, const std::string& s) {
  if (out) *out = dup(s);
}

HarnessSetup harness(const ll_pattern* p, const ll_config* c) {
  return setup_from(need(c, "config").cfg, need(p, "pattern").p);
}

} // namespace

extern "C" {

const char* ll_version(void) { return "0.1.0"; }

const char* ll_status_name(ll_status s) {
  switch (s) {
  case LL_OK: return "ok";
  case LL_ERR_DOMAIN: return "domain";
  case LL_ERR_PARSE: return "parse";
  case LL_ERR_IO: return "io";
  case LL_ERR_UNSATISFIABLE: return "unsatisfiable-or-budget";
  case LL_ERR_DEGENERATE: return "degenerate";
  case LL_ERR_INSUFFICIENT: return "insufficient";
  case LL_ERR_NO_MATCH: return "no-match";
  case LL_ERR_SEQUENCING: return "sequencing";
  case LL_ERR_INTERNAL: return "internal";
  case LL_ERR_NULL_ARGUMENT: return "null-argument";
  }
  return "unknown";
}

const char* ll_last_error(void) { return g_last.message.c_str(); }

char* ll_last_error_json(void) {
  try {
    if (!g_last.kind) return dup("{}");
    if (g_last.kind == ErrorKind::Parse && g_last.line > 0) {
      // Rebuild the structured form; the stored message already carries the position.
      const std::string prefix = "line " + std::to_string(g_last.line) + ", field " + std::to_string(g_last.field) + ": ";
      std::string bare = g_last.message;
      if (bare.rfind(prefix, 0) == 0) bare = bare.substr(prefix.size());
      return dup(error_to_json(ParseError(g_last.line, g_last.field, bare)));
    }
    return dup(error_to_json(*g_last.kind, g_last.message));
  } catch (...) {
    return nullptr;
  }
}

void ll_string_free(char* s) { std::free(s); }

ll_status ll_focal_length(double r1_mm, double refractive_index, double* out_mm) {
  return guard([&] {
    LensSpec l;
    l.r1_mm = r1_mm;
    l.refractive_index = refractive_index;
    need(out_mm, "out_mm") = focal_length(l);
  });
}

void ll_generate_options_init(ll_generate_options* o) {
  if (!o) return;
  o->radius = 6;
  o->colors = 2;
  o->mode = LL_MODE_PER_ROTATION;
  o->seed = 0;
  o->pitch_mm = kDefaultPitchMm;
  o->center_class = nullptr;
}

ll_status ll_pattern_generate(const ll_generate_options* o, ll_pattern** out) {
  return guard([&] {
    const auto& opt = need(o, "options");
    need(out, "out");
    GenerateOptions go;
    go.radius = opt.radius;
    go.colors = opt.colors;
    go.mode = opt.mode == LL_MODE_ALL_ROTATIONS ? UniquenessMode::AllRotations : UniquenessMode::PerRotation;
    go.seed = opt.seed;
    go.pitch_mm = opt.pitch_mm;
    if (opt.center_class) go.center_class = PatternFamilyId::parse(opt.center_class, opt.colors);
    *out = new ll_pattern{generate(go)};
  });
}

ll_status ll_pattern_load(const char* path, ll_pattern** out) {
  return guard([&] {
    need(out, "out");
    *out = new ll_pattern{load_pattern(need(path, "path"))};
  });
}

ll_status ll_pattern_parse(const char* text, ll_pattern** out) {
  return guard([&] {
    need(out, "out");
    *out = new ll_pattern{deserialize(need(text, "text"))};
  });
}

ll_status ll_pattern_save(const ll_pattern* p, const char* path) {
  return guard([&] { save_pattern(need(p, "pattern").p, need(path, "path")); });
}

ll_status ll_pattern_serialize(const ll_pattern* p, char** out) {
  return guard([&] { need(out, "out") = dup(serialize(need(p, "pattern").p)); });
}

void ll_pattern_free(ll_pattern* p) { delete p; }

ll_status ll_pattern_info(const ll_pattern* p, int* radius, int* colors, size_t* points, size_t* windows) {
  return guard([&] {
    const auto& hp = need(p, "pattern").p;
    if (radius) *radius = hp.radius();
    if (colors) *colors = hp.colors();
    if (points) *points = hp.size();
    if (windows) *windows = hp.interior().size();
  });
}

ll_status ll_pattern_color(const ll_pattern* p, int q, int r, int* color) {
  return guard([&] { need(color, "color") = need(p, "pattern").p.color({q, r}); });
}

ll_status ll_pattern_verify(const ll_pattern* p, ll_mode mode, int* valid, char** report_json) {
  return guard([&] {
    const auto rep = verify(need(p, "pattern").p,
                            mode == LL_MODE_ALL_ROTATIONS ? UniquenessMode::AllRotations : UniquenessMode::PerRotation);
    if (valid) *valid = rep.valid() ? 1 : 0;
    put(report_json, report_to_json(rep));
  });
}

ll_status ll_pattern_family_id(const ll_pattern* p, char** out) {
  return guard([&] { need(out, "out") = dup(identify(need(p, "pattern").p).to_string()); });
}

ll_status ll_pattern_stencil_svg(const ll_pattern* p, int color, char** out) {
  return guard([&] { need(out, "out") = dup(export_stencil(need(p, "pattern").p, color)); });
}

ll_status ll_necklace_class_count(int colors, size_t* out) {
  return guard([&] { need(out, "out") = necklace_classes(colors).size(); });
}

ll_status ll_lookup_build(const ll_pattern* p, ll_lookup** out) {
  return guard([&] {
    need(out, "out");
    *out = new ll_lookup{build_lookup(need(p, "pattern").p)};
  });
}

void ll_lookup_free(ll_lookup* t) { delete t; }

ll_status ll_lookup_size(const ll_lookup* t, size_t* out) {
  return guard([&] { need(out, "out") = need(t, "table").t.size(); });
}

ll_status ll_lookup_find(const ll_lookup* t, uint32_t code, int rotation, int* found, int* q, int* r) {
  return guard([&] {
    require(rotation >= 0 && rotation < 6, "rotation must lie in [0, 5]");
    const auto c = need(t, "table").t.find(code, rotation);
    need(found, "found") = c ? 1 : 0;
    if (c && q) *q = c->q;
    if (c && r) *r = c->r;
  });
}

ll_status ll_lookup_json(const ll_lookup* t, char** out) {
  return guard([&] { need(out, "out") = dup(lookup_to_json(need(t, "table").t)); });
}

ll_status ll_image_load(const char* path, ll_image** out) {
  return guard([&] {
    need(out, "out");
    *out = new ll_image{load_image(need(path, "path"))};
  });
}

ll_status ll_image_save(const ll_image* img, const char* path) {
  return guard([&] { save_image(need(img, "image").img, need(path, "path")); });
}

ll_status ll_image_from_rgb(int width, int height, const uint8_t* rgb, ll_image** out) {
  return guard([&] {
    need(out, "out");
    need(rgb, "rgb");
    require(width > 0 && height > 0, "image size must be positive");
    Image img(width, height);
    std::memcpy(img.rgb.data(), rgb, img.rgb.size());
    *out = new ll_image{std::move(img)};
  });
}

ll_status ll_image_size(const ll_image* img, int* width, int* height) {
  return guard([&] {
    const auto& i = need(img, "image").img;
    if (width) *width = i.width;
    if (height) *height = i.height;
  });
}

const uint8_t* ll_image_data(const ll_image* img) { return img ? img->img.rgb.data() : nullptr; }

void ll_image_free(ll_image* img) { delete img; }

ll_status ll_config_default(ll_config** out) {
  return guard([&] {
    need(out, "out");
    *out = new ll_config{};
  });
}

ll_status ll_config_load(const char* path, ll_config** out) {
  return guard([&] {
    need(out, "out");
    *out = new ll_config{load_pipeline_config(need(path, "path"))};
  });
}

ll_status ll_config_parse(const char* text, const char* base_dir, ll_config** out) {
  return guard([&] {
    need(out, "out");
    *out = new ll_config{parse_pipeline_config(need(text, "text"), base_dir ? base_dir : "")};
  });
}

void ll_config_free(ll_config* c) { delete c; }

ll_status ll_config_pattern_count(const ll_config* c, size_t* out) {
  return guard([&] { need(out, "out") = need(c, "config").cfg.pattern_files.size(); });
}

ll_status ll_config_pattern_path(const ll_config* c, size_t index, const char** out) {
  return guard([&] {
    const auto& files = need(c, "config").cfg.pattern_files;
    require(index < files.size(), "pattern index out of range");
    need(out, "out") = files[index].c_str();
  });
}

ll_status ll_config_camera(const ll_config* c, int* width, int* height) {
  return guard([&] {
    const auto& cam = need(c, "config").cfg.camera;
    if (width) *width = cam.width;
    if (height) *height = cam.height;
  });
}

ll_status ll_script_parse(const char* text, const char* base_dir, ll_script** out) {
  return guard([&] {
    need(out, "out");
    *out = new ll_script{parse_script(need(text, "text"), base_dir ? base_dir : "")};
  });
}

ll_status ll_script_scripted(const char* kind, uint64_t seed, ll_script** out) {
  return guard([&] {
    need(out, "out");
    *out = new ll_script{scripted_sequence(parse_scripted_kind(need(kind, "kind")), seed)};
  });
}

void ll_script_free(ll_script* s) { delete s; }

ll_status ll_script_frame_count(const ll_script* s, size_t* out) {
  return guard([&] { need(out, "out") = need(s, "script").s.frames.size(); });
}

ll_status ll_script_pattern_path(const ll_script* s, const char** out) {
  return guard([&] { need(out, "out") = need(s, "script").s.pattern.c_str(); });
}

ll_status ll_script_serialize(const ll_script* s, char** out) {
  return guard([&] { need(out, "out") = dup(serialize_script(need(s, "script").s)); });
}

ll_status ll_script_render_frame(const ll_script* s, size_t index, const ll_pattern* p, const ll_config* c,
                                 ll_image** image, char** sidecar_json) {
  return guard([&] {
    const auto& sc = need(s, "script").s;
    const auto& cam = need(c, "config").cfg.camera;
    need(image, "image");
    require(index < sc.frames.size(), "frame index out of range");
    const auto& f = sc.frames[index];
    RenderOptions ro;
    ro.seed = trial_seed(sc.seed, index);
    const Image bg = load_background(sc.backgrounds.at(static_cast<std::size_t>(f.background)), cam);
    Frame fr = render(need(p, "pattern").p, f.deformation, f.pose, cam, f.illumination, bg, ro);
    std::string side;
    if (sidecar_json) side = frame_sidecar_json(fr, f.pose, f.deformation, f.illumination);
    *image = new ll_image{std::move(fr.image)};
    put(sidecar_json, side);
  });
}

ll_status ll_detect_points(const ll_image* img, const ll_config* c, char** points_json, size_t* count) {
  return guard([&] {
    const auto pts = detect(need(img, "image").img, need(c, "config").cfg.segment);
    if (count) *count = pts.size();
    put(points_json, points_to_json(pts));
  });
}

ll_status ll_debug_overlay(const ll_image* img, const ll_config* c, ll_image** out) {
  return guard([&] {
    need(out, "out");
    const auto& i = need(img, "image").img;
    const auto pts = detect(i, need(c, "config").cfg.segment);
    *out = new ll_image{debug_overlay(i, pts)};
  });
}

ll_status ll_analyze(const ll_image* img, const ll_lookup* t, const ll_config* c, ll_analysis** out) {
  return guard([&] {
    need(out, "out");
    const auto& cfg = need(c, "config").cfg;
    *out = new ll_analysis{analyze_frame(need(img, "image").img, need(t, "table").t, cfg.segment, cfg.match)};
  });
}

void ll_analysis_free(ll_analysis* a) { delete a; }

ll_status ll_analysis_summary(const ll_analysis* a, size_t* points, size_t* matched, int* rotation, int* insufficient) {
  return guard([&] {
    const auto& fa = need(a, "analysis").fa;
    if (points) *points = fa.points.size();
    if (matched) *matched = fa.correspondences.match_count();
    if (rotation) *rotation = fa.correspondences.rotation;
    if (insufficient) *insufficient = fa.correspondences.insufficient ? 1 : 0;
  });
}

ll_status ll_analysis_json(const ll_analysis* a, char** out) {
  return guard([&] { need(out, "out") = dup(analysis_to_json(need(a, "analysis").fa)); });
}

ll_status ll_analysis_rotation(const ll_analysis* a, double* degrees) {
  return guard([&] {
    const auto& cs = need(a, "analysis").fa.correspondences;
    need(degrees, "degrees") = reference_from(cs).rotation_deg;
  });
}

ll_status ll_tracker_new(const ll_config* c, ll_tracker** out) {
  return guard([&] {
    need(out, "out");
    *out = new ll_tracker{Tracker(need(c, "config").cfg.gesture)};
  });
}

void ll_tracker_free(ll_tracker* t) { delete t; }

ll_status ll_tracker_step(ll_tracker* t, const ll_analysis* a, int64_t frame, char** events_jsonl, size_t* event_count) {
  return guard([&] {
    const auto events = need(t, "tracker").t.step(need(a, "analysis").fa.correspondences, frame);
    if (event_count) *event_count = events.size();
    if (events_jsonl) {
      *events_jsonl = nullptr;
      if (!events.empty()) {
        std::string s;
        for (const auto& e : events) s += event_to_json(e) + "\n";
        *events_jsonl = dup(s);
      }
    }
  });
}

ll_status ll_identify(const ll_image* img, const ll_pattern* const* patterns, size_t count, const ll_config* c,
                      size_t* index, char** family_id, char** scores_json) {
  return guard([&] {
    const auto& cfg = need(c, "config").cfg;
    need(patterns, "patterns");
    require(count > 0, "identify: no patterns given");
    std::vector<LookupTable> tables;
    std::vector<RegisteredPattern> reg;
    tables.reserve(count);
    for (size_t i = 0; i < count; ++i) tables.push_back(build_lookup(need(patterns[i], "pattern").p));
    for (size_t i = 0; i < count; ++i) reg.push_back({identify(patterns[i]->p), &tables[i]});
    const FrameAnalysis fa = analyze_points(detect(need(img, "image").img, cfg.segment), tables.front(), cfg.match);
    if (fa.windows.empty()) fail(ErrorKind::Insufficient, "identify: " + fa.note);
    const Identification id = identify_pattern(fa.points, fa.windows, reg, cfg.match);
    if (index) *index = id.index;
    put(family_id, id.id.to_string());
    std::string s = "[";
    for (size_t i = 0; i < id.scores.size(); ++i) s += (i ? "," : "") + std::to_string(id.scores[i]);
    put(scores_json, s + "]");
  });
}

ll_status ll_eval_rotation(const ll_pattern* p, const ll_config* c, int trials, uint64_t seed, char** csv,
                           double* mean_error_deg) {
  return guard([&] {
    const auto r = run_rotation_accuracy(harness(p, c), trials, seed);
    if (mean_error_deg) *mean_error_deg = r.mean_error;
    put(csv, to_csv(r));
  });
}

ll_status ll_eval_illuminance(const ll_pattern* p, const ll_config* c, const double* lux, size_t levels, int trials,
                              uint64_t seed, char** csv, double* knee_lux, int* knee_found) {
  return guard([&] {
    need(lux, "lux");
    std::vector<int> bgs;
    for (int i = 0; i < kProceduralBackgroundCount; ++i) bgs.push_back(i);
    const auto r = run_illuminance_sweep(harness(p, c), bgs, std::vector<double>(lux, lux + levels), trials, seed);
    if (knee_found) *knee_found = r.knee ? 1 : 0;
    if (knee_lux) *knee_lux = r.knee.value_or(0.0);
    put(csv, to_csv(r));
  });
}

ll_status ll_eval_pupil(const ll_pattern* p, const ll_config* c, const double* pupils_mm, size_t count, int trials,
                        uint64_t seed, char** csv) {
  return guard([&] {
    need(pupils_mm, "pupils_mm");
    put(csv, to_csv(run_pupil_sweep(harness(p, c), std::vector<double>(pupils_mm, pupils_mm + count), trials, seed)));
  });
}

ll_status ll_eval_gestures(const ll_pattern* p, const ll_config* c, int per_kind, int rest, uint64_t seed, char** csv,
                           double* accuracy, int* rest_false_onsets) {
  return guard([&] {
    const auto r = run_gesture_discrimination(harness(p, c), per_kind, rest, seed);
    if (accuracy) *accuracy = r.accuracy();
    if (rest_false_onsets) *rest_false_onsets = r.rest_false_onsets;
    put(csv, to_csv(r));
  });
}

ll_status ll_bench(const ll_pattern* p, const ll_config* c, const size_t* point_counts, size_t count, int frames,
                   uint64_t seed, char** csv) {
  return guard([&] {
    need(point_counts, "point_counts");
    put(csv, to_csv(run_bench(harness(p, c), std::vector<std::size_t>(point_counts, point_counts + count), frames, seed)));
  });
}

} // extern "C"
