// SPDX-License-Identifier: Apache-2.0
// Command-line front end. Talks to the library through the C interface only.
#include <algorithm>
#include <cctype>
#include <atomic>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <mutex>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>

#include "lensleech/lensleech.h"

namespace fs = std::filesystem;

namespace {

bool g_json_errors = false;

// Exit codes: 1 invalid input or config, 2 too few points or no match, 3 internal fault.
int exit_code(ll_status s) {
  switch (s) {
  case LL_OK: return 0;
  case LL_ERR_INSUFFICIENT:
  case LL_ERR_NO_MATCH:
  case LL_ERR_DEGENERATE: return 2;
  case LL_ERR_INTERNAL: return 3;
  default: return 1;
  }
}

struct Failure {
  int code;
};

void report(ll_status s) {
  if (g_json_errors) {
    char* j = ll_last_error_json();
    std::cerr << (j ? j : "{}") << "\n";
    ll_string_free(j);
  } else {
    std::cerr << "lensleech: " << ll_status_name(s) << ": " << ll_last_error() << "\n";
  }
}

void check(ll_status s) {
  if (s == LL_OK) return;
  report(s);
  throw Failure{exit_code(s)};
}

[[noreturn]] void usage_error(const std::string& msg) {
  if (g_json_errors) {
    std::string esc;
    for (char c : msg) {
      if (c == '"' || c == '\\') esc += '\\';
      esc += c;
    }
    std::cerr << "{\"error\":{\"kind\":\"domain\",\"message\":\"" << esc << "\"}}\n";
  } else {
    std::cerr << "lensleech: " << msg << "\n";
  }
  throw Failure{1};
}

template <class T, void (*Free)(T*)>
struct Handle {
  T* p = nullptr;
  Handle() = default;
  Handle(const Handle&) = delete;
  Handle& operator=(const Handle&) = delete;
  Handle(Handle&& o) noexcept : p(o.p) { o.p = nullptr; }
  ~Handle() { Free(p); }
  T** out() { return &p; }
  T* get() const { return p; }
};

using Pattern = Handle<ll_pattern, ll_pattern_free>;
using Lookup = Handle<ll_lookup, ll_lookup_free>;
using ImageH = Handle<ll_image, ll_image_free>;
using Config = Handle<ll_config, ll_config_free>;
using Script = Handle<ll_script, ll_script_free>;
using Analysis = Handle<ll_analysis, ll_analysis_free>;
using TrackerH = Handle<ll_tracker, ll_tracker_free>;

struct Str {
  char* s = nullptr;
  Str() = default;
  Str(const Str&) = delete;
  Str& operator=(const Str&) = delete;
  ~Str() { ll_string_free(s); }
  char** out() { return &s; }
  std::string str() const { return s ? s : ""; }
};

void write_text(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream f(path, std::ios::binary);
  if (!f) usage_error("cannot write " + path);
  f << text;
  if (!f) usage_error("write failed for " + path);
}

std::string read_text(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) usage_error("cannot read " + path);
  std::ostringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

Config load_config(const std::string& flag) {
  Config c;
  std::string path = flag;
  if (path.empty()) {
    if (const char* env = std::getenv("LENSLEECH_CONFIG"); env && *env) path = env;
  }
  if (path.empty())
    check(ll_config_default(c.out()));
  else
    check(ll_config_load(path.c_str(), c.out()));
  return c;
}

Pattern load_pattern_file(const std::string& path) {
  Pattern p;
  check(ll_pattern_load(path.c_str(), p.out()));
  return p;
}

// --pattern, else the first configured pattern, else (when allowed) the default pattern.
Pattern resolve_pattern(const std::string& flag, const Config& cfg, bool allow_default) {
  if (!flag.empty()) return load_pattern_file(flag);
  std::size_t n = 0;
  check(ll_config_pattern_count(cfg.get(), &n));
  if (n > 0) {
    const char* path = nullptr;
    check(ll_config_pattern_path(cfg.get(), 0, &path));
    return load_pattern_file(path);
  }
  if (!allow_default) usage_error("no pattern: pass --pattern or list one under [patterns] in the config");
  ll_generate_options o;
  ll_generate_options_init(&o);
  o.seed = 7;
  Pattern p;
  check(ll_pattern_generate(&o, p.out()));
  return p;
}

std::vector<std::string> list_frames(const std::vector<std::string>& inputs) {
  std::vector<std::string> out;
  for (const auto& in : inputs) {
    if (fs::is_directory(in)) {
      std::vector<std::string> files;
      for (const auto& e : fs::directory_iterator(in)) {
        const auto ext = e.path().extension().string();
        if (e.is_regular_file() && (ext == ".png" || ext == ".ppm" || ext == ".pnm")) files.push_back(e.path().string());
      }
      std::sort(files.begin(), files.end());
      out.insert(out.end(), files.begin(), files.end());
    } else {
      out.push_back(in);
    }
  }
  return out;
}

// Trailing digits of the file stem, or the fallback when there are none.
long long frame_index(const std::string& path, long long fallback) {
  const std::string stem = fs::path(path).stem().string();
  std::size_t i = stem.size();
  while (i > 0 && std::isdigit(static_cast<unsigned char>(stem[i - 1]))) --i;
  if (i == stem.size() || stem.size() - i > 18) return fallback;
  return std::stoll(stem.substr(i));
}

std::string zero_pad(std::size_t i, int width = 4) {
  std::string s = std::to_string(i);
  return std::string(static_cast<std::size_t>(std::max(0, width - static_cast<int>(s.size()))), '0') + s;
}

template <class T>
std::vector<T> parse_list(const std::string& text, const char* what) {
  std::vector<T> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    std::istringstream is(item);
    T v{};
    if (!(is >> v) || !(is >> std::ws).eof()) usage_error(std::string("bad ") + what + " list: " + text);
    out.push_back(v);
  }
  if (out.empty()) usage_error(std::string("empty ") + what + " list");
  return out;
}

// ---- subcommands ----------------------------------------------------------

struct GenerateArgs {
  int radius = 6, colors = 2;
  std::string mode = "per-rotation-unique", center_class, output;
  std::uint64_t seed = 0;
  double pitch = 2.0;
};

int cmd_generate(const GenerateArgs& a) {
  ll_generate_options o;
  ll_generate_options_init(&o);
  o.radius = a.radius;
  o.colors = a.colors;
  o.seed = a.seed;
  o.pitch_mm = a.pitch;
  if (a.mode == "per-rotation-unique" || a.mode == "per-rotation")
    o.mode = LL_MODE_PER_ROTATION;
  else if (a.mode == "all-rotations-unique" || a.mode == "all-rotations")
    o.mode = LL_MODE_ALL_ROTATIONS;
  else
    usage_error("unknown mode '" + a.mode + "'");
  o.center_class = a.center_class.empty() ? nullptr : a.center_class.c_str();
  Pattern p;
  check(ll_pattern_generate(&o, p.out()));
  check(ll_pattern_save(p.get(), a.output.c_str()));
  Str id;
  check(ll_pattern_family_id(p.get(), id.out()));
  std::size_t points = 0, windows = 0;
  check(ll_pattern_info(p.get(), nullptr, nullptr, &points, &windows));
  std::cout << a.output << ": " << points << " points, " << windows << " windows, family " << id.str() << "\n";
  return 0;
}

int cmd_validate(const std::string& file, const std::string& mode, bool json) {
  Pattern p = load_pattern_file(file);
  ll_mode m = LL_MODE_PER_ROTATION;
  if (mode == "all-rotations-unique" || mode == "all-rotations") m = LL_MODE_ALL_ROTATIONS;
  else if (!(mode == "per-rotation-unique" || mode == "per-rotation")) usage_error("unknown mode '" + mode + "'");
  int valid = 0;
  Str rep;
  check(ll_pattern_verify(p.get(), m, &valid, rep.out()));
  if (json) std::cout << rep.str();
  else std::cout << file << ": " << (valid ? "valid" : "INVALID") << "\n";
  return valid ? 0 : 1;
}

int cmd_lookup(const std::string& file, const std::string& output) {
  Pattern p = load_pattern_file(file);
  Lookup t;
  check(ll_lookup_build(p.get(), t.out()));
  Str j;
  check(ll_lookup_json(t.get(), j.out()));
  write_text(output, j.str());
  return 0;
}

int cmd_stencil(const std::string& file, int color, const std::string& output) {
  Pattern p = load_pattern_file(file);
  Str svg;
  check(ll_pattern_stencil_svg(p.get(), color, svg.out()));
  write_text(output, svg.str());
  return 0;
}

struct RenderArgs {
  std::string pattern, script, sequence, output, save_script;
  std::uint64_t seed = 0;
  double rotation = 0, tx = 0, ty = 0, lux = 500, push_x = 0, push_y = 0, twist = 0;
  std::optional<double> press_x, press_y, press_amp, squeeze_axis, squeeze_ratio;
  std::string background = "flat";
};

int cmd_render(const RenderArgs& a, const Config& cfg) {
  Script sc;
  if (!a.script.empty() && !a.sequence.empty()) usage_error("--script and --sequence are exclusive");
  if (!a.script.empty()) {
    const std::string text = read_text(a.script);
    check(ll_script_parse(text.c_str(), fs::path(a.script).parent_path().string().c_str(), sc.out()));
  } else if (!a.sequence.empty()) {
    check(ll_script_scripted(a.sequence.c_str(), a.seed, sc.out()));
  } else {
    std::ostringstream s;
    s.precision(17);
    s << "seed = " << a.seed << "\nbackgrounds = " << a.background << "\n[frame]\n";
    s << "rotation_deg = " << a.rotation << "\ntranslate_x_mm = " << a.tx << "\ntranslate_y_mm = " << a.ty << "\n";
    s << "lux = " << a.lux << "\npush_x_mm = " << a.push_x << "\npush_y_mm = " << a.push_y << "\n";
    s << "rotate_deg = " << a.twist << "\n";
    if (a.press_x || a.press_y || a.press_amp) {
      s << "press_x_mm = " << a.press_x.value_or(0) << "\npress_y_mm = " << a.press_y.value_or(0) << "\n";
      if (a.press_amp) s << "press_amplitude_mm = " << *a.press_amp << "\n";
    }
    if (a.squeeze_ratio) s << "squeeze_ratio = " << *a.squeeze_ratio << "\nsqueeze_axis_deg = " << a.squeeze_axis.value_or(0) << "\n";
    check(ll_script_parse(s.str().c_str(), "", sc.out()));
  }
  const char* script_pattern = nullptr;
  check(ll_script_pattern_path(sc.get(), &script_pattern));
  Pattern p = resolve_pattern(!a.pattern.empty() ? a.pattern : std::string(script_pattern), cfg, false);

  std::error_code ec;
  fs::create_directories(a.output, ec);
  if (ec) usage_error("cannot create " + a.output + ": " + ec.message());
  if (!a.save_script.empty()) {
    Str text;
    check(ll_script_serialize(sc.get(), text.out()));
    write_text(a.save_script, text.str());
  }
  std::size_t n = 0;
  check(ll_script_frame_count(sc.get(), &n));
  for (std::size_t i = 0; i < n; ++i) {
    ImageH img;
    Str side;
    check(ll_script_render_frame(sc.get(), i, p.get(), cfg.get(), img.out(), side.out()));
    const std::string base = (fs::path(a.output) / ("frame_" + zero_pad(i))).string();
    check(ll_image_save(img.get(), (base + ".png").c_str()));
    write_text(base + ".json", side.str());
  }
  std::cout << "wrote " << n << " frame" << (n == 1 ? "" : "s") << " to " << a.output << "\n";
  return 0;
}

int cmd_detect(const std::vector<std::string>& inputs, const std::string& output, const std::string& overlay,
               const Config& cfg, unsigned jobs) {
  const auto files = list_frames(inputs);
  if (files.empty()) usage_error("no input images");
  if (files.size() == 1) {
    ImageH img;
    check(ll_image_load(files[0].c_str(), img.out()));
    Str pts;
    std::size_t count = 0;
    check(ll_detect_points(img.get(), cfg.get(), pts.out(), &count));
    write_text(output, pts.str());
    if (!overlay.empty()) {
      ImageH ov;
      check(ll_debug_overlay(img.get(), cfg.get(), ov.out()));
      check(ll_image_save(ov.get(), overlay.c_str()));
    }
    return 0;
  }
  // Several frames: one JSON per frame in the output directory, spread over worker threads.
  if (output.empty() || output == "-") usage_error("detect with several images needs -o DIR");
  fs::create_directories(output);
  if (!overlay.empty()) fs::create_directories(overlay);
  std::atomic<std::size_t> next{0};
  std::atomic<int> worst{0};
  std::mutex err_mu;
  auto worker = [&] {
    for (std::size_t i = next++; i < files.size(); i = next++) {
      ImageH img;
      Str pts;
      ll_status s = ll_image_load(files[i].c_str(), img.out());
      if (s == LL_OK) s = ll_detect_points(img.get(), cfg.get(), pts.out(), nullptr);
      ImageH ov;
      if (s == LL_OK && !overlay.empty()) s = ll_debug_overlay(img.get(), cfg.get(), ov.out());
      const std::string stem = fs::path(files[i]).stem().string();
      if (s == LL_OK && ov.get()) s = ll_image_save(ov.get(), (fs::path(overlay) / (stem + ".png")).string().c_str());
      if (s != LL_OK) {
        const std::lock_guard<std::mutex> lock(err_mu);
        report(s);
        worst = std::max(worst.load(), exit_code(s));
        continue;
      }
      std::ofstream((fs::path(output) / (stem + ".json")).string()) << pts.str();
    }
  };
  std::vector<std::thread> pool;
  const unsigned n = std::max(1u, std::min<unsigned>(jobs, static_cast<unsigned>(files.size())));
  for (unsigned i = 0; i < n; ++i) pool.emplace_back(worker);
  for (auto& t : pool) t.join();
  return worst;
}

int cmd_track(const std::vector<std::string>& inputs, const std::string& pattern, const std::string& output,
              const std::string& dump_dir, const Config& cfg) {
  const auto files = list_frames(inputs);
  if (files.empty()) usage_error("no input frames");
  Pattern p = resolve_pattern(pattern, cfg, false);
  Lookup lut;
  check(ll_lookup_build(p.get(), lut.out()));
  TrackerH tr;
  check(ll_tracker_new(cfg.get(), tr.out()));
  if (!dump_dir.empty()) fs::create_directories(dump_dir);
  std::string events;
  for (std::size_t i = 0; i < files.size(); ++i) {
    ImageH img;
    check(ll_image_load(files[i].c_str(), img.out()));
    Analysis an;
    check(ll_analyze(img.get(), lut.get(), cfg.get(), an.out()));
    if (!dump_dir.empty()) {
      Str j;
      check(ll_analysis_json(an.get(), j.out()));
      write_text((fs::path(dump_dir) / (fs::path(files[i]).stem().string() + ".json")).string(), j.str());
    }
    Str ev;
    check(ll_tracker_step(tr.get(), an.get(), frame_index(files[i], static_cast<long long>(i)), ev.out(), nullptr));
    events += ev.str();
  }
  write_text(output, events);
  return 0;
}

int cmd_identify(const std::string& pattern_file, const std::string& image, std::vector<std::string> patterns,
                 const Config& cfg) {
  if (image.empty()) {
    if (pattern_file.empty()) usage_error("identify needs a pattern file or --image");
    Pattern p = load_pattern_file(pattern_file);
    Str id;
    check(ll_pattern_family_id(p.get(), id.out()));
    std::cout << id.str() << "\n";
    return 0;
  }
  if (!pattern_file.empty()) patterns.insert(patterns.begin(), pattern_file);
  if (patterns.empty()) {
    std::size_t n = 0;
    check(ll_config_pattern_count(cfg.get(), &n));
    for (std::size_t i = 0; i < n; ++i) {
      const char* path = nullptr;
      check(ll_config_pattern_path(cfg.get(), i, &path));
      patterns.emplace_back(path);
    }
  }
  if (patterns.empty()) usage_error("identify --image needs --pattern files or [patterns] in the config");
  std::vector<Pattern> loaded;
  std::vector<const ll_pattern*> raw;
  for (const auto& f : patterns) loaded.push_back(load_pattern_file(f));
  for (const auto& p : loaded) raw.push_back(p.get());
  ImageH img;
  check(ll_image_load(image.c_str(), img.out()));
  std::size_t index = 0;
  Str id, scores;
  check(ll_identify(img.get(), raw.data(), raw.size(), cfg.get(), &index, id.out(), scores.out()));
  std::cout << id.str() << "\n";
  std::cerr << "matched " << patterns[index] << " (points per pattern " << scores.str() << ")\n";
  return 0;
}

struct EvalArgs {
  std::string kind, pattern, output, values;
  int trials = 0;
  std::uint64_t seed = 1;
};

int cmd_eval(const EvalArgs& a, const Config& cfg) {
  Pattern p = resolve_pattern(a.pattern, cfg, true);
  Str csv;
  if (a.kind == "rotation") {
    double mean = 0;
    check(ll_eval_rotation(p.get(), cfg.get(), a.trials > 0 ? a.trials : 500, a.seed, csv.out(), &mean));
    std::cerr << "mean absolute rotation error " << mean << " deg\n";
  } else if (a.kind == "illuminance") {
    const auto lux = parse_list<double>(a.values.empty() ? "0,25,50,75,100,150,200,300,500,800" : a.values, "lux");
    double knee = 0;
    int found = 0;
    check(ll_eval_illuminance(p.get(), cfg.get(), lux.data(), lux.size(), a.trials > 0 ? a.trials : 12, a.seed,
                              csv.out(), &knee, &found));
    if (found) std::cerr << "detection knee at " << knee << " lux\n";
    else std::cerr << "no detection knee in the swept range\n";
  } else if (a.kind == "pupil") {
    const auto pupils = parse_list<double>(a.values.empty() ? "0,8,12,16,20" : a.values, "pupil");
    check(ll_eval_pupil(p.get(), cfg.get(), pupils.data(), pupils.size(), a.trials > 0 ? a.trials : 4, a.seed, csv.out()));
  } else if (a.kind == "gestures") {
    double acc = 0;
    int false_onsets = 0;
    const int n = a.trials > 0 ? a.trials : 100;
    check(ll_eval_gestures(p.get(), cfg.get(), n, n, a.seed, csv.out(), &acc, &false_onsets));
    std::cerr << "onset accuracy " << acc << ", rest events " << false_onsets << "\n";
  } else {
    usage_error("unknown evaluation '" + a.kind + "' (rotation, illuminance, pupil, gestures)");
  }
  write_text(a.output, csv.str());
  return 0;
}

int cmd_bench(const std::string& pattern, const std::string& counts_text, int frames, std::uint64_t seed,
              const std::string& output, const Config& cfg) {
  Pattern p = resolve_pattern(pattern, cfg, true);
  const auto counts = parse_list<std::size_t>(counts_text, "point count");
  Str csv;
  check(ll_bench(p.get(), cfg.get(), counts.data(), counts.size(), frames, seed, csv.out()));
  write_text(output, csv.str());
  // Throughput is hardware-dependent: a miss is a warning, not a failure.
  std::istringstream in(csv.str());
  std::string line;
  std::getline(in, line);
  while (std::getline(in, line)) {
    std::vector<std::string> cols;
    std::stringstream ls(line);
    for (std::string c; std::getline(ls, c, ',');) cols.push_back(c);
    if (cols.size() >= 4 && std::stod(cols[3]) < 20.0)
      std::cerr << "warning: " << cols[0] << " points at " << cols[3] << " FPS, below the 20 FPS target\n";
  }
  return 0;
}

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"lensleech: hexagonal marker patterns, synthetic rendering, and gesture tracking"};
  app.require_subcommand(1);
  app.set_version_flag("--version", ll_version());
  std::string config_path;
  app.add_flag("--json-errors", g_json_errors, "Print errors as JSON on stderr");
  app.add_option("--config", config_path, "Pipeline config file (fallback: $LENSLEECH_CONFIG)");

  GenerateArgs gen;
  auto* g = app.add_subcommand("generate", "Generate a pattern file");
  g->add_option("--radius", gen.radius, "Hex disc radius")->capture_default_str();
  g->add_option("--colors", gen.colors, "Number of dot colors")->capture_default_str();
  g->add_option("--mode", gen.mode, "per-rotation-unique or all-rotations-unique")->capture_default_str();
  g->add_option("--center-class", gen.center_class, "Family id C:RRRRRR for the origin window");
  g->add_option("--seed", gen.seed, "Search seed")->capture_default_str();
  g->add_option("--pitch-mm", gen.pitch, "Dot spacing in mm")->capture_default_str();
  g->add_option("-o,--output", gen.output, "Pattern file to write")->required();

  std::string v_file, v_mode = "per-rotation-unique";
  bool v_json = false;
  auto* v = app.add_subcommand("validate", "Check window uniqueness; exit 0 iff valid");
  v->add_option("pattern", v_file, "Pattern file")->required();
  v->add_option("--mode", v_mode, "per-rotation-unique or all-rotations-unique")->capture_default_str();
  v->add_flag("--json", v_json, "Print the full report as JSON");

  std::string l_file, l_out;
  auto* l = app.add_subcommand("lookup", "Write the window lookup table as JSON");
  l->add_option("pattern", l_file, "Pattern file")->required();
  l->add_option("-o,--output", l_out, "Output file (default stdout)");

  std::string s_file, s_out;
  int s_color = 0;
  auto* st = app.add_subcommand("stencil", "Export an SVG stencil for one dot color");
  st->add_option("pattern", s_file, "Pattern file")->required();
  st->add_option("--color", s_color, "Color index")->capture_default_str();
  st->add_option("-o,--output", s_out, "SVG file (default stdout)");

  RenderArgs ra;
  auto* r = app.add_subcommand("render", "Render synthetic frames with ground-truth sidecars");
  r->add_option("--pattern", ra.pattern, "Pattern file");
  r->add_option("--script", ra.script, "Scenario script");
  r->add_option("--sequence", ra.sequence, "Built-in sequence: rest, press, push, rotate, squeeze");
  r->add_option("--seed", ra.seed, "Noise and sequence seed")->capture_default_str();
  r->add_option("-o,--output", ra.output, "Output directory")->required();
  r->add_option("--save-script", ra.save_script, "Also write the frames as a scenario script");
  r->add_option("--rotation-deg", ra.rotation, "Single frame: pose rotation");
  r->add_option("--translate-x-mm", ra.tx, "Single frame: pose translation x");
  r->add_option("--translate-y-mm", ra.ty, "Single frame: pose translation y");
  r->add_option("--lux", ra.lux, "Single frame: ambient illuminance")->capture_default_str();
  r->add_option("--background", ra.background, "Single frame: flat, procedural:N, or image path")->capture_default_str();
  r->add_option("--push-x-mm", ra.push_x, "Single frame: push x");
  r->add_option("--push-y-mm", ra.push_y, "Single frame: push y");
  r->add_option("--twist-deg", ra.twist, "Single frame: rotate deformation");
  r->add_option("--press-x-mm", ra.press_x, "Single frame: press center x");
  r->add_option("--press-y-mm", ra.press_y, "Single frame: press center y");
  r->add_option("--press-amplitude-mm", ra.press_amp, "Single frame: press amplitude");
  r->add_option("--squeeze-axis-deg", ra.squeeze_axis, "Single frame: squeeze axis");
  r->add_option("--squeeze-ratio", ra.squeeze_ratio, "Single frame: squeeze ratio in (0, 1]");

  std::vector<std::string> d_in;
  std::string d_out, d_overlay;
  unsigned d_jobs = std::max(1u, std::thread::hardware_concurrency());
  auto* d = app.add_subcommand("detect", "Detect and label dots; writes points JSON");
  d->add_option("images", d_in, "Image files or directories")->required();
  d->add_option("-o,--output", d_out, "JSON file, or directory for several images (default stdout)");
  d->add_option("--debug-overlay", d_overlay, "Overlay image (directory for several images)");
  d->add_option("-j,--jobs", d_jobs, "Worker threads for several images")->capture_default_str();

  std::vector<std::string> t_in;
  std::string t_pattern, t_out, t_dump;
  auto* t = app.add_subcommand("track", "Track gestures over a frame sequence; writes JSONL events");
  t->add_option("frames", t_in, "Frame directory or files in index order")->required();
  t->add_option("--pattern", t_pattern, "Pattern file");
  t->add_option("-o,--output", t_out, "Events file (default stdout)");
  t->add_option("--dump-match", t_dump, "Directory for per-frame match dumps");

  std::string i_file, i_image;
  std::vector<std::string> i_patterns;
  auto* id = app.add_subcommand("identify", "Print the pattern family id");
  id->add_option("pattern_file", i_file, "Pattern file");
  id->add_option("--image", i_image, "Identify which registered pattern an image shows");
  id->add_option("--pattern", i_patterns, "Candidate pattern (repeatable)");

  EvalArgs ea;
  auto* e = app.add_subcommand("eval", "Run an evaluation sweep; writes CSV");
  e->add_option("kind", ea.kind, "rotation, illuminance, pupil, gestures")->required();
  e->add_option("--pattern", ea.pattern, "Pattern file (default: generated, seed 7)");
  e->add_option("--trials", ea.trials, "Trials (per level or per kind)");
  e->add_option("--values", ea.values, "Comma list of lux or pupil values");
  e->add_option("--seed", ea.seed, "Run seed")->capture_default_str();
  e->add_option("-o,--output", ea.output, "CSV file (default stdout)");

  std::string b_pattern, b_counts = "39,69", b_out;
  int b_frames = 60;
  std::uint64_t b_seed = 1;
  auto* b = app.add_subcommand("bench", "Measure detect+match+track throughput; writes CSV");
  b->add_option("--pattern", b_pattern, "Pattern file (default: generated, seed 7)");
  b->add_option("--points", b_counts, "Comma list of visible point counts")->capture_default_str();
  b->add_option("--frames", b_frames, "Frames per count")->capture_default_str();
  b->add_option("--seed", b_seed, "Run seed")->capture_default_str();
  b->add_option("-o,--output", b_out, "CSV file (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& ex) {
    return app.exit(ex);
  } catch (const CLI::CallForAllHelp& ex) {
    return app.exit(ex);
  } catch (const CLI::CallForVersion& ex) {
    return app.exit(ex);
  } catch (const CLI::ParseError& ex) {
    if (g_json_errors) {
      try {
        usage_error(ex.what());
      } catch (const Failure& f) {
        return f.code;
      }
    }
    app.exit(ex);
    return 1;
  }

  try {
    if (g->parsed()) return cmd_generate(gen);
    if (v->parsed()) return cmd_validate(v_file, v_mode, v_json);
    if (l->parsed()) return cmd_lookup(l_file, l_out);
    if (st->parsed()) return cmd_stencil(s_file, s_color, s_out);
    const Config cfg = load_config(config_path);
    if (r->parsed()) return cmd_render(ra, cfg);
    if (d->parsed()) return cmd_detect(d_in, d_out, d_overlay, cfg, d_jobs);
    if (t->parsed()) return cmd_track(t_in, t_pattern, t_out, t_dump, cfg);
    if (id->parsed()) return cmd_identify(i_file, i_image, i_patterns, cfg);
    if (e->parsed()) return cmd_eval(ea, cfg);
    if (b->parsed()) return cmd_bench(b_pattern, b_counts, b_frames, b_seed, b_out, cfg);
  } catch (const Failure& f) {
    return f.code;
  } catch (const std::exception& ex) {
    if (g_json_errors) std::cerr << "{\"error\":{\"kind\":\"internal\",\"message\":\"unexpected failure\"}}\n";
    else std::cerr << "lensleech: internal: " << ex.what() << "\n";
    return 3;
  }
  return 3;
}
