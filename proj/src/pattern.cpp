// SPDX-License-Identifier: Apache-2.0
#include "lensleech/pattern.hpp"

#include <algorithm>
#include <charconv>
#include <random>
#include <tuple>
#include <unordered_map>

#include "lensleech/error.hpp"
#include "lensleech/textio.hpp"

namespace lensleech {

namespace {

constexpr int kMaxColors = 16;

void check_colors(int colors) {
  if (colors < 2 || colors > kMaxColors)
    fail(ErrorKind::Domain, "color count must be in [2, 16], got " + std::to_string(colors));
}

std::uint32_t ipow(int base, int exp) {
  std::uint32_t r = 1;
  for (int i = 0; i < exp; ++i) r *= static_cast<std::uint32_t>(base);
  return r;
}

} // namespace

const char* to_string(UniquenessMode m) {
  return m == UniquenessMode::PerRotation ? "per-rotation-unique" : "all-rotations-unique";
}

UniquenessMode parse_mode(std::string_view s) {
  if (s == "per-rotation-unique" || s == "per-rotation") return UniquenessMode::PerRotation;
  if (s == "all-rotations-unique" || s == "all-rotations") return UniquenessMode::AllRotations;
  fail(ErrorKind::Domain, "unknown uniqueness mode '" + std::string(s) + "'");
}

std::uint32_t code_space(int colors) {
  check_colors(colors);
  return ipow(colors, 7);
}

std::uint32_t encode(const WindowCode& w, int colors) {
  const auto k = static_cast<std::uint32_t>(colors);
  std::uint32_t code = static_cast<std::uint32_t>(w.center);
  for (int d : w.ring) code = code * k + static_cast<std::uint32_t>(d);
  return code;
}

WindowCode decode(std::uint32_t code, int colors) {
  const auto k = static_cast<std::uint32_t>(colors);
  WindowCode w;
  for (int i = 5; i >= 0; --i) {
    w.ring[static_cast<std::size_t>(i)] = static_cast<int>(code % k);
    code /= k;
  }
  w.center = static_cast<int>(code);
  return w;
}

WindowCode rotate_window(const WindowCode& w, int j) {
  j %= 6;
  if (j < 0) j += 6;
  WindowCode out;
  out.center = w.center;
  for (int i = 0; i < 6; ++i) out.ring[static_cast<std::size_t>(i)] = w.ring[static_cast<std::size_t>((i - j + 6) % 6)];
  return out;
}

std::uint32_t rotate_code(std::uint32_t code, int j, int colors) {
  return encode(rotate_window(decode(code, colors), j), colors);
}

PatternFamilyId canonical_class(const WindowCode& w, int colors) {
  std::uint32_t best = encode(w, colors);
  for (int j = 1; j < 6; ++j) best = std::min(best, encode(rotate_window(w, j), colors));
  return {best, colors};
}

std::string PatternFamilyId::to_string() const {
  const WindowCode w = decode(code, colors);
  std::string s = std::to_string(w.center) + ":";
  for (int d : w.ring) {
    s += d < 10 ? static_cast<char>('0' + d) : static_cast<char>('a' + d - 10);
  }
  return s;
}

PatternFamilyId PatternFamilyId::parse(std::string_view text, int colors) {
  check_colors(colors);
  const auto colon = text.find(':');
  if (colon == std::string_view::npos || text.size() - colon - 1 != 6)
    fail(ErrorKind::Domain, "family id must look like 'C:RRRRRR', got '" + std::string(text) + "'");
  long long center = 0;
  if (!parse_int(text.substr(0, colon), center) || center < 0 || center >= colors)
    fail(ErrorKind::Domain, "bad center color in family id '" + std::string(text) + "'");
  WindowCode w;
  w.center = static_cast<int>(center);
  for (std::size_t i = 0; i < 6; ++i) {
    const char ch = text[colon + 1 + i];
    int d = -1;
    if (ch >= '0' && ch <= '9') d = ch - '0';
    else if (ch >= 'a' && ch <= 'f') d = ch - 'a' + 10;
    if (d < 0 || d >= colors)
      fail(ErrorKind::Domain, "bad ring digit in family id '" + std::string(text) + "'");
    w.ring[i] = d;
  }
  const PatternFamilyId id = canonical_class(w, colors);
  if (id.code != encode(w, colors))
    fail(ErrorKind::Domain, "family id '" + std::string(text) + "' is not in canonical form (expected " +
                                id.to_string() + ")");
  return id;
}

std::vector<PatternFamilyId> necklace_classes(int colors) {
  check_colors(colors);
  std::vector<PatternFamilyId> out;
  const std::uint32_t n = code_space(colors);
  for (std::uint32_t code = 0; code < n; ++code) {
    const PatternFamilyId id = canonical_class(decode(code, colors), colors);
    if (id.code == code) out.push_back(id);
  }
  return out;
}

std::uint64_t window_capacity(int colors, UniquenessMode mode) {
  const std::uint32_t n = code_space(colors);
  if (mode == UniquenessMode::PerRotation) return n;
  // Each usable window consumes all six of its rotations, so its ring must be aperiodic.
  std::uint64_t aperiodic_codes = 0;
  for (std::uint32_t code = 0; code < n; ++code) {
    const WindowCode w = decode(code, colors);
    bool periodic = false;
    for (int j = 1; j < 6 && !periodic; ++j) periodic = rotate_window(w, j) == w;
    if (!periodic) ++aperiodic_codes;
  }
  return aperiodic_codes / 6;
}

// ---------------------------------------------------------------------------

HexPattern::HexPattern(int radius, int colors, double pitch_mm)
    : disc_(hex_disc(radius)), colors_(colors), pitch_mm_(pitch_mm) {
  check_colors(colors);
  if (!(pitch_mm > 0.0)) fail(ErrorKind::Domain, "pitch must be positive");
  colors_of_.assign(disc_.coords.size(), 0);
}

void HexPattern::set_pitch_mm(double p) {
  if (!(p > 0.0)) fail(ErrorKind::Domain, "pitch must be positive");
  pitch_mm_ = p;
}

int HexPattern::color(AxialCoord c) const {
  const int idx = disc_.index_of(c);
  if (idx < 0) fail(ErrorKind::Domain, "coordinate outside pattern disc");
  return colors_of_[static_cast<std::size_t>(idx)];
}

void HexPattern::set_color(AxialCoord c, int color) {
  const int idx = disc_.index_of(c);
  if (idx < 0) fail(ErrorKind::Domain, "coordinate outside pattern disc");
  set_color_at(static_cast<std::size_t>(idx), color);
}

void HexPattern::set_color_at(std::size_t index, int color) {
  if (color < 0 || color >= colors_) fail(ErrorKind::Domain, "color index out of range");
  colors_of_.at(index) = static_cast<std::uint8_t>(color);
}

WindowCode HexPattern::window_at(AxialCoord center) const {
  if (hex_length(center) > radius() - 1) fail(ErrorKind::Domain, "window center is not interior");
  WindowCode w;
  w.center = color(center);
  const auto ns = neighbors(center);
  for (std::size_t i = 0; i < 6; ++i) w.ring[i] = color(ns[i]);
  return w;
}

std::vector<AxialCoord> HexPattern::interior() const {
  if (radius() < 1) return {};
  return hex_disc(radius() - 1).coords;
}

bool operator==(const HexPattern& a, const HexPattern& b) {
  return a.radius() == b.radius() && a.colors_ == b.colors_ && a.pitch_mm_ == b.pitch_mm_ &&
         a.mode_ == b.mode_ && a.seed_ == b.seed_ && a.colors_of_ == b.colors_of_;
}

// ---------------------------------------------------------------------------
// Generation

namespace {

class Generator {
public:
  explicit Generator(const GenerateOptions& o)
      : opts_(o), disc_(hex_disc(o.radius)), k_(o.colors), n_(disc_.coords.size()),
        used_(code_space(o.colors), 0), assign_(n_, -1), complete_at_(n_), marked_(n_),
        order_(n_), order_pos_(n_, 0), rng_(o.seed) {
    for (AxialCoord c : hex_disc(o.radius - 1).coords) {
      std::array<int, 7> cells{};
      cells[0] = disc_.index_of(c);
      const auto ns = neighbors(c);
      for (std::size_t i = 0; i < 6; ++i) cells[i + 1] = disc_.index_of(ns[i]);
      const int last = *std::max_element(cells.begin(), cells.end());
      complete_at_[static_cast<std::size_t>(last)].push_back(cells);
    }
  }

  HexPattern run() {
    std::uint64_t total_steps = 0;
    for (int attempt = 0; attempt < opts_.max_restarts; ++attempt) {
      const Outcome res = search(total_steps);
      if (res == Outcome::Found) return finish();
      if (res == Outcome::Exhausted)
        fail(ErrorKind::Unsatisfiable, "pattern search space exhausted after " + std::to_string(attempt + 1) +
                                           " attempts (" + std::to_string(total_steps) + " steps): no pattern exists");
    }
    fail(ErrorKind::Unsatisfiable, "pattern search budget exhausted after " + std::to_string(opts_.max_restarts) +
                                       " attempts (" + std::to_string(total_steps) + " steps)");
  }

private:
  enum class Outcome { Found, Budget, Exhausted };

  void reset() {
    std::fill(used_.begin(), used_.end(), std::uint8_t{0});
    std::fill(assign_.begin(), assign_.end(), -1);
    for (auto& m : marked_) m.clear();
    std::fill(order_pos_.begin(), order_pos_.end(), 0);
  }

  void shuffle_order(std::size_t i) {
    auto& o = order_[i];
    o.resize(static_cast<std::size_t>(k_));
    for (int c = 0; c < k_; ++c) o[static_cast<std::size_t>(c)] = c;
    std::shuffle(o.begin(), o.end(), rng_);
    order_pos_[i] = 0;
  }

  std::uint32_t code_of(const std::array<int, 7>& cells) const {
    WindowCode w;
    w.center = assign_[static_cast<std::size_t>(cells[0])];
    for (std::size_t i = 0; i < 6; ++i) w.ring[i] = assign_[static_cast<std::size_t>(cells[i + 1])];
    return encode(w, k_);
  }

  // Marks the windows completed by assigning cell i. Rolls back and returns false on conflict.
  bool try_mark(std::size_t i) {
    auto& marked = marked_[i];
    for (const auto& cells : complete_at_[i]) {
      const std::uint32_t code = code_of(cells);
      if (opts_.mode == UniquenessMode::PerRotation) {
        if (used_[code]) return rollback(i);
        used_[code] = 1;
        marked.push_back(code);
      } else {
        std::array<std::uint32_t, 6> variants{};
        for (int j = 0; j < 6; ++j) variants[static_cast<std::size_t>(j)] = rotate_code(code, j, k_);
        for (int j = 0; j < 6; ++j) {
          const auto v = variants[static_cast<std::size_t>(j)];
          if (used_[v]) return rollback(i);
          for (int l = 0; l < j; ++l)
            if (variants[static_cast<std::size_t>(l)] == v) return rollback(i);
        }
        for (auto v : variants) {
          used_[v] = 1;
          marked.push_back(v);
        }
      }
    }
    return true;
  }

  bool rollback(std::size_t i) {
    unmark(i);
    return false;
  }

  void unmark(std::size_t i) {
    for (auto code : marked_[i]) used_[code] = 0;
    marked_[i].clear();
  }

  std::size_t seed_center() {
    if (!opts_.center_class) return 0;
    WindowCode w = rotate_window(decode(opts_.center_class->code, k_), static_cast<int>(rng_() % 6));
    assign_[0] = w.center;
    for (std::size_t i = 0; i < 6; ++i) assign_[i + 1] = w.ring[i];
    for (std::size_t i = 0; i < 7; ++i) {
      if (!try_mark(i)) fail(ErrorKind::Domain, "center class " + opts_.center_class->to_string() +
                                                    " cannot be unique in " + to_string(opts_.mode) + " mode");
    }
    return 7;
  }

  Outcome search(std::uint64_t& total_steps) {
    reset();
    const std::size_t start = std::min(seed_center(), n_);
    std::uint64_t steps = 0;
    std::size_t i = start;
    if (i < n_) shuffle_order(i);
    while (i < n_) {
      if (order_pos_[i] == k_) {
        assign_[i] = -1;
        if (i == start) return Outcome::Exhausted;
        --i;
        unmark(i);
        continue;
      }
      if (++steps > opts_.backtrack_budget) {
        total_steps += steps;
        return Outcome::Budget;
      }
      assign_[i] = order_[i][static_cast<std::size_t>(order_pos_[i]++)];
      if (try_mark(i)) {
        ++i;
        if (i < n_) shuffle_order(i);
      }
    }
    total_steps += steps;
    return Outcome::Found;
  }

  HexPattern finish() const {
    HexPattern p(opts_.radius, k_, opts_.pitch_mm);
    for (std::size_t i = 0; i < n_; ++i) p.set_color_at(i, assign_[i]);
    p.set_mode(opts_.mode);
    p.set_seed(opts_.seed);
    return p;
  }

  const GenerateOptions& opts_;
  HexDisc disc_;
  int k_;
  std::size_t n_;
  std::vector<std::uint8_t> used_;
  std::vector<int> assign_;
  std::vector<std::vector<std::array<int, 7>>> complete_at_;
  std::vector<std::vector<std::uint32_t>> marked_;
  std::vector<std::vector<int>> order_;
  std::vector<int> order_pos_;
  std::mt19937_64 rng_;
};

} // namespace

HexPattern generate(const GenerateOptions& opts) {
  if (opts.radius < 1) fail(ErrorKind::Domain, "generate: radius must be >= 1");
  check_colors(opts.colors);
  if (!(opts.pitch_mm > 0.0)) fail(ErrorKind::Domain, "generate: pitch must be positive");
  if (opts.max_restarts < 1) fail(ErrorKind::Domain, "generate: max_restarts must be >= 1");
  const auto windows = static_cast<std::uint64_t>(disc_size(opts.radius - 1));
  const auto capacity = window_capacity(opts.colors, opts.mode);
  if (windows > capacity)
    fail(ErrorKind::Domain, std::string("generate: ") + to_string(opts.mode) + " needs " + std::to_string(windows) +
                                " distinct windows but " + std::to_string(opts.colors) + " colors allow only " +
                                std::to_string(capacity));
  if (opts.center_class && opts.center_class->colors != opts.colors)
    fail(ErrorKind::Domain, "generate: center class color count differs from pattern");
  return Generator(opts).run();
}

// ---------------------------------------------------------------------------
// Verification

UniquenessReport verify(const HexPattern& p, UniquenessMode mode) {
  UniquenessReport rep;
  rep.mode = mode;
  const auto interior = p.interior();
  rep.window_count = interior.size();

  // Every rotated placement grouped by code.
  std::unordered_map<std::uint32_t, std::vector<WindowPlacement>> by_code;
  std::vector<std::uint32_t> base_codes;
  base_codes.reserve(interior.size());
  for (AxialCoord c : interior) {
    const WindowCode w = p.window_at(c);
    base_codes.push_back(encode(w, p.colors()));
    for (int j = 0; j < 6; ++j) by_code[encode(rotate_window(w, j), p.colors())].push_back({c, j});
  }

  for (std::size_t i = 0; i < interior.size(); ++i) {
    const auto& group = by_code[base_codes[i]];
    if (group.size() == 1) {
      rep.unique_all_orientations.push_back(interior[i]);
    } else {
      const bool same_orientation_clash = std::any_of(group.begin(), group.end(), [&](const WindowPlacement& wp) {
        return wp.rotation == 0 && wp.center != interior[i];
      });
      if (!same_orientation_clash) rep.unique_given_only.push_back(interior[i]);
    }
  }

  if (mode == UniquenessMode::PerRotation) {
    for (const auto& [code, group] : by_code) {
      (void)code;
      for (std::size_t a = 0; a < group.size(); ++a)
        for (std::size_t b = a + 1; b < group.size(); ++b)
          if (group[a].rotation == 0 && group[b].rotation == 0) rep.collisions.push_back({group[a], group[b]});
    }
  } else {
    for (const auto& [code, group] : by_code) {
      (void)code;
      for (std::size_t a = 0; a < group.size(); ++a)
        for (std::size_t b = a + 1; b < group.size(); ++b) rep.collisions.push_back({group[a], group[b]});
    }
  }
  // Hash-map iteration order is unspecified; report in a stable order.
  auto key = [](const Collision& c) {
    return std::tuple(c.a.center, c.a.rotation, c.b.center, c.b.rotation);
  };
  for (auto& c : rep.collisions)
    if (std::tuple(c.b.center, c.b.rotation) < std::tuple(c.a.center, c.a.rotation)) std::swap(c.a, c.b);
  std::sort(rep.collisions.begin(), rep.collisions.end(),
            [&](const Collision& x, const Collision& y) { return key(x) < key(y); });
  return rep;
}

// ---------------------------------------------------------------------------
// Lookup

LookupTable build_lookup(const HexPattern& p) {
  if (p.radius() < 1) fail(ErrorKind::Domain, "build_lookup: pattern has no interior windows");
  if (!verify(p, UniquenessMode::PerRotation).valid())
    fail(ErrorKind::Domain, "build_lookup: pattern is not per-rotation unique");
  LookupTable t;
  t.colors_ = p.colors();
  t.radius_ = p.radius();
  for (AxialCoord c : p.interior()) {
    const WindowCode w = p.window_at(c);
    for (int j = 0; j < 6; ++j) t.entries_.push_back({encode(rotate_window(w, j), p.colors()), {c, j}});
  }
  std::sort(t.entries_.begin(), t.entries_.end(), [](const LookupTable::Entry& a, const LookupTable::Entry& b) {
    return std::tie(a.code, a.placement.rotation, a.placement.center) <
           std::tie(b.code, b.placement.rotation, b.placement.center);
  });
  t.placements_.reserve(t.entries_.size());
  for (const auto& e : t.entries_) t.placements_.push_back(e.placement);
  return t;
}

std::span<const WindowPlacement> LookupTable::find(std::uint32_t code) const {
  auto lo = std::lower_bound(entries_.begin(), entries_.end(), code,
                             [](const Entry& e, std::uint32_t c) { return e.code < c; });
  auto hi = lo;
  while (hi != entries_.end() && hi->code == code) ++hi;
  const auto first = static_cast<std::size_t>(lo - entries_.begin());
  return std::span<const WindowPlacement>(placements_).subspan(first, static_cast<std::size_t>(hi - lo));
}

std::optional<AxialCoord> LookupTable::find(std::uint32_t code, int rotation) const {
  for (const auto& wp : find(code))
    if (wp.rotation == rotation) return wp.center;
  return std::nullopt;
}

PatternFamilyId identify(const HexPattern& p) {
  if (p.radius() < 1) fail(ErrorKind::Domain, "identify: pattern has no origin window");
  return canonical_class(p.window_at({0, 0}), p.colors());
}

// ---------------------------------------------------------------------------
// Serialization

namespace {
constexpr std::string_view kMagic = "lensleech-pattern 1";
}

std::string serialize(const HexPattern& p) {
  std::string s;
  s += kMagic;
  s += '\n';
  s += "radius " + std::to_string(p.radius()) + "\n";
  s += "colors " + std::to_string(p.colors()) + "\n";
  s += "pitch_mm " + format_double(p.pitch_mm()) + "\n";
  s += std::string("mode ") + to_string(p.mode()) + "\n";
  s += "seed " + std::to_string(p.seed()) + "\n";
  for (std::size_t i = 0; i < p.size(); ++i) {
    const AxialCoord c = p.disc().coords[i];
    s += std::to_string(c.q) + " " + std::to_string(c.r) + " " + std::to_string(p.color_at(i)) + "\n";
  }
  return s;
}

HexPattern deserialize(std::string_view text) {
  const auto lines = split_lines(text);
  std::size_t li = 0;
  int lineno = 0;
  // Next non-empty, non-comment line.
  auto next = [&]() -> std::vector<std::string_view> {
    while (li < lines.size()) {
      ++lineno;
      const auto t = trim(lines[li++]);
      if (t.empty() || t.front() == '#') continue;
      return split_ws(t);
    }
    ++lineno;
    throw ParseError(lineno, 1, "unexpected end of input");
  };
  auto header = [&](std::string_view key) -> std::string_view {
    auto f = next();
    if (f.empty() || f[0] != key) throw ParseError(lineno, 1, "expected '" + std::string(key) + "'");
    if (f.size() != 2) throw ParseError(lineno, 2, "expected exactly one value for '" + std::string(key) + "'");
    return f[1];
  };
  auto header_int = [&](std::string_view key) {
    long long v = 0;
    if (!parse_int(header(key), v)) throw ParseError(lineno, 2, "invalid integer for '" + std::string(key) + "'");
    return v;
  };

  {
    auto f = next();
    if (f.size() != 2 || f[0] != "lensleech-pattern") throw ParseError(lineno, 1, "missing 'lensleech-pattern' magic");
    if (f[1] != "1") throw ParseError(lineno, 2, "unsupported format version");
  }
  const long long radius = header_int("radius");
  if (radius < 0 || radius > 64) throw ParseError(lineno, 2, "radius out of range");
  const long long colors = header_int("colors");
  if (colors < 2 || colors > kMaxColors) throw ParseError(lineno, 2, "colors out of range");
  double pitch = 0.0;
  if (!parse_double(header("pitch_mm"), pitch) || !(pitch > 0.0)) throw ParseError(lineno, 2, "invalid pitch_mm");
  UniquenessMode mode;
  {
    const auto v = header("mode");
    if (v == "per-rotation-unique") mode = UniquenessMode::PerRotation;
    else if (v == "all-rotations-unique") mode = UniquenessMode::AllRotations;
    else throw ParseError(lineno, 2, "unknown mode");
  }
  long long seed = 0;
  {
    const auto v = header("seed");
    std::uint64_t u = 0;
    auto res = std::from_chars(v.data(), v.data() + v.size(), u);
    if (res.ec != std::errc{} || res.ptr != v.data() + v.size()) throw ParseError(lineno, 2, "invalid seed");
    seed = static_cast<long long>(u);
  }

  HexPattern p(static_cast<int>(radius), static_cast<int>(colors), pitch);
  p.set_mode(mode);
  p.set_seed(static_cast<std::uint64_t>(seed));
  for (std::size_t i = 0; i < p.size(); ++i) {
    auto f = next();
    if (f.size() != 3) throw ParseError(lineno, static_cast<int>(std::min<std::size_t>(f.size(), 3)) + 1,
                                        "expected 'q r color'");
    long long q = 0, r = 0, col = 0;
    if (!parse_int(f[0], q)) throw ParseError(lineno, 1, "invalid q");
    if (!parse_int(f[1], r)) throw ParseError(lineno, 2, "invalid r");
    if (!parse_int(f[2], col) || col < 0 || col >= colors) throw ParseError(lineno, 3, "invalid color");
    const AxialCoord expect = p.disc().coords[i];
    if (q != expect.q) throw ParseError(lineno, 1, "coordinate out of canonical disc order");
    if (r != expect.r) throw ParseError(lineno, 2, "coordinate out of canonical disc order");
    p.set_color_at(i, static_cast<int>(col));
  }
  while (li < lines.size()) {
    ++lineno;
    const auto t = trim(lines[li++]);
    if (!t.empty() && t.front() != '#') throw ParseError(lineno, 1, "trailing data after last point");
  }
  return p;
}

HexPattern load_pattern(const std::string& path) { return deserialize(read_file(path)); }

void save_pattern(const HexPattern& p, const std::string& path) { write_file(path, serialize(p)); }

// ---------------------------------------------------------------------------
// Stencil

std::string export_stencil(const HexPattern& p, int color) {
  if (color < 0 || color >= p.colors()) fail(ErrorKind::Domain, "export_stencil: color index out of range");
  const double outline = p.radius() * p.pitch_mm() + p.pitch_mm();
  const double half = outline + 1.0;
  const double size = 2.0 * half;
  std::string s;
  s += "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  s += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + format_fixed(size, 4) + "mm\" height=\"" +
       format_fixed(size, 4) + "mm\" viewBox=\"0 0 " + format_fixed(size, 4) + " " + format_fixed(size, 4) + "\">\n";
  s += "  <!-- lensleech stencil: color " + std::to_string(color) + " of " + std::to_string(p.colors()) +
       ", pitch " + format_double(p.pitch_mm()) + " mm -->\n";
  s += "  <circle id=\"outline\" cx=\"" + format_fixed(half, 6) + "\" cy=\"" + format_fixed(half, 6) + "\" r=\"" +
       format_fixed(outline, 6) + "\" fill=\"none\" stroke=\"black\" stroke-width=\"0.1\"/>\n";
  s += "  <g id=\"drill\" fill=\"black\">\n";
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (p.color_at(i) != color) continue;
    const AxialCoord c = p.disc().coords[i];
    const Vec2 pos = p.position(c);
    // SVG y grows downwards.
    s += "    <circle cx=\"" + format_fixed(half + pos.x, 9) + "\" cy=\"" + format_fixed(half - pos.y, 9) + "\" r=\"" +
         format_fixed(kStencilDotDiameterMm / 2.0, 6) + "\" data-q=\"" + std::to_string(c.q) + "\" data-r=\"" +
         std::to_string(c.r) + "\"/>\n";
  }
  s += "  </g>\n</svg>\n";
  return s;
}

} // namespace lensleech
