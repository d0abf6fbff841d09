// SPDX-License-Identifier: Apache-2.0
#include "lensleech/match.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <optional>

#include "lensleech/error.hpp"
#include "lensleech/registration.hpp"

namespace lensleech {

void validate(const MatchConfig& cfg) {
  require(cfg.ratio_lo > 0.0 && cfg.ratio_lo < 1.0, "match: ratio_lo must lie in (0, 1)");
  require(cfg.ratio_hi > 1.0, "match: ratio_hi must exceed 1");
  require(cfg.min_matches >= 1, "match: min_matches must be positive");
}

namespace {

// Math-convention angle (y up) of the vector from a to b, in degrees.
double image_angle(Vec2 a, Vec2 b) { return rad2deg(std::atan2(-(b.y - a.y), b.x - a.x)); }

} // namespace

std::vector<ObservedWindow> group(std::span<const LabeledPoint> points, const MatchConfig& cfg, double reference_deg) {
  validate(cfg);
  const std::size_t n = points.size();
  if (n < 7) fail(ErrorKind::Insufficient, "group: need at least 7 points, got " + std::to_string(n));

  struct Neighbor {
    double dist;
    int index;
  };
  std::vector<std::array<Neighbor, 6>> knn(n);
  std::vector<double> nearest(n);
  std::vector<Neighbor> cand;
  cand.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    cand.clear();
    for (std::size_t j = 0; j < n; ++j) {
      if (j == i) continue;
      cand.push_back({distance(points[i].position, points[j].position), static_cast<int>(j)});
    }
    auto by_dist = [](const Neighbor& a, const Neighbor& b) { return a.dist < b.dist || (a.dist == b.dist && a.index < b.index); };
    std::partial_sort(cand.begin(), cand.begin() + 6, cand.end(), by_dist);
    std::copy(cand.begin(), cand.begin() + 6, knn[i].begin());
    nearest[i] = cand[0].dist;
  }
  std::vector<double> sorted_nearest = nearest;
  std::nth_element(sorted_nearest.begin(), sorted_nearest.begin() + static_cast<std::ptrdiff_t>(n / 2), sorted_nearest.end());
  const double median = sorted_nearest[n / 2];
  if (!(median > 0.0)) fail(ErrorKind::Degenerate, "group: coincident points");

  std::vector<ObservedWindow> out;
  for (std::size_t i = 0; i < n; ++i) {
    const auto& nb = knn[i];
    const bool sane = std::all_of(nb.begin(), nb.end(), [&](const Neighbor& m) {
      return m.dist >= cfg.ratio_lo * median && m.dist <= cfg.ratio_hi * median;
    });
    if (!sane) continue;
    std::array<std::pair<double, int>, 6> ang{};
    for (std::size_t r = 0; r < 6; ++r) {
      ang[r] = {wrap_degrees(image_angle(points[i].position, points[static_cast<std::size_t>(nb[r].index)].position) -
                             reference_deg),
                nb[r].index};
    }
    // Start at the neighbor angularly closest to the reference, then continue CCW.
    std::size_t start = 0;
    double best = 1e9;
    for (std::size_t r = 0; r < 6; ++r) {
      const double d = std::fabs(angle_diff(ang[r].first, 0.0));
      if (d < best) best = d, start = r;
    }
    const double a0 = ang[start].first;
    for (auto& a : ang) a.first = wrap_degrees(a.first - a0);
    std::sort(ang.begin(), ang.end());
    ObservedWindow w;
    w.center = static_cast<int>(i);
    w.code.center = points[i].color_class;
    for (std::size_t r = 0; r < 6; ++r) {
      w.ring[r] = ang[r].second;
      w.code.ring[r] = points[static_cast<std::size_t>(ang[r].second)].color_class;
    }
    out.push_back(w);
  }
  return out;
}

double lattice_orientation(std::span<const LabeledPoint> points, std::span<const ObservedWindow> windows) {
  // Six-fold symmetric average: each ring vector contributes exp(6i*phi).
  double sx = 0.0, sy = 0.0;
  for (const auto& w : windows) {
    for (int r : w.ring) {
      const double phi = deg2rad(image_angle(points[static_cast<std::size_t>(w.center)].position,
                                             points[static_cast<std::size_t>(r)].position));
      sx += std::cos(6.0 * phi);
      sy += std::sin(6.0 * phi);
    }
  }
  if (sx == 0.0 && sy == 0.0) return 0.0;
  double ref = rad2deg(std::atan2(sy, sx)) / 6.0; // (-30, 30]
  if (ref <= -30.0) ref += 60.0;
  return ref;
}

namespace {

// Grid coordinate implied for ring slot i of a window placed at `center` under hypothesis k.
AxialCoord ring_coord(AxialCoord center, int slot, int k) {
  return center + kHexDirections[static_cast<std::size_t>(((slot - k) % 6 + 6) % 6)];
}

struct Placed {
  bool hit = false;
  AxialCoord center;
};

// Grid coordinate the placed window assigns to a point, if the point belongs to it.
std::optional<AxialCoord> implied(const ObservedWindow& w, const Placed& pl, int k, int point) {
  if (w.center == point) return pl.center;
  for (int s = 0; s < 6; ++s)
    if (w.ring[static_cast<std::size_t>(s)] == point) return ring_coord(pl.center, s, k);
  return std::nullopt;
}

bool agree(const ObservedWindow& a, const Placed& pa, const ObservedWindow& b, const Placed& pb, int k) {
  auto check = [&](int point) {
    const auto ca = implied(a, pa, k, point);
    const auto cb = implied(b, pb, k, point);
    return !ca || !cb || *ca == *cb;
  };
  if (!check(a.center)) return false;
  for (int p : a.ring)
    if (!check(p)) return false;
  return true;
}

} // namespace

CorrespondenceSet resolve(std::span<const LabeledPoint> points, std::span<const ObservedWindow> windows,
                          const LookupTable& lut, const MatchConfig& cfg) {
  validate(cfg);
  if (windows.empty()) fail(ErrorKind::Insufficient, "resolve: no windows");
  const int colors = lut.colors();
  std::vector<std::uint32_t> codes(windows.size());
  for (std::size_t i = 0; i < windows.size(); ++i) {
    const auto& wc = windows[i].code;
    bool in_range = wc.center < colors;
    for (int d : wc.ring) in_range = in_range && d < colors;
    codes[i] = in_range ? encode(wc, colors) : code_space(colors); // out-of-range never hits
  }
  // Window index by center point, for adjacency.
  std::vector<int> window_of(points.size(), -1);
  for (std::size_t i = 0; i < windows.size(); ++i) window_of[static_cast<std::size_t>(windows[i].center)] = static_cast<int>(i);

  CorrespondenceSet cs;
  std::array<std::vector<Placed>, 6> placed;
  std::array<std::vector<bool>, 6> consistent;
  for (int k = 0; k < 6; ++k) {
    auto& pl = placed[static_cast<std::size_t>(k)];
    pl.assign(windows.size(), {});
    for (std::size_t i = 0; i < windows.size(); ++i) {
      if (const auto c = lut.find(codes[i], k)) {
        pl[i] = {true, *c};
        ++cs.raw_hits[static_cast<std::size_t>(k)];
      }
    }
    auto& cons = consistent[static_cast<std::size_t>(k)];
    cons.assign(windows.size(), false);
    for (std::size_t i = 0; i < windows.size(); ++i) {
      if (!pl[i].hit) continue;
      for (int r : windows[i].ring) {
        const int j = window_of[static_cast<std::size_t>(r)];
        if (j < 0 || !pl[static_cast<std::size_t>(j)].hit) continue;
        if (agree(windows[i], pl[i], windows[static_cast<std::size_t>(j)], pl[static_cast<std::size_t>(j)], k)) {
          cons[i] = true;
          break;
        }
      }
      if (cons[i]) ++cs.scores[static_cast<std::size_t>(k)];
    }
  }
  if (std::all_of(cs.raw_hits.begin(), cs.raw_hits.end(), [](int h) { return h == 0; }))
    fail(ErrorKind::NoMatch, "resolve: no window matches the lookup table under any rotation");

  int best = 0;
  for (int k = 1; k < 6; ++k)
    if (cs.scores[static_cast<std::size_t>(k)] > cs.scores[static_cast<std::size_t>(best)]) best = k;
  cs.rotation = best;

  // Point -> (coord -> supporting windows).
  std::vector<std::map<AxialCoord, int>> votes(points.size());
  const auto& pl = placed[static_cast<std::size_t>(best)];
  const auto& cons = consistent[static_cast<std::size_t>(best)];
  for (std::size_t i = 0; i < windows.size(); ++i) {
    if (!cons[i]) continue;
    const auto& w = windows[i];
    ++votes[static_cast<std::size_t>(w.center)][pl[i].center];
    for (int s = 0; s < 6; ++s) ++votes[static_cast<std::size_t>(w.ring[static_cast<std::size_t>(s)])][ring_coord(pl[i].center, s, best)];
  }

  struct Claim {
    int point;
    int support;
  };
  std::map<AxialCoord, std::vector<Claim>> claims;
  for (std::size_t p = 0; p < points.size(); ++p) {
    if (votes[p].empty()) continue;
    int top = 0, count_top = 0;
    AxialCoord top_coord;
    for (const auto& [c, v] : votes[p]) {
      if (v > top) top = v, count_top = 1, top_coord = c;
      else if (v == top) ++count_top;
    }
    if (count_top == 1) claims[top_coord].push_back({static_cast<int>(p), top});
  }
  for (const auto& [coord, list] : claims) {
    int top = 0, count_top = 0, who = -1;
    for (const Claim& c : list) {
      if (c.support > top) top = c.support, count_top = 1, who = c.point;
      else if (c.support == top) ++count_top;
    }
    if (count_top == 1) cs.pairs.push_back({who, coord, points[static_cast<std::size_t>(who)].position});
  }
  std::sort(cs.pairs.begin(), cs.pairs.end(), [](const Correspondence& a, const Correspondence& b) { return a.point < b.point; });

  if (cs.pairs.size() >= 2) {
    std::vector<Vec2> rest, obs;
    for (const auto& c : cs.pairs) {
      rest.push_back(point_position(c.coord, 1.0));
      obs.push_back(image_to_math(c.image));
    }
    cs.residual_px = fit_similarity(rest, obs).rms;
  }
  cs.insufficient = static_cast<int>(cs.pairs.size()) < cfg.min_matches;
  return cs;
}

MatchResult match(std::span<const LabeledPoint> points, const LookupTable& lut, const MatchConfig& cfg) {
  MatchResult r;
  r.windows = group(points, cfg, 0.0);
  if (cfg.align_to_lattice && !r.windows.empty()) {
    r.reference_deg = lattice_orientation(points, r.windows);
    if (r.reference_deg != 0.0) r.windows = group(points, cfg, r.reference_deg);
  }
  r.correspondences = resolve(points, r.windows, lut, cfg);
  return r;
}

Identification identify_pattern(std::span<const LabeledPoint> points, std::span<const ObservedWindow> windows,
                                std::span<const RegisteredPattern> registered, const MatchConfig& cfg) {
  if (registered.empty()) fail(ErrorKind::Domain, "identify_pattern: no registered patterns");
  Identification best;
  bool have = false;
  for (std::size_t i = 0; i < registered.size(); ++i) {
    if (!registered[i].table) fail(ErrorKind::Domain, "identify_pattern: missing lookup table");
    CorrespondenceSet cs;
    try {
      cs = resolve(points, windows, *registered[i].table, cfg);
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::NoMatch) throw;
    }
    best.scores.push_back(static_cast<int>(cs.match_count()));
    if (!have || cs.match_count() > best.correspondences.match_count()) {
      have = true;
      best.index = i;
      best.id = registered[i].id;
      best.correspondences = std::move(cs);
    }
  }
  if (static_cast<int>(best.correspondences.match_count()) < cfg.min_matches)
    fail(ErrorKind::Insufficient, "identify_pattern: no registered pattern reaches " + std::to_string(cfg.min_matches) +
                                      " matched points");
  return best;
}

} // namespace lensleech
