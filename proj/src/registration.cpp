// SPDX-License-Identifier: Apache-2.0
#include "lensleech/registration.hpp"

#include <cmath>

#include "lensleech/error.hpp"

namespace lensleech {

namespace {

struct Moments {
  Vec2 mean_from, mean_to;
  double sum_dot = 0.0, sum_cross = 0.0, ss_from = 0.0, ss_to = 0.0;
};

Moments moments(std::span<const Vec2> from, std::span<const Vec2> to) {
  if (from.size() != to.size()) fail(ErrorKind::Domain, "registration: point sets differ in size");
  if (from.size() < 2) fail(ErrorKind::Domain, "registration: need at least two pairs");
  Moments m;
  for (std::size_t i = 0; i < from.size(); ++i) {
    m.mean_from += from[i];
    m.mean_to += to[i];
  }
  m.mean_from = m.mean_from / static_cast<double>(from.size());
  m.mean_to = m.mean_to / static_cast<double>(to.size());
  for (std::size_t i = 0; i < from.size(); ++i) {
    const Vec2 p = from[i] - m.mean_from;
    const Vec2 q = to[i] - m.mean_to;
    m.sum_dot += dot(p, q);
    m.sum_cross += cross(p, q);
    m.ss_from += dot(p, p);
    m.ss_to += dot(q, q);
  }
  if (!(m.ss_from > 0.0) || !(m.ss_to > 0.0)) fail(ErrorKind::Degenerate, "registration: all points coincide");
  return m;
}

} // namespace

double kabsch_rotation(std::span<const Vec2> from, std::span<const Vec2> to) {
  const Moments m = moments(from, to);
  return wrap_degrees(rad2deg(std::atan2(m.sum_cross, m.sum_dot)));
}

Similarity fit_similarity(std::span<const Vec2> from, std::span<const Vec2> to) {
  const Moments m = moments(from, to);
  Similarity s;
  s.rotation_deg = wrap_degrees(rad2deg(std::atan2(m.sum_cross, m.sum_dot)));
  s.scale = std::hypot(m.sum_dot, m.sum_cross) / m.ss_from;
  s.translation = m.mean_to - rotated(m.mean_from, s.rotation_deg) * s.scale;
  double ss = 0.0;
  for (std::size_t i = 0; i < from.size(); ++i) {
    const Vec2 r = s.apply(from[i]) - to[i];
    ss += dot(r, r);
  }
  s.rms = std::sqrt(ss / static_cast<double>(from.size()));
  return s;
}

} // namespace lensleech
