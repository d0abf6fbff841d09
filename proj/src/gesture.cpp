// SPDX-License-Identifier: Apache-2.0
#include "lensleech/gesture.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_map>

#include "lensleech/error.hpp"

namespace lensleech {

namespace {

void require_sufficient(const CorrespondenceSet& cs, const char* who) {
  if (cs.insufficient) {
    fail(ErrorKind::Insufficient, std::string(who) + ": correspondence set has " + std::to_string(cs.match_count()) +
                                      " pairs, below the floor");
  }
}

struct Paired {
  std::vector<Vec2> rest; // grid pitch units
  std::vector<Vec2> obs;  // image math coordinates
};

Paired paired(const CorrespondenceSet& cs) {
  Paired p;
  p.rest.reserve(cs.pairs.size());
  p.obs.reserve(cs.pairs.size());
  for (const auto& c : cs.pairs) {
    p.rest.push_back(point_position(c.coord, 1.0));
    p.obs.push_back(image_to_math(c.image));
  }
  return p;
}

Vec2 mean(const std::vector<Vec2>& v) {
  Vec2 m;
  for (Vec2 p : v) m += p;
  return m / static_cast<double>(v.size());
}

} // namespace

PoseReference reference_from(const CorrespondenceSet& cs) {
  require_sufficient(cs, "reference_from");
  const Paired p = paired(cs);
  const Similarity s = fit_similarity(p.rest, p.obs);
  if (!(s.scale > 0.0)) fail(ErrorKind::Degenerate, "reference_from: zero scale");
  return {s.scale, s.translation, s.rotation_deg};
}

PoseEstimate estimate_pose(const CorrespondenceSet& cs, const PoseReference& ref) {
  require_sufficient(cs, "estimate_pose");
  const Paired p = paired(cs);
  const Similarity s = fit_similarity(p.rest, p.obs);
  PoseEstimate e;
  e.rotation_deg = kabsch_rotation(p.rest, p.obs);
  const Vec2 expected = ref.origin + rotated(mean(p.rest), e.rotation_deg) * ref.scale_px;
  e.translation = (mean(p.obs) - expected) / ref.scale_px;
  e.scale_residual = s.rms / ref.scale_px;
  return e;
}

const LocalStrain* StrainSummary::peak() const {
  const LocalStrain* best = nullptr;
  for (const auto& l : local)
    if (!best || l.strain > best->strain) best = &l;
  return best;
}

StrainSummary strain(const CorrespondenceSet& cs, double scale_px) {
  require_sufficient(cs, "strain");
  if (!(scale_px > 0.0)) fail(ErrorKind::Domain, "strain: scale must be positive");
  const Paired p = paired(cs);
  StrainSummary out;

  std::unordered_map<AxialCoord, Vec2, AxialCoordHash> at;
  for (std::size_t i = 0; i < cs.pairs.size(); ++i) at.emplace(cs.pairs[i].coord, p.obs[i]);
  for (std::size_t i = 0; i < cs.pairs.size(); ++i) {
    double sum = 0.0;
    int n = 0;
    for (const auto& d : kHexDirections) {
      const auto it = at.find(cs.pairs[i].coord + d);
      if (it == at.end()) continue;
      sum += distance(p.obs[i], it->second);
      ++n;
    }
    if (n < kMinStrainNeighbors) continue;
    out.local.push_back({cs.pairs[i].coord, sum / n / scale_px, n});
  }
  std::sort(out.local.begin(), out.local.end(), [](const LocalStrain& a, const LocalStrain& b) { return a.coord < b.coord; });

  out.rotation_deg = kabsch_rotation(p.rest, p.obs);
  const Vec2 mr = mean(p.rest), mo = mean(p.obs);
  // Least-squares A with (obs - mo) rotated back ~= A (rest - mr).
  double pxx = 0, pxy = 0, pyy = 0, qxpx = 0, qxpy = 0, qypx = 0, qypy = 0;
  for (std::size_t i = 0; i < p.rest.size(); ++i) {
    const Vec2 a = p.rest[i] - mr;
    const Vec2 b = rotated(p.obs[i] - mo, -out.rotation_deg);
    pxx += a.x * a.x;
    pxy += a.x * a.y;
    pyy += a.y * a.y;
    qxpx += b.x * a.x;
    qxpy += b.x * a.y;
    qypx += b.y * a.x;
    qypy += b.y * a.y;
  }
  const double det = pxx * pyy - pxy * pxy;
  if (!(std::fabs(det) > 1e-12 * std::max(1.0, pxx * pyy))) fail(ErrorKind::Degenerate, "strain: rest points are collinear");
  const double ixx = pyy / det, ixy = -pxy / det, iyy = pxx / det;
  const double a00 = (qxpx * ixx + qxpy * ixy) / scale_px;
  const double a01 = (qxpx * ixy + qxpy * iyy) / scale_px;
  const double a10 = (qypx * ixx + qypy * ixy) / scale_px;
  const double a11 = (qypx * ixy + qypy * iyy) / scale_px;
  const double off = 0.5 * (a01 + a10);
  out.tensor = {a00, off, off, a11};

  const double m = 0.5 * (a00 + a11);
  const double h = std::hypot(0.5 * (a00 - a11), off);
  out.major_stretch = m + h;
  out.minor_stretch = m - h;
  const double major_axis = 0.5 * rad2deg(std::atan2(2.0 * off, a00 - a11));
  out.minor_axis_deg = std::fmod(wrap_degrees(major_axis + 90.0), 180.0);
  return out;
}

void validate(const GestureThresholds& t) {
  require(t.press_off > 1.0 && t.press_on > t.press_off, "gesture: need press_on > press_off > 1");
  require(t.push_off > 0.0 && t.push_on > t.push_off, "gesture: need push_on > push_off > 0");
  require(t.rotate_step_deg > 0.0 && t.rotate_step_deg < 60.0, "gesture: rotate_step_deg must lie in (0, 60)");
  require(t.squeeze_off < 1.0 && t.squeeze_on < t.squeeze_off && t.squeeze_on > 0.0,
          "gesture: need 0 < squeeze_on < squeeze_off < 1");
}

std::string to_string(GestureKind k) {
  switch (k) {
  case GestureKind::Press: return "press";
  case GestureKind::Push: return "push";
  case GestureKind::Rotate: return "rotate";
  case GestureKind::Squeeze: return "squeeze";
  }
  return "?";
}

std::string to_string(GesturePhase p) {
  switch (p) {
  case GesturePhase::Onset: return "onset";
  case GesturePhase::Release: return "release";
  case GesturePhase::Delta: return "delta";
  }
  return "?";
}

Tracker::Tracker(GestureThresholds t) : thresholds_(t) { validate(thresholds_); }

std::vector<GestureEvent> Tracker::step(const CorrespondenceSet& cs, std::int64_t frame) {
  if (last_frame_ && frame <= *last_frame_) {
    fail(ErrorKind::Sequencing, "tracker: frame " + std::to_string(frame) + " does not follow frame " +
                                    std::to_string(*last_frame_));
  }
  last_frame_ = frame;
  std::vector<GestureEvent> events;
  if (cs.insufficient) return events;

  if (!reference_) {
    reference_ = reference_from(cs);
    last_rotation_deg_ = reference_->rotation_deg;
    last_pose_ = estimate_pose(cs, *reference_);
    return events;
  }

  const PoseEstimate pose = estimate_pose(cs, *reference_);
  cumulative_deg_ += angle_diff(pose.rotation_deg, last_rotation_deg_);
  last_rotation_deg_ = pose.rotation_deg;
  last_pose_ = pose;
  const StrainSummary st = strain(cs, reference_->scale_px);

  auto emit = [&](GestureKind k, GesturePhase ph, double magnitude) -> GestureEvent& {
    GestureEvent e;
    e.frame = frame;
    e.kind = k;
    e.phase = ph;
    e.magnitude = std::max(0.0, magnitude);
    e.cumulative_rotation_deg = cumulative_deg_;
    events.push_back(e);
    return events.back();
  };
  const auto& t = thresholds_;

  if (const LocalStrain* pk = st.peak()) {
    if (!pressed_ && pk->strain > t.press_on) {
      pressed_ = true;
      press_location_ = pk->coord;
      emit(GestureKind::Press, GesturePhase::Onset, pk->strain - 1.0).location = pk->coord;
    } else if (pressed_ && pk->strain < t.press_off) {
      pressed_ = false;
      // The peak has dissolved into noise by now; report where the press was.
      emit(GestureKind::Press, GesturePhase::Release, pk->strain - 1.0).location = press_location_;
    }
  }

  const double offset = norm(pose.translation);
  if (!pushed_ && offset > t.push_on) {
    pushed_ = true;
    emit(GestureKind::Push, GesturePhase::Onset, offset).direction = pose.translation / offset;
  } else if (pushed_ && offset < t.push_off) {
    pushed_ = false;
    auto& e = emit(GestureKind::Push, GesturePhase::Release, offset);
    if (offset > 0.0) e.direction = pose.translation / offset;
  }

  const double delta = cumulative_deg_ - emitted_deg_;
  if (std::fabs(delta) > t.rotate_step_deg) {
    emitted_deg_ = cumulative_deg_;
    emit(GestureKind::Rotate, GesturePhase::Delta, std::fabs(delta)).direction = Vec2{delta > 0.0 ? 1.0 : -1.0, 0.0};
  }

  auto squeeze_event = [&](GesturePhase ph) {
    auto& e = emit(GestureKind::Squeeze, ph, 1.0 - st.minor_stretch);
    e.axis_deg = st.minor_axis_deg;
    e.direction = rotated({1.0, 0.0}, st.minor_axis_deg);
  };
  if (!squeezed_ && st.minor_stretch < t.squeeze_on) {
    squeezed_ = true;
    squeeze_event(GesturePhase::Onset);
  } else if (squeezed_ && st.minor_stretch > t.squeeze_off) {
    squeezed_ = false;
    squeeze_event(GesturePhase::Release);
  }
  return events;
}

} // namespace lensleech
