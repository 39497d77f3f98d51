#include "mplab/geometry.hpp"

#include <algorithm>
#include <cmath>

namespace mplab {

const char* to_string(ConeVerdict::Value v) {
  switch (v) {
    case ConeVerdict::Value::member:
      return "member";
    case ConeVerdict::Value::non_member:
      return "non_member";
    case ConeVerdict::Value::inconclusive:
      return "inconclusive";
  }
  return "?";
}

namespace {

ConvexSet slice_before_end(const ConvexFamily& family, double t) {
  const auto& h = family.horizon();
  if (!h.contains(t)) throw DomainError("cone test time lies outside the horizon");
  if (t >= h.end - 1e-12 * (1.0 + std::abs(h.end)))
    throw DomainError("cone test at the horizon end: no forward direction exists");
  return family.at(t);
}

}  // namespace

ForwardConeProbe::ForwardConeProbe(const ConvexFamily& family, double t)
    : t_(t), now_(slice_before_end(family, t)) {
  const double s_max = std::min(kMaxStep, family.horizon().end - t);
  steps_.reserve(kLastStep + 1);
  ahead_.reserve(kLastStep + 1);
  for (int k = 0; k <= kLastStep; ++k) {
    const double s = std::ldexp(s_max, -k);
    steps_.push_back(s);
    ahead_.push_back(family.at(t + s));
  }
  const double speed = family.is_time_constant() ? 0.0 : hausdorff_distance(now_, ahead_.front()) / s_max;
  c_lin_ = 10.0 * std::max(1.0, speed);
}

ConeVerdict ForwardConeProbe::classify(const Vec& v, const Vec& W) const {
  if (v.size() != now_.dim() || W.size() != now_.dim()) throw DomainError("cone test: dimension mismatch");
  if (now_.distance(v) > now_.active_tolerance()) throw DomainError("cone test point is not on the space-time track");

  ConeVerdict out;
  out.steps = steps_;
  out.quotients.reserve(steps_.size());
  for (std::size_t k = 0; k < steps_.size(); ++k) {
    const Vec moved = v + steps_[k] * W;
    out.quotients.push_back(ahead_[k].distance(moved) / steps_[k]);
  }
  out.member_threshold = std::max(kEpsAbs, c_lin_ * steps_.back());
  const bool member = out.quotients.back() <= out.member_threshold;
  const bool separated = std::all_of(out.quotients.begin() + kNonMemberFrom, out.quotients.end(),
                                     [](double q) { return q >= kDeltaMin; });
  if (member && !separated) {
    out.value = ConeVerdict::Value::member;
  } else if (separated && !member) {
    out.value = ConeVerdict::Value::non_member;
  } else {
    out.value = ConeVerdict::Value::inconclusive;
  }
  return out;
}

ConeVerdict cone_member_spacetime(const SpaceTimeTrack& track, const Vec& v, double t, const Vec& W) {
  return ForwardConeProbe(track.main(), t).classify(v, W);
}

}  // namespace mplab
