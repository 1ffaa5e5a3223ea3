#pragma once

// Sawtooth pre-planning between a start and an end point, and waypoint
// progression along the resulting plan.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <vector>

#include "mppf/geometry.hpp"

namespace mppf {

/// How the horizontal stride of a full tooth is derived from d_max.
enum class StrideFormula {
  tangent,  // 2 d_max / tan(theta_max / 2)
  literal,  // 2 d_max / (theta_max / 2), angle in radians
};

struct SawtoothParams {
  double d_max = 30.0;
  double z_max = 50.0;  // deepest detectable depth of the water area
  double z_t = 0.0;     // safety offset below which midpoints stay
  double theta_max = deg2rad(45.0);
  double arrival_radius = 1.0;
  StrideFormula stride = StrideFormula::tangent;

  bool valid() const {
    return d_max > 0.0 && z_t >= 0.0 && z_t < z_max && theta_max > 0.0 &&
           theta_max <= kPi / 2.0 && arrival_radius > 0.0;
  }
};

/// Depths closer than this are treated as equal for case dispatch [m].
inline constexpr double kSameDepthTolerance = 1e-6;

class DegeneratePlan : public std::invalid_argument {
 public:
  DegeneratePlan() : std::invalid_argument("start and end points coincide") {}
};

struct SegmentAngles {
  double theta_d = 0.0;
  double z_d = 0.0;
};

inline SegmentAngles segment_angles(const Vec3& from, const Vec3& to) {
  const double horiz = std::hypot(to.x - from.x, to.y - from.y);
  const double rise = from.z - to.z;
  SegmentAngles out;
  out.z_d = to.z;
  if (horiz == 0.0) {
    out.theta_d = rise > 0.0 ? kPi / 2.0 : (rise < 0.0 ? -kPi / 2.0 : 0.0);
  } else {
    out.theta_d = std::atan(rise / horiz);
  }
  return out;
}

enum class SawtoothCase { different_depths = 1, single_midpoint = 2, multi_tooth = 3 };

struct WaypointPlan {
  Vec3 origin;
  std::vector<Vec3> waypoints;
  std::vector<SegmentAngles> segments;  // segments[k] ends at waypoints[k]
  std::size_t active_index = 0;
  double arrival_radius = 1.0;
  SawtoothCase kind = SawtoothCase::different_depths;

  bool complete() const { return active_index >= waypoints.size(); }
  const Vec3& active() const { return waypoints[std::min(active_index, waypoints.size() - 1)]; }
  const Vec3& segment_start() const {
    return active_index == 0 ? origin : waypoints[std::min(active_index, waypoints.size()) - 1];
  }
};

inline double stride_length(const SawtoothParams& p) {
  const double half = 0.5 * p.theta_max;
  return p.stride == StrideFormula::tangent ? 2.0 * p.d_max / std::tan(half)
                                            : 2.0 * p.d_max / half;
}

inline Vec3 tooth_midpoint(const Vec3& a, const Vec3& b, double depth) {
  return {0.5 * (a.x + b.x), 0.5 * (a.y + b.y), depth};
}

inline SawtoothCase classify(const Vec3& q_s, const Vec3& q_e, const SawtoothParams& p) {
  if (std::abs(q_s.z - q_e.z) > kSameDepthTolerance) return SawtoothCase::different_depths;
  return p.z_max <= p.d_max ? SawtoothCase::single_midpoint : SawtoothCase::multi_tooth;
}

inline WaypointPlan plan_sawtooth(const Vec3& q_s, const Vec3& q_e, const SawtoothParams& p) {
  if (q_s == q_e) throw DegeneratePlan{};
  WaypointPlan plan;
  plan.origin = q_s;
  plan.arrival_radius = p.arrival_radius;
  plan.kind = classify(q_s, q_e, p);
  const double floor = std::min(p.d_max, p.z_max);

  switch (plan.kind) {
    case SawtoothCase::different_depths:
      plan.waypoints = {q_e};
      break;
    case SawtoothCase::single_midpoint:
      plan.waypoints = {tooth_midpoint(q_s, q_e, std::min(p.z_max - p.z_t, p.d_max)), q_e};
      break;
    case SawtoothCase::multi_tooth: {
      const double h = stride_length(p);
      const Vec3 dir = normalized(q_e - q_s);
      const double tooth_depth = std::max(0.0, floor - p.z_t);
      Vec3 current = q_s;
      int strides = 0;
      while (distance(current, q_e) >= h) {
        ++strides;
        const Vec3 next = q_s + dir * (h * strides);
        plan.waypoints.push_back(tooth_midpoint(current, next, tooth_depth));
        plan.waypoints.push_back(next);
        current = next;
      }
      const double rest = distance(current, q_e);
      if (rest <= kSameDepthTolerance && !plan.waypoints.empty()) {
        plan.waypoints.back() = q_e;
      } else {
        const double depth =
            std::min(q_e.z + std::tan(0.5 * p.theta_max) * rest / 2.0, p.d_max);
        plan.waypoints.push_back(tooth_midpoint(current, q_e, depth));
        plan.waypoints.push_back(q_e);
      }
      break;
    }
  }

  Vec3 from = q_s;
  for (const Vec3& w : plan.waypoints) {
    plan.segments.push_back(segment_angles(from, w));
    from = w;
  }
  return plan;
}

/// Moves to the next waypoint once the active one is within arrival radius.
inline WaypointPlan advance(WaypointPlan plan, const Vec3& position) {
  if (!plan.complete() && distance(position, plan.active()) <= plan.arrival_radius) {
    ++plan.active_index;
  }
  return plan;
}

inline WaypointPlan replan_from(const Vec3& position, const Vec3& q_e, const SawtoothParams& p) {
  return plan_sawtooth(position, q_e, p);
}

/// Distance from `p` to the segment [a, b].
inline double distance_to_segment(const Vec3& p, const Vec3& a, const Vec3& b) {
  const Vec3 ab = b - a;
  const double len2 = dot(ab, ab);
  if (len2 == 0.0) return distance(p, a);
  const double t = std::clamp(dot(p - a, ab) / len2, 0.0, 1.0);
  return distance(p, a + ab * t);
}

inline double cross_track_error(const WaypointPlan& plan, const Vec3& position) {
  if (plan.complete()) return 0.0;
  return distance_to_segment(position, plan.segment_start(), plan.active());
}

}  // namespace mppf
