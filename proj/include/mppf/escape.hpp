#pragma once

// Local-minimum detection inside the critical zone and the vertical escape
// maneuver that follows it.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <deque>
#include <numeric>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>

#include "mppf/geometry.hpp"
#include "mppf/potentials.hpp"

namespace mppf {

struct EscapeConfig {
  double vertical_speed = 0.18;  // [m/s]
  std::size_t window = 10;       // W [steps]
  double progress_epsilon = 0.5; // [m] over the whole window
  double surface_margin = 3.0;   // [m]
  double residual_decay = 5.0;   // horizontal speed time constant [s]
  double step_radius = 0.5;      // r = V_UG dt used in the critical zone [m]
  double cz_scale = 1.0;         // multiplies the critical-zone radius

  bool valid() const {
    return vertical_speed > 0.0 && window > 0 && progress_epsilon > 0.0 &&
           surface_margin > 0.0 && residual_decay > 0.0 && step_radius > 0.0 &&
           cz_scale > 0.0;
  }
};

/// R_CZ = R_obs + R_UG + 10 r.
inline double critical_zone_radius(double obstacle_radius, double glider_radius,
                                   const EscapeConfig& c) {
  return c.cz_scale * (obstacle_radius + glider_radius + 10.0 * c.step_radius);
}

/// True if any point lies inside the critical zone of its own obstacle.
inline bool obstacle_in_critical_zone(const Vec3& position,
                                      std::span<const ObstaclePoint> points,
                                      double glider_radius, const EscapeConfig& c) {
  for (const auto& o : points) {
    if (distance(position, o.position) <=
        critical_zone_radius(o.obstacle_radius, glider_radius, c)) {
      return true;
    }
  }
  return false;
}

/// Rolling record of per-step progress toward the active waypoint.
class ProgressHistory {
 public:
  explicit ProgressHistory(std::size_t capacity = 10) : capacity_(capacity) {}

  void push(double progress) {
    samples_.push_back(progress);
    if (samples_.size() > capacity_) samples_.pop_front();
  }
  void clear() { samples_.clear(); }

  std::size_t size() const { return samples_.size(); }
  std::size_t capacity() const { return capacity_; }
  bool full() const { return samples_.size() >= capacity_; }

  double sum_last(std::size_t n) const {
    n = std::min(n, samples_.size());
    return std::accumulate(samples_.end() - static_cast<std::ptrdiff_t>(n), samples_.end(), 0.0);
  }

 private:
  std::size_t capacity_;
  std::deque<double> samples_;
};

inline bool detect_local_minimum(const ProgressHistory& history, bool obstacles_in_cz,
                                 const EscapeConfig& c) {
  if (history.size() < c.window) return false;
  return history.sum_last(c.window) < c.progress_epsilon && obstacles_in_cz;
}

enum class EscapeMode { inactive, ascending, descending };

class Trapped : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

namespace detail {

/// Whether an obstacle point sits in the vertical column above (dir = -1)
/// or below (dir = +1) the glider.
inline bool column_blocked(const Vec3& p, std::span<const ObstaclePoint> points,
                           double glider_radius, double dir) {
  for (const auto& o : points) {
    const double along = (o.position.z - p.z) * dir;
    if (along <= 0.0) continue;
    const double lateral = std::hypot(o.position.x - p.x, o.position.y - p.y);
    if (lateral <= glider_radius + 1.0 && along <= o.obstacle_radius + glider_radius + 2.0) {
      return true;
    }
  }
  return false;
}

}  // namespace detail

/// Up is preferred; down is used near the surface or under an overhead
/// obstacle. Throws Trapped if neither way is open.
inline EscapeMode choose_direction(const Vec3& position, std::span<const ObstaclePoint> points,
                                   double glider_radius, const EscapeConfig& c, double d_max) {
  const bool up_blocked = position.z < c.surface_margin ||
                          detail::column_blocked(position, points, glider_radius, -1.0);
  if (!up_blocked) return EscapeMode::ascending;
  const bool down_blocked = position.z > d_max - c.surface_margin ||
                            detail::column_blocked(position, points, glider_radius, 1.0);
  if (!down_blocked) return EscapeMode::descending;
  throw Trapped("no vertical clearance at depth " + std::to_string(position.z));
}

struct EscapeState {
  EscapeMode mode = EscapeMode::inactive;
  Vec3 origin;
  Vec3 residual_velocity;  // horizontal velocity when the maneuver started
  double elapsed = 0.0;
};

inline EscapeState begin_escape(EscapeMode mode, const GliderState& g) {
  EscapeState s;
  s.mode = mode;
  s.origin = g.position;
  const Vec3 v = spherical_to_cartesian(g.attitude.psi, g.attitude.theta, g.speed);
  s.residual_velocity = {v.x, v.y, 0.0};
  return s;
}

/// One step of the vertical maneuver: constant vertical speed, exponentially
/// decaying residual horizontal speed, plus the local current. The caller
/// supplies the current at the glider's position.
inline std::pair<GliderState, EscapeState> escape_step(EscapeState s, GliderState g, double dt,
                                                       const EscapeConfig& c, double d_max,
                                                       const Vec3& current = {}) {
  if (s.mode == EscapeMode::inactive) return {g, s};
  const double tau = c.residual_decay;
  const double decay = std::exp(-s.elapsed / tau) - std::exp(-(s.elapsed + dt) / tau);
  const Vec3 drift = s.residual_velocity * (tau * decay);
  const double sign = s.mode == EscapeMode::ascending ? -1.0 : 1.0;

  Vec3 p = g.position + drift + current * dt;
  p.z = g.position.z + sign * c.vertical_speed * dt;
  if (p.z > d_max) throw Trapped("escape descended below d_max");
  p.z = std::max(p.z, 0.0);

  g.position = p;
  g.attitude.theta = 0.0;
  g.speed = norm(s.residual_velocity) * std::exp(-(s.elapsed + dt) / tau);
  g.mode = PlannerMode::escape;
  s.elapsed += dt;
  return {g, s};
}

/// The maneuver ends once the critical zone is clear again, or when an
/// ascent has reached the surface and can go no further.
inline bool escape_finished(const EscapeState& s, const GliderState& g, bool obstacles_in_cz) {
  if (s.mode == EscapeMode::inactive) return true;
  if (!obstacles_in_cz) return true;
  return s.mode == EscapeMode::ascending && g.position.z <= 0.0;
}

}  // namespace mppf
