#pragma once

// World model: spherical and vertical-cylinder obstacles, the analytic
// vortex current, idealized sonar sensing and the kinematic integrator.

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <map>
#include <optional>
#include <vector>

#include "mppf/geometry.hpp"
#include "mppf/potentials.hpp"

namespace mppf {

enum class ObstacleShape { sphere, vertical_cylinder };

struct Obstacle {
  ObstacleShape shape = ObstacleShape::sphere;
  Vec3 center;  // cylinder: axis passes through (center.x, center.y)
  double radius = 1.0;
  Vec3 velocity;
};

/// Distance from `p` to the obstacle surface; negative inside.
inline double surface_distance(const Obstacle& o, const Vec3& p) {
  if (o.shape == ObstacleShape::vertical_cylinder) {
    return std::hypot(p.x - o.center.x, p.y - o.center.y) - o.radius;
  }
  return distance(p, o.center) - o.radius;
}

/// Nearest point of the obstacle surface to `p`.
inline Vec3 nearest_surface_point(const Obstacle& o, const Vec3& p) {
  if (o.shape == ObstacleShape::vertical_cylinder) {
    Vec3 radial{p.x - o.center.x, p.y - o.center.y, 0.0};
    if (horizontal_norm(radial) == 0.0) radial = {1.0, 0.0, 0.0};
    const Vec3 n = normalized(radial);
    return {o.center.x + o.radius * n.x, o.center.y + o.radius * n.y, p.z};
  }
  Vec3 n = normalized(p - o.center);
  if (norm(n) == 0.0) n = {0.0, 0.0, -1.0};
  return o.center + n * o.radius;
}

/// Cellular vortex current, attenuated linearly to zero at z_max.
struct VortexFlow {
  double amplitude = 0.1;   // A [m/s]
  double cell_size = 50.0;  // s [m]
  double z_max = 50.0;

  bool valid() const { return amplitude >= 0.0 && cell_size > 0.0 && z_max > 0.0; }
};

inline Vec3 flow_velocity(const VortexFlow& f, const Vec3& p) {
  const double k = kPi / f.cell_size;
  const double atten = (f.z_max - p.z) / f.z_max;
  const double a = kPi * f.amplitude * atten;
  return {-a * std::sin(k * p.x) * std::cos(k * p.y),
          a * std::cos(k * p.x) * std::sin(k * p.y), 0.0};
}

struct SonarModel {
  double range = 100.0;
  double horizontal_fov = deg2rad(120.0);
  double vertical_fov = deg2rad(30.0);
  double memory = 20.0;  // how long a contact is tracked after last seen [s]

  bool valid() const {
    return memory >= 0.0 && range > 0.0 && horizontal_fov > 0.0 && horizontal_fov < 2.0 * kPi &&
           vertical_fov > 0.0 && vertical_fov < 2.0 * kPi;
  }
};

struct Bounds {
  Vec3 lo{0.0, 0.0, 0.0};
  Vec3 hi{100.0, 100.0, 50.0};

  bool contains(const Vec3& p) const {
    return p.x >= lo.x && p.x <= hi.x && p.y >= lo.y && p.y <= hi.y && p.z >= lo.z &&
           p.z <= hi.z;
  }
};

struct WorldState {
  GliderState glider;
  std::vector<Obstacle> obstacles;
  std::optional<VortexFlow> flow;
  Bounds bounds;
  double glider_radius = 0.6;
  double time = 0.0;
  bool collision = false;
};

inline Vec3 local_flow(const WorldState& w, const Vec3& p) {
  return w.flow ? flow_velocity(*w.flow, p) : Vec3{};
}

/// Influence distance d_t = 2 (R_obs + R_UG).
inline double influence_distance(double obstacle_radius, double glider_radius) {
  return 2.0 * (obstacle_radius + glider_radius);
}

/// True when any part of the obstacle falls inside the sonar beam. The beam
/// is a bearing/elevation window centred on the glider's heading and glide
/// angle, each half-width widened by the obstacle's angular radius.
inline bool in_sonar_view(const Obstacle& o, const GliderState& g, const SonarModel& s) {
  const Vec3 p = g.position;
  const double gap = surface_distance(o, p);
  if (gap > s.range) return false;
  if (gap <= 0.0) return true;

  Vec3 c = o.center;
  if (o.shape == ObstacleShape::vertical_cylinder) c.z = p.z;
  const Vec3 rel = c - p;
  const double dist = norm(rel);
  const double angular_radius = std::asin(std::min(1.0, o.radius / dist));
  const Attitude dir = cartesian_to_spherical(rel);
  const double bearing = std::abs(wrap_angle(dir.psi - g.attitude.psi));
  if (bearing > 0.5 * s.horizontal_fov + angular_radius) return false;
  if (o.shape == ObstacleShape::vertical_cylinder) return true;
  const double elevation = std::abs(dir.theta - g.attitude.theta);
  return elevation <= 0.5 * s.vertical_fov + angular_radius;
}

inline constexpr std::array<double, 3> kCapOffsets = {-deg2rad(60.0), 0.0, deg2rad(60.0)};

/// 3x3 points on the glider-facing side of one obstacle.
inline void sample_obstacle(const Obstacle& o, std::size_t index, const Vec3& from,
                            double glider_radius, ObstaclePointSet& out) {
  const double d_t = influence_distance(o.radius, glider_radius);
  auto emit = [&](const Vec3& pt) {
    out.push_back(ObstaclePoint{pt, o.velocity, d_t, o.radius, index});
  };

  if (o.shape == ObstacleShape::vertical_cylinder) {
    Vec3 radial{from.x - o.center.x, from.y - o.center.y, 0.0};
    const double base = horizontal_norm(radial) > 0.0 ? std::atan2(radial.y, radial.x) : 0.0;
    for (double dz : {-o.radius, 0.0, o.radius}) {
      const double z = std::max(0.0, from.z + dz);
      for (double a : kCapOffsets) {
        emit({o.center.x + o.radius * std::cos(base + a),
              o.center.y + o.radius * std::sin(base + a), z});
      }
    }
    return;
  }

  Vec3 u = normalized(from - o.center);
  if (norm(u) == 0.0) u = {0.0, 0.0, -1.0};
  Vec3 e1 = cross(Vec3{0.0, 0.0, 1.0}, u);
  if (norm(e1) < 1e-9) e1 = {1.0, 0.0, 0.0};
  e1 = normalized(e1);
  const Vec3 e2 = cross(u, e1);
  for (double b : kCapOffsets) {
    for (double a : kCapOffsets) {
      const Vec3 n = u * (std::cos(a) * std::cos(b)) + e1 * (std::sin(a) * std::cos(b)) +
                     e2 * std::sin(b);
      emit(o.center + normalized(n) * o.radius);
    }
  }
}

/// Surface points of every obstacle the sonar currently sees.
inline ObstaclePointSet sense_obstacles(const WorldState& w, const SonarModel& s) {
  ObstaclePointSet out;
  for (std::size_t i = 0; i < w.obstacles.size(); ++i) {
    if (in_sonar_view(w.obstacles[i], w.glider, s)) {
      sample_obstacle(w.obstacles[i], i, w.glider.position, w.glider_radius, out);
    }
  }
  return out;
}

/// Short-term memory of sonar contacts. A contact seen at time t0 is kept
/// for `horizon` seconds and extrapolated at its sensed velocity. With a
/// zero horizon this reduces to sense_obstacles.
class ContactMemory {
 public:
  explicit ContactMemory(double horizon = 0.0) : horizon_(horizon) {}

  void observe(const WorldState& w, const SonarModel& s) {
    for (std::size_t i = 0; i < w.obstacles.size(); ++i) {
      if (in_sonar_view(w.obstacles[i], w.glider, s)) contacts_[i] = {w.obstacles[i], w.time};
    }
    std::erase_if(contacts_, [&](const auto& kv) { return w.time - kv.second.seen_at > horizon_; });
  }

  ObstaclePointSet points(const WorldState& w) const {
    ObstaclePointSet out;
    for (const auto& [index, c] : contacts_) {
      Obstacle predicted = c.last;
      predicted.center += c.last.velocity * (w.time - c.seen_at);
      sample_obstacle(predicted, index, w.glider.position, w.glider_radius, out);
    }
    return out;
  }

  std::size_t size() const { return contacts_.size(); }

 private:
  struct Contact {
    Obstacle last;
    double seen_at = 0.0;
  };
  double horizon_;
  std::map<std::size_t, Contact> contacts_;
};

/// All-round proximity scan: facing-side points of every obstacle whose
/// surface lies within `radius`, regardless of the sonar beam.
inline ObstaclePointSet sense_nearby(const WorldState& w, double radius) {
  ObstaclePointSet out;
  for (std::size_t i = 0; i < w.obstacles.size(); ++i) {
    if (surface_distance(w.obstacles[i], w.glider.position) <= radius) {
      sample_obstacle(w.obstacles[i], i, w.glider.position, w.glider_radius, out);
    }
  }
  return out;
}

/// Smallest hull-to-surface gap over all obstacles; +inf in an empty world.
inline double clearance(const WorldState& w) {
  double c = std::numeric_limits<double>::infinity();
  for (const auto& o : w.obstacles) {
    c = std::min(c, surface_distance(o, w.glider.position) - w.glider_radius);
  }
  return c;
}

/// Straight-line motion with specular reflection off the domain walls.
inline void advance_obstacles(std::vector<Obstacle>& obstacles, const Bounds& b, double dt) {
  auto reflect = [](double& x, double& v, double lo, double hi) {
    if (x > hi) {
      x = 2.0 * hi - x;
      v = -v;
    } else if (x < lo) {
      x = 2.0 * lo - x;
      v = -v;
    }
  };
  for (auto& o : obstacles) {
    if (o.velocity == Vec3{}) continue;
    o.center += o.velocity * dt;
    reflect(o.center.x, o.velocity.x, b.lo.x, b.hi.x);
    reflect(o.center.y, o.velocity.y, b.lo.y, b.hi.y);
    reflect(o.center.z, o.velocity.z, b.lo.z, b.hi.z);
  }
}

/// Moves obstacles, advances the clock and refreshes the collision flag
/// after the glider state has been updated.
inline void finish_step(WorldState& w, double dt) {
  advance_obstacles(w.obstacles, w.bounds, dt);
  w.time += dt;
  w.collision = w.collision || clearance(w) < 0.0;
}

/// One kinematic step: still-water velocity toward the commanded point plus
/// the current sampled at the glider's position.
inline WorldState step_kinematics(WorldState w, const GotoCommand& cmd, double dt) {
  const Vec3 p = w.glider.position;
  const Vec3 heading = normalized(cmd.target - p);
  const Vec3 current = local_flow(w, p);
  w.glider.position = p + heading * (cmd.speed * dt) + current * dt;
  w.glider.attitude = {cmd.psi_d, cmd.theta_d};
  w.glider.speed = cmd.speed;
  w.glider.mode = PlannerMode::follow;
  finish_step(w, dt);
  return w;
}

}  // namespace mppf
