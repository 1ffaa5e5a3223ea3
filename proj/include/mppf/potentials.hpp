#pragma once

// Potential fields evaluated on the candidate surface and the argmin
// go-to selection.

#include <cmath>
#include <cstddef>
#include <limits>
#include <span>
#include <stdexcept>
#include <vector>

#include "mppf/geometry.hpp"

namespace mppf {

struct PotentialParams {
  double xi = 0.1;                 // attraction gain
  double eta = 10.0;               // repulsion gain
  double tau = 0.1;                // velocity-repulsion gain
  double kappa = 0.1;              // flow gain
  double psi_max = deg2rad(20.0);  // flow-alignment half angle

  bool valid() const {
    return xi >= 0.0 && eta >= 0.0 && tau >= 0.0 && kappa >= 0.0 &&
           psi_max >= 0.0 && psi_max < kPi / 2.0;
  }
};

/// One sampled point on a sensed obstacle surface.
struct ObstaclePoint {
  Vec3 position;
  Vec3 velocity;
  double influence = 0.0;  // d_t of the parent obstacle [m]
  double obstacle_radius = 0.0;
  std::size_t obstacle_index = 0;
};

using ObstaclePointSet = std::vector<ObstaclePoint>;

enum class PotentialMode { baseline, advanced };

struct GotoCommand {
  Vec3 target;
  double psi_d = 0.0;
  double theta_d = 0.0;
  double depth_d = 0.0;
  double speed = 0.0;
  double potential = 0.0;
  std::size_t candidate_index = 0;
};

class NoFeasibleWaypoint : public std::runtime_error {
 public:
  NoFeasibleWaypoint() : std::runtime_error("no feasible waypoint") {}
};

inline double attractive(const Vec3& q_i, const Vec3& q_g,
                         const PotentialParams& p) {
  const Vec3 d = q_g - q_i;
  return 0.5 * p.xi * dot(d, d);
}

inline double repulsive(const Vec3& q_i, const Vec3& o_j, double d_t,
                        const Vec3& q_g, const PotentialParams& p) {
  const double d_o = distance(q_i, o_j);
  if (d_o > d_t) return 0.0;
  const double k = 1.0 / d_o - 1.0 / d_t;
  const Vec3 g = q_g - q_i;
  return 0.5 * p.eta * k * k * dot(g, g);
}

/// Penalizes candidates whose still-water velocity closes on a nearby
/// obstacle point.
inline double velocity_repulsive(const Vec3& q_i, const Vec3& candidate_velocity,
                                 const Vec3& o_j, const Vec3& v_j, double d_t,
                                 const PotentialParams& p) {
  const Vec3 to_obstacle = o_j - q_i;
  const double d_o = norm(to_obstacle);
  if (d_o > d_t) return 0.0;
  const double closing = dot(candidate_velocity - v_j, to_obstacle) / d_o;
  if (closing < 0.0) return 0.0;
  return 0.5 * p.tau * closing / d_o;
}

/// Zero unless the candidate runs within psi_max of the local flow, or
/// within psi_max of straight against it.
inline double flow_potential(const Vec3& candidate_velocity,
                             const Vec3& flow, const PotentialParams& p) {
  const double nf = norm(flow);
  const double nv = norm(candidate_velocity);
  if (nf == 0.0 || nv == 0.0) return 0.0;
  const double c = std::clamp(dot(flow, candidate_velocity) / (nf * nv), -1.0, 1.0);
  const double gamma = std::acos(c);
  if (gamma <= p.psi_max) {
    const Vec3 d = flow - candidate_velocity;
    return 0.5 * p.kappa * dot(d, d);
  }
  if (gamma >= kPi / 2.0 + p.psi_max) {
    const Vec3 d = -flow - candidate_velocity;
    return 0.5 * p.kappa * dot(d, d);
  }
  return 0.0;
}

inline double total_potential(const Vec3& q_i, const Vec3& candidate_velocity,
                              const Vec3& q_g,
                              std::span<const ObstaclePoint> obstacles,
                              const Vec3& flow, const PotentialParams& p,
                              PotentialMode mode) {
  double u = attractive(q_i, q_g, p);
  for (const auto& o : obstacles) {
    u += repulsive(q_i, o.position, o.influence, q_g, p);
  }
  if (mode == PotentialMode::advanced) {
    for (const auto& o : obstacles) {
      u += velocity_repulsive(q_i, candidate_velocity, o.position, o.velocity,
                              o.influence, p);
    }
    u += flow_potential(candidate_velocity, flow, p);
  }
  return u;
}

/// Relative band inside which two potentials count as tied.
inline constexpr double kTieTolerance = 1e-12;
/// Angle differences closer than this [rad] are equal for tie-breaking.
inline constexpr double kAngleTieTolerance = 1e-12;

struct DepthLimits {
  double min = 0.0;
  double max = 0.0;
};

inline bool candidate_feasible(const Candidate& c,
                               std::span<const ObstaclePoint> obstacles,
                               DepthLimits depth) {
  if (c.point.z < depth.min || c.point.z > depth.max) return false;
  for (const auto& o : obstacles) {
    if (distance(c.point, o.position) == 0.0) return false;
  }
  return true;
}

inline GotoCommand make_command(const SampleSurface& surface, std::size_t idx,
                                double potential) {
  const Candidate& c = surface.samples[idx];
  GotoCommand cmd;
  cmd.target = c.point;
  cmd.psi_d = c.psi;
  cmd.theta_d = c.theta;
  cmd.depth_d = c.point.z;
  cmd.speed = c.speed;
  cmd.potential = potential;
  cmd.candidate_index = idx;
  return cmd;
}

/// Feasible candidate with minimum total potential. Near-equal potentials
/// (within kTieTolerance, relative) prefer the smaller heading change, then
/// the smaller glide-angle change, then grid order.
inline GotoCommand select_goto(const SampleSurface& surface, const Vec3& q_g,
                               std::span<const ObstaclePoint> obstacles,
                               const Vec3& flow, const PotentialParams& p,
                               PotentialMode mode, DepthLimits depth) {
  std::array<double, kSurfaceSize> u{};
  std::array<bool, kSurfaceSize> ok{};
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < kSurfaceSize; ++i) {
    const Candidate& c = surface.samples[i];
    ok[i] = candidate_feasible(c, obstacles, depth);
    if (!ok[i]) continue;
    u[i] = total_potential(c.point, c.velocity, q_g, obstacles, flow, p, mode);
    best = std::min(best, u[i]);
  }
  if (!std::isfinite(best)) throw NoFeasibleWaypoint{};

  const double band = kTieTolerance * std::max(1.0, std::abs(best));
  std::size_t chosen = kSurfaceSize;
  double chosen_dpsi = 0.0;
  double chosen_dtheta = 0.0;
  for (std::size_t i = 0; i < kSurfaceSize; ++i) {
    if (!ok[i] || u[i] > best + band) continue;
    const Candidate& c = surface.samples[i];
    const double dpsi = std::abs(wrap_angle(c.psi - surface.current.psi));
    const double dtheta = std::abs(c.theta - surface.current.theta);
    if (chosen == kSurfaceSize || dpsi < chosen_dpsi - kAngleTieTolerance ||
        (dpsi <= chosen_dpsi + kAngleTieTolerance &&
         dtheta < chosen_dtheta - kAngleTieTolerance)) {
      chosen = i;
      chosen_dpsi = dpsi;
      chosen_dtheta = dtheta;
    }
  }
  return make_command(surface, chosen, u[chosen]);
}

}  // namespace mppf
