#pragma once

// Shared fixtures for the test binaries: seeded random generators for
// property tests and an exhaustive argmin oracle.

#include <cstdint>
#include <limits>
#include <random>
#include <string>

#include "mppf/mppf.hpp"

namespace mppf::testing {

class Gen {
 public:
  explicit Gen(std::uint64_t seed) : rng_(seed) {}

  double uniform(double lo, double hi) { return mppf::uniform(rng_, lo, hi); }
  int integer(int lo, int hi) { return lo + static_cast<int>(rng_() % static_cast<std::uint64_t>(hi - lo + 1)); }
  bool coin() { return (rng_() & 1u) != 0; }

  Vec3 point(const Vec3& lo, const Vec3& hi) {
    return {uniform(lo.x, hi.x), uniform(lo.y, hi.y), uniform(lo.z, hi.z)};
  }
  Vec3 direction() {
    for (;;) {
      Vec3 v{uniform(-1, 1), uniform(-1, 1), uniform(-1, 1)};
      const double n = norm(v);
      if (n > 1e-3 && n <= 1.0) return v * (1.0 / n);
    }
  }
  Vec3 horizontal(double magnitude) {
    const double a = uniform(-kPi, kPi);
    return {magnitude * std::cos(a), magnitude * std::sin(a), 0.0};
  }

  GliderState glider(double d_max) {
    GliderState g;
    g.position = point({0, 0, 0}, {100, 100, d_max});
    g.attitude = {uniform(-kPi, kPi), uniform(-deg2rad(45), deg2rad(45))};
    g.speed = 0.5;
    return g;
  }

  ObstaclePointSet obstacle_points(const Vec3& near, int count) {
    ObstaclePointSet pts;
    for (int i = 0; i < count; ++i) {
      ObstaclePoint o;
      o.position = near + direction() * uniform(0.2, 6.0);
      o.velocity = coin() ? horizontal(uniform(0.0, 0.4)) : Vec3{};
      o.obstacle_radius = uniform(0.5, 7.0);
      o.influence = 2.0 * (o.obstacle_radius + 0.6);
      o.obstacle_index = static_cast<std::size_t>(i);
      pts.push_back(o);
    }
    return pts;
  }

  std::mt19937_64& engine() { return rng_; }

 private:
  std::mt19937_64 rng_;
};

/// Exhaustive argmin over all 25 candidates, written independently of
/// select_goto: potentials are summed term by term here, and ties resolve
/// by sorting on (potential band, |dpsi|, |dtheta|, index).
struct OracleChoice {
  std::size_t index = 0;
  double potential = 0.0;
  bool any = false;
};

inline OracleChoice brute_force_argmin(const SampleSurface& s, const Vec3& goal,
                                       const ObstaclePointSet& pts, const Vec3& flow,
                                       const PotentialParams& p, PotentialMode mode,
                                       DepthLimits depth) {
  double u[kSurfaceSize];
  bool ok[kSurfaceSize];
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < kSurfaceSize; ++i) {
    const Candidate& c = s.samples[i];
    ok[i] = c.point.z >= depth.min && c.point.z <= depth.max;
    for (const auto& o : pts) ok[i] = ok[i] && !(c.point == o.position);
    if (!ok[i]) continue;
    const Vec3 dg = goal - c.point;
    double total = 0.5 * p.xi * (dg.x * dg.x + dg.y * dg.y + dg.z * dg.z);
    for (const auto& o : pts) {
      const double d = distance(c.point, o.position);
      if (d <= o.influence) {
        const double k = 1.0 / d - 1.0 / o.influence;
        total += 0.5 * p.eta * k * k * dot(dg, dg);
      }
    }
    if (mode == PotentialMode::advanced) {
      for (const auto& o : pts) {
        const double d = distance(c.point, o.position);
        const double vuo = dot(c.velocity - o.velocity, o.position - c.point) / d;
        if (d <= o.influence && vuo >= 0.0) total += 0.5 * p.tau * vuo / d;
      }
      if (norm(flow) > 0.0) {
        const double g = std::acos(std::clamp(
            dot(flow, c.velocity) / (norm(flow) * norm(c.velocity)), -1.0, 1.0));
        if (g <= p.psi_max) total += 0.5 * p.kappa * dot(flow - c.velocity, flow - c.velocity);
        else if (g >= kPi / 2 + p.psi_max)
          total += 0.5 * p.kappa * dot(flow + c.velocity, flow + c.velocity);
      }
    }
    u[i] = total;
    best = std::min(best, total);
  }
  OracleChoice out;
  const double band = 1e-12 * std::max(1.0, std::abs(best));
  for (std::size_t i = 0; i < kSurfaceSize; ++i) {
    if (!ok[i] || u[i] > best + band) continue;
    const Candidate& c = s.samples[i];
    const double dpsi = std::abs(wrap_angle(c.psi - s.current.psi));
    const double dth = std::abs(c.theta - s.current.theta);
    if (!out.any) {
      out = {i, u[i], true};
      continue;
    }
    const Candidate& b = s.samples[out.index];
    const double bpsi = std::abs(wrap_angle(b.psi - s.current.psi));
    const double bth = std::abs(b.theta - s.current.theta);
    const bool better = dpsi < bpsi - 1e-12 || (std::abs(dpsi - bpsi) <= 1e-12 && dth < bth - 1e-12);
    if (better) out = {i, u[i], true};
  }
  return out;
}

inline std::string scenario_path(const std::string& file) {
  return std::string(MPPF_SCENARIO_DIR) + "/" + file;
}

}  // namespace mppf::testing
