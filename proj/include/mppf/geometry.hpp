#pragma once

// Coordinate conventions and the candidate-waypoint sampling surface.
//
// World frame: x east, y north, z depth (positive downward, z = 0 at the
// surface). Heading psi is measured in the horizontal plane from +x; glide
// angle theta is positive when ascending, so a positive theta decreases z.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <numbers>

namespace mppf {

inline constexpr double kPi = std::numbers::pi;

constexpr double deg2rad(double deg) { return deg * kPi / 180.0; }
constexpr double rad2deg(double rad) { return rad * 180.0 / kPi; }

struct Vec3 {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;

  constexpr Vec3& operator+=(const Vec3& o) {
    x += o.x;
    y += o.y;
    z += o.z;
    return *this;
  }
  constexpr Vec3& operator-=(const Vec3& o) {
    x -= o.x;
    y -= o.y;
    z -= o.z;
    return *this;
  }
  constexpr Vec3& operator*=(double s) {
    x *= s;
    y *= s;
    z *= s;
    return *this;
  }

  friend constexpr Vec3 operator+(Vec3 a, const Vec3& b) { return a += b; }
  friend constexpr Vec3 operator-(Vec3 a, const Vec3& b) { return a -= b; }
  friend constexpr Vec3 operator*(Vec3 a, double s) { return a *= s; }
  friend constexpr Vec3 operator*(double s, Vec3 a) { return a *= s; }
  friend constexpr Vec3 operator-(const Vec3& a) { return {-a.x, -a.y, -a.z}; }
  friend constexpr bool operator==(const Vec3&, const Vec3&) = default;
};

constexpr double dot(const Vec3& a, const Vec3& b) {
  return a.x * b.x + a.y * b.y + a.z * b.z;
}

constexpr Vec3 cross(const Vec3& a, const Vec3& b) {
  return {a.y * b.z - a.z * b.y, a.z * b.x - a.x * b.z, a.x * b.y - a.y * b.x};
}

inline double norm(const Vec3& v) { return std::sqrt(dot(v, v)); }
inline double distance(const Vec3& a, const Vec3& b) { return norm(a - b); }
inline double horizontal_norm(const Vec3& v) { return std::hypot(v.x, v.y); }

/// Unit vector along v; the zero vector maps to itself.
inline Vec3 normalized(const Vec3& v) {
  const double n = norm(v);
  return n > 0.0 ? v * (1.0 / n) : Vec3{};
}

inline bool is_finite(const Vec3& v) {
  return std::isfinite(v.x) && std::isfinite(v.y) && std::isfinite(v.z);
}

/// Wraps an angle into (-pi, pi].
inline double wrap_angle(double a) {
  double w = std::remainder(a, 2.0 * kPi);
  if (w <= -kPi) w += 2.0 * kPi;
  return w;
}

struct Attitude {
  double psi = 0.0;    // heading [rad]
  double theta = 0.0;  // glide angle [rad], positive = ascending
};

struct GliderSpec {
  double psi_m = deg2rad(20.0);      // max heading change per step
  double theta_max = deg2rad(45.0);  // glide-angle envelope and per-step span
  double speed_down = 0.5;           // [m/s]
  double speed_up = 0.3;             // [m/s], also used for level flight
  double body_radius = 0.6;          // R_UG [m]
  double d_max = 30.0;               // max reachable depth [m]

  bool valid() const {
    return psi_m > 0.0 && psi_m < kPi / 2.0 && theta_max > 0.0 &&
           theta_max <= kPi / 2.0 && speed_down > 0.0 && speed_up > 0.0 &&
           body_radius > 0.0 && d_max > 0.0;
  }

  /// Still-water speed for a step whose direction changes depth by dz.
  double speed_for(double dz) const { return dz > 0.0 ? speed_down : speed_up; }
};

enum class PlannerMode { follow, escape };

struct GliderState {
  Vec3 position;
  Attitude attitude;
  double speed = 0.0;
  PlannerMode mode = PlannerMode::follow;
};

/// r * (cos(theta) cos(psi), cos(theta) sin(psi), -sin(theta)).
inline Vec3 spherical_to_cartesian(double psi, double theta, double r) {
  const double c = std::cos(theta);
  return {r * c * std::cos(psi), r * c * std::sin(psi), -r * std::sin(theta)};
}

/// Inverse of spherical_to_cartesian for a nonzero vector.
inline Attitude cartesian_to_spherical(const Vec3& v) {
  return {std::atan2(v.y, v.x), std::atan2(-v.z, horizontal_norm(v))};
}

inline constexpr std::size_t kSurfaceSide = 5;
inline constexpr std::size_t kSurfaceSize = kSurfaceSide * kSurfaceSide;

struct Candidate {
  Vec3 point;
  double psi = 0.0;
  double theta = 0.0;
  double speed = 0.0;
  Vec3 velocity;  // still-water velocity if the glider heads to `point`
};

/// The 5x5 grid of candidate go-to points in front of the glider.
/// Index = theta_row * 5 + psi_col, rows ascending in theta, columns
/// ascending in psi.
struct SampleSurface {
  Vec3 center;
  Attitude current;
  std::array<Candidate, kSurfaceSize> samples{};
};

inline SampleSurface build_sample_surface(const GliderState& state,
                                          const GliderSpec& spec, double dt) {
  SampleSurface surface;
  surface.center = state.position;
  surface.current = state.attitude;
  const double half = static_cast<double>(kSurfaceSide - 1) / 2.0;
  for (std::size_t row = 0; row < kSurfaceSide; ++row) {
    const double frac_t = (static_cast<double>(row) - half) / half;
    double theta = state.attitude.theta + frac_t * spec.theta_max;
    theta = std::clamp(theta, -spec.theta_max, spec.theta_max);
    for (std::size_t col = 0; col < kSurfaceSide; ++col) {
      const double frac_p = (static_cast<double>(col) - half) / half;
      const double psi = wrap_angle(state.attitude.psi + frac_p * spec.psi_m);
      const Vec3 dir = spherical_to_cartesian(psi, theta, 1.0);
      const double speed = spec.speed_for(dir.z);
      Candidate& c = surface.samples[row * kSurfaceSide + col];
      c.psi = psi;
      c.theta = theta;
      c.speed = speed;
      c.velocity = dir * speed;
      c.point = state.position + dir * (speed * dt);
    }
  }
  return surface;
}

}  // namespace mppf
