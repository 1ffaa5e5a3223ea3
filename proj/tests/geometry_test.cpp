#include <gtest/gtest.h>

#include "support.hpp"

namespace mppf {
namespace {

constexpr double kTol = 1e-9;

void expect_vec_near(const Vec3& a, const Vec3& b, double tol) {
  EXPECT_NEAR(a.x, b.x, tol);
  EXPECT_NEAR(a.y, b.y, tol);
  EXPECT_NEAR(a.z, b.z, tol);
}

TEST(SphericalToCartesian, AxisAligned) {
  expect_vec_near(spherical_to_cartesian(0.0, 0.0, 1.0), {1, 0, 0}, kTol);
  expect_vec_near(spherical_to_cartesian(kPi / 2, 0.0, 2.0), {0, 2, 0}, kTol);
}

TEST(SphericalToCartesian, AscendingReducesDepth) {
  const double h = std::sqrt(0.5);
  expect_vec_near(spherical_to_cartesian(0.0, kPi / 4, 1.0), {h, 0, -h}, kTol);
}

TEST(SphericalToCartesian, RoundTripRecoversAngles) {
  testing::Gen gen(11);
  for (int i = 0; i < 1000; ++i) {
    const double psi = gen.uniform(-kPi + 1e-6, kPi);
    const double theta = gen.uniform(-kPi / 2 + 1e-3, kPi / 2 - 1e-3);
    const Attitude a = cartesian_to_spherical(spherical_to_cartesian(psi, theta, gen.uniform(0.1, 10)));
    EXPECT_NEAR(wrap_angle(a.psi - psi), 0.0, kTol);
    EXPECT_NEAR(a.theta, theta, kTol);
  }
}

TEST(WrapAngle, HalfOpenInterval) {
  EXPECT_DOUBLE_EQ(wrap_angle(kPi), kPi);
  EXPECT_DOUBLE_EQ(wrap_angle(-kPi), kPi);
  EXPECT_NEAR(wrap_angle(3 * kPi / 2), -kPi / 2, kTol);
  EXPECT_NEAR(wrap_angle(-5 * kPi / 2), -kPi / 2, kTol);
}

TEST(SampleSurface, HeadingGridSpansTurnLimit) {
  GliderState g;
  const auto s = build_sample_surface(g, GliderSpec{}, 1.0);
  const double expected[] = {-20, -10, 0, 10, 20};
  for (std::size_t row = 0; row < kSurfaceSide; ++row) {
    for (std::size_t col = 0; col < kSurfaceSide; ++col) {
      EXPECT_NEAR(rad2deg(s.samples[row * kSurfaceSide + col].psi), expected[col], kTol);
    }
  }
}

TEST(SampleSurface, GlideAnglesClampAtEnvelope) {
  GliderState g;
  g.attitude.theta = deg2rad(40);
  const auto s = build_sample_surface(g, GliderSpec{}, 1.0);
  double top = -kPi;
  for (const auto& c : s.samples) top = std::max(top, c.theta);
  EXPECT_NEAR(rad2deg(top), 45.0, kTol);
  // rows at -5, 17.5, 40 deg; the last two clamp to 45 deg
  EXPECT_NEAR(rad2deg(s.samples[0].theta), -5.0, kTol);
  EXPECT_NEAR(rad2deg(s.samples[5].theta), 17.5, kTol);
}

TEST(SampleSurface, LevelCandidateUsesSlowSpeed) {
  GliderState g;
  g.position = {10, 10, 5};
  const auto s = build_sample_surface(g, GliderSpec{}, 1.0);
  const Candidate& level = s.samples[2 * kSurfaceSide + 2];
  EXPECT_DOUBLE_EQ(level.theta, 0.0);
  EXPECT_DOUBLE_EQ(level.speed, 0.3);
  EXPECT_NEAR(distance(level.point, g.position), 0.3, kTol);
  const Candidate& down = s.samples[0];
  EXPECT_DOUBLE_EQ(down.speed, 0.5);
}

TEST(SampleSurface, PropertiesOverRandomStates) {
  testing::Gen gen(5);
  const GliderSpec spec;
  for (int i = 0; i < 1000; ++i) {
    const GliderState g = gen.glider(spec.d_max);
    const double dt = gen.uniform(0.2, 3.0);
    const auto s = build_sample_surface(g, spec, dt);
    for (const auto& c : s.samples) {
      EXPECT_LE(std::abs(wrap_angle(c.psi - g.attitude.psi)), spec.psi_m + kTol);
      EXPECT_LE(std::abs(c.theta), spec.theta_max + kTol);
      EXPECT_NEAR(distance(c.point, g.position), c.speed * dt, kTol);
      EXPECT_NEAR(norm(c.velocity), c.speed, kTol);
    }
    // mirror symmetry about the current heading, column k against 4 - k
    for (std::size_t row = 0; row < kSurfaceSide; ++row) {
      for (std::size_t col = 0; col < 2; ++col) {
        const auto& a = s.samples[row * kSurfaceSide + col];
        const auto& b = s.samples[row * kSurfaceSide + (kSurfaceSide - 1 - col)];
        EXPECT_NEAR(wrap_angle(a.psi - g.attitude.psi), -wrap_angle(b.psi - g.attitude.psi), kTol);
      }
    }
  }
}

}  // namespace
}  // namespace mppf
