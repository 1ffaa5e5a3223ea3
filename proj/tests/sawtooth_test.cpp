#include <gtest/gtest.h>

#include "support.hpp"

namespace mppf {
namespace {

constexpr double kTol = 1e-9;

SawtoothParams params(double d_max, double z_max, double z_t = 0.0) {
  SawtoothParams p;
  p.d_max = d_max;
  p.z_max = z_max;
  p.z_t = z_t;
  return p;
}

TEST(SegmentAngles, LevelAndDescending) {
  EXPECT_EQ(segment_angles({0, 0, 5}, {10, 0, 5}).theta_d, 0.0);
  const auto s = segment_angles({0, 0, 0}, {10, 0, 10});
  EXPECT_NEAR(rad2deg(s.theta_d), -45.0, kTol);
  EXPECT_EQ(s.z_d, 10.0);
}

TEST(SegmentAngles, VerticalSegments) {
  EXPECT_NEAR(segment_angles({0, 0, 10}, {0, 0, 2}).theta_d, kPi / 2, kTol);
  EXPECT_NEAR(segment_angles({0, 0, 2}, {0, 0, 10}).theta_d, -kPi / 2, kTol);
}

TEST(PlanSawtooth, DifferentDepthsIsOneSegment) {
  const auto plan = plan_sawtooth({10, 10, 0}, {90, 90, 5}, params(30, 50));
  EXPECT_EQ(plan.kind, SawtoothCase::different_depths);
  ASSERT_EQ(plan.waypoints.size(), 1u);
  EXPECT_EQ(plan.waypoints[0], (Vec3{90, 90, 5}));
}

TEST(PlanSawtooth, SingleMidpointHandValue) {
  const auto plan = plan_sawtooth({10, 10, 0}, {90, 90, 0}, params(50, 50, 20));
  EXPECT_EQ(plan.kind, SawtoothCase::single_midpoint);
  ASSERT_EQ(plan.waypoints.size(), 2u);
  EXPECT_EQ(plan.waypoints[0], (Vec3{50, 50, 30}));
  EXPECT_EQ(plan.waypoints[1], (Vec3{90, 90, 0}));
}

TEST(PlanSawtooth, StrideForTenMetreDepthLimit) {
  const auto p = params(10, 50);
  EXPECT_NEAR(stride_length(p), 2.0 * 10.0 / std::tan(deg2rad(22.5)), kTol);
  EXPECT_NEAR(stride_length(p), 48.28, 0.01);
  const auto plan = plan_sawtooth({10, 10, 0}, {90, 90, 0}, p);
  EXPECT_EQ(plan.kind, SawtoothCase::multi_tooth);
  // two full teeth then a shortened one
  ASSERT_EQ(plan.waypoints.size(), 6u);
  EXPECT_EQ(plan.waypoints[0].z, 10.0);
  EXPECT_EQ(plan.waypoints[2].z, 10.0);
  const double rest = distance(plan.waypoints[3], {90, 90, 0});
  EXPECT_NEAR(rest, std::hypot(80.0, 80.0) - 2 * stride_length(p), kTol);
  EXPECT_NEAR(plan.waypoints[4].z, std::tan(deg2rad(22.5)) * rest / 2.0, kTol);
  EXPECT_LT(plan.waypoints[4].z, 10.0);
  EXPECT_EQ(plan.waypoints.back(), (Vec3{90, 90, 0}));
}

TEST(PlanSawtooth, LiteralStrideSwitch) {
  auto p = params(10, 50);
  p.stride = StrideFormula::literal;
  EXPECT_NEAR(stride_length(p), 2.0 * 10.0 / (deg2rad(45) / 2.0), kTol);
}

TEST(PlanSawtooth, CoincidentEndpointsThrow) {
  EXPECT_THROW(plan_sawtooth({1, 2, 3}, {1, 2, 3}, params(30, 50)), DegeneratePlan);
}

TEST(Advance, IncrementsOnlyInsideArrivalRadius) {
  auto plan = plan_sawtooth({10, 10, 0}, {90, 90, 0}, params(30, 30));
  const auto far = advance(plan, {0, 0, 0});
  EXPECT_EQ(far.active_index, 0u);
  plan = advance(plan, plan.waypoints[0]);
  EXPECT_EQ(plan.active_index, 1u);
  EXPECT_FALSE(plan.complete());
  plan = advance(plan, plan.waypoints[1] + Vec3{0.5, 0, 0});
  EXPECT_TRUE(plan.complete());
}

TEST(ReplanFrom, DispatchesOnDepth) {
  const auto p = params(30, 50);
  EXPECT_EQ(replan_from({40, 20, 5}, {90, 90, 0}, p).kind, SawtoothCase::different_depths);
  const auto a = replan_from({40, 20, 0}, {90, 90, 0}, p);
  const auto b = plan_sawtooth({40, 20, 0}, {90, 90, 0}, p);
  EXPECT_EQ(a.waypoints, b.waypoints);
}

TEST(ReplanFrom, DetourPlanHeadsForTarget) {
  // glider pushed 15 m sideways from the original diagonal
  const Vec3 detour{45, 30, 0}, target{90, 90, 0};
  const auto plan = replan_from(detour, target, params(30, 50));
  const Vec3 first = plan.waypoints.front() - detour;
  const Vec3 goal = target - detour;
  const double cosang = (first.x * goal.x + first.y * goal.y) / (horizontal_norm(first) * horizontal_norm(goal));
  EXPECT_NEAR(cosang, 1.0, kTol);
}

TEST(CrossTrack, DistanceToActiveSegment) {
  const auto plan = plan_sawtooth({0, 0, 5}, {100, 0, 10}, params(30, 50));
  EXPECT_NEAR(cross_track_error(plan, {50, 3, 7.5}), 3.0, kTol);
}

// Property suite over random endpoint pairs ----------------------------------

TEST(PlanSawtoothProperty, InvariantsOverRandomPairs) {
  testing::Gen gen(99);
  int counts[4] = {0, 0, 0, 0};
  for (int i = 0; i < 1000; ++i) {
    SawtoothParams p = params(gen.uniform(5, 60), gen.uniform(10, 60));
    p.z_t = gen.coin() ? 0.0 : gen.uniform(0, 0.5 * p.z_max);
    p.theta_max = deg2rad(gen.uniform(10, 90));
    const double floor = std::min(p.d_max, p.z_max);
    const Vec3 qs = gen.point({0, 0, 0}, {100, 100, floor});
    Vec3 qe = gen.point({0, 0, 0}, {100, 100, floor});
    if (gen.coin()) qe.z = qs.z;
    if (qs == qe) continue;

    WaypointPlan plan;
    ASSERT_NO_THROW(plan = plan_sawtooth(qs, qe, p));
    ++counts[static_cast<int>(plan.kind)];
    ASSERT_FALSE(plan.waypoints.empty());
    EXPECT_EQ(plan.waypoints.back(), qe);
    EXPECT_EQ(plan.segments.size(), plan.waypoints.size());
    Vec3 prev = qs;
    for (std::size_t k = 0; k < plan.waypoints.size(); ++k) {
      const Vec3& w = plan.waypoints[k];
      EXPECT_FALSE(w == prev) << "repeated waypoint " << k;
      EXPECT_GE(w.z, 0.0);
      EXPECT_LE(w.z, floor + kTol);
      EXPECT_EQ(plan.segments[k].z_d, w.z);
      if (plan.kind == SawtoothCase::multi_tooth) {
        EXPECT_LE(std::abs(plan.segments[k].theta_d), 0.5 * p.theta_max + kTol);
      }
      prev = w;
    }
    if (plan.kind == SawtoothCase::single_midpoint) {
      EXPECT_EQ(plan.waypoints[0], tooth_midpoint(qs, qe, std::min(p.z_max - p.z_t, p.d_max)));
    }
    if (plan.kind == SawtoothCase::multi_tooth) {
      // midpoints are exact horizontal means; surface-depth waypoints
      // lie on the start-end line
      Vec3 from = qs;
      const Vec3 dir = qe - qs;
      for (std::size_t k = 0; k + 1 < plan.waypoints.size(); k += 2) {
        const Vec3& mid = plan.waypoints[k];
        const Vec3& to = plan.waypoints[k + 1];
        EXPECT_EQ(mid.x, 0.5 * (from.x + to.x));
        EXPECT_EQ(mid.y, 0.5 * (from.y + to.y));
        EXPECT_NEAR(to.z, qs.z, kTol);
        const Vec3 rel = to - qs;
        EXPECT_NEAR((rel.x * dir.y - rel.y * dir.x) / horizontal_norm(dir), 0.0, kTol);
        from = to;
      }
    }
  }
  EXPECT_GT(counts[1], 0);
  EXPECT_GT(counts[2], 0);
  EXPECT_GT(counts[3], 0);
}

}  // namespace
}  // namespace mppf
