#pragma once

// Scenario driver: sense -> sample -> select (or escape) -> advance/replan
// -> integrate, until the target is reached or the run fails.

#include <cmath>
#include <cstddef>
#include <functional>
#include <optional>
#include <limits>
#include <string>
#include <vector>

#include "mppf/environment.hpp"
#include "mppf/escape.hpp"
#include "mppf/geometry.hpp"
#include "mppf/potentials.hpp"
#include "mppf/sawtooth.hpp"
#include "mppf/scenario.hpp"

namespace mppf {

enum class Termination { reached, collision, trapped, max_steps };

inline const char* to_string(Termination t) {
  switch (t) {
    case Termination::reached: return "reached";
    case Termination::collision: return "collision";
    case Termination::trapped: return "trapped";
    case Termination::max_steps: return "max_steps";
  }
  return "unknown";
}

enum class StepMode { follow, ascend, descend };

inline const char* to_string(StepMode m) {
  switch (m) {
    case StepMode::follow: return "follow";
    case StepMode::ascend: return "ascend";
    case StepMode::descend: return "descend";
  }
  return "unknown";
}

struct TrajectorySample {
  double t = 0.0;
  Vec3 position;
  Attitude attitude;
  StepMode mode = StepMode::follow;
  double potential = std::numeric_limits<double>::quiet_NaN();  // NaN when no argmin ran
};

enum class EventKind { waypoint_reached, replan, escape_start, escape_end };

inline const char* to_string(EventKind k) {
  switch (k) {
    case EventKind::waypoint_reached: return "waypoint_reached";
    case EventKind::replan: return "replan";
    case EventKind::escape_start: return "escape_start";
    case EventKind::escape_end: return "escape_end";
  }
  return "unknown";
}

struct RunEvent {
  std::size_t step = 0;
  EventKind kind = EventKind::replan;
  Vec3 position;
};

struct RunResult {
  bool reached = false;
  double time_cost = 0.0;
  double drift = 0.0;
  double min_clearance = std::numeric_limits<double>::infinity();
  bool collision = false;
  std::size_t replans = 0;
  std::size_t escapes = 0;
  std::size_t steps = 0;
  Termination termination = Termination::max_steps;
  std::string diagnostic;

  std::vector<TrajectorySample> trajectory;
  std::vector<RunEvent> events;
  std::vector<WaypointPlan> plans;        // initial plan, then one per replan
  std::vector<Obstacle> initial_obstacles;
};

/// Everything the planner saw and chose on one argmin step, for replay.
struct PlannerStep {
  std::size_t step = 0;
  const WorldState& before;
  const SampleSurface& surface;
  const ObstaclePointSet& points;
  Vec3 goal;
  Vec3 flow;
  const GotoCommand& command;
};

using StepObserver = std::function<void(const PlannerStep&)>;

inline WorldState initial_world(const Scenario& s) {
  WorldState w;
  w.glider.position = s.start;
  w.glider.attitude = {wrap_angle(s.initial_heading), 0.0};
  w.glider.speed = 0.0;
  w.obstacles = realize_obstacles(s);
  w.flow = s.flow;
  w.bounds = s.bounds;
  w.glider_radius = s.glider.body_radius;
  return w;
}

inline RunResult run_scenario(const Scenario& s, const StepObserver& observer = {}) {
  {
    auto problems = validate(s);
    if (!problems.empty()) throw ScenarioError(problems);
  }
  RunResult res;
  WorldState world = initial_world(s);
  res.initial_obstacles = world.obstacles;
  const DepthLimits depth{0.0, s.glider.d_max};

  WaypointPlan plan = plan_sawtooth(s.start, s.end, s.sawtooth);
  res.plans.push_back(plan);
  ProgressHistory history(s.escape.window);
  EscapeState escape;
  ContactMemory contacts(s.sonar.memory);
  auto sense = [&] {
    contacts.observe(world, s.sonar);
    return contacts.points(world);
  };

  auto record = [&](StepMode mode, double potential) {
    res.trajectory.push_back(
        {world.time, world.glider.position, world.glider.attitude, mode, potential});
  };
  auto event = [&](std::size_t step, EventKind k) {
    res.events.push_back({step, k, world.glider.position});
  };
  auto replan = [&](std::size_t step) {
    plan = replan_from(world.glider.position, s.end, s.sawtooth);
    res.plans.push_back(plan);
    ++res.replans;
    history.clear();
    event(step, EventKind::replan);
  };
  auto in_critical_zone = [&](const ObstaclePointSet& pts) {
    return obstacle_in_critical_zone(world.glider.position, pts, s.glider.body_radius,
                                     s.escape);
  };
  auto start_escape = [&](std::size_t step) {
    const auto nearby =
        sense_nearby(world, s.glider.body_radius + 10.0 * s.escape.step_radius + s.sonar.range);
    const EscapeMode dir = choose_direction(world.glider.position, nearby,
                                            s.glider.body_radius, s.escape, s.glider.d_max);
    escape = begin_escape(dir, world.glider);
    ++res.escapes;
    history.clear();
    event(step, EventKind::escape_start);
  };

  res.min_clearance = clearance(world);
  record(StepMode::follow, std::numeric_limits<double>::quiet_NaN());

  auto finish = [&](std::size_t step, Termination t) {
    res.steps = step;
    res.termination = t;
    res.time_cost = static_cast<double>(step) * s.dt;
    res.drift = distance(world.glider.position, s.end);
    res.reached = t == Termination::reached;
    res.collision = t == Termination::collision;
  };

  for (std::size_t step = 1; step <= s.max_steps; ++step) {
    try {
      if (escape.mode == EscapeMode::inactive) {
        const ObstaclePointSet points = sense();
        const SampleSurface surface = build_sample_surface(world.glider, s.glider, s.dt);
        const Vec3 goal = plan.active();
        const Vec3 current = local_flow(world, world.glider.position);
        std::optional<GotoCommand> cmd;
        try {
          cmd = select_goto(surface, goal, points, current, s.potentials, s.planner_mode, depth);
        } catch (const NoFeasibleWaypoint&) {
          start_escape(step);
        }
        if (cmd) {
          if (observer) observer({step, world, surface, points, goal, current, *cmd});
          const double before = distance(world.glider.position, goal);
          world = step_kinematics(std::move(world), *cmd, s.dt);
          history.push(before - distance(world.glider.position, goal));
          record(StepMode::follow, cmd->potential);

          const std::size_t index = plan.active_index;
          plan = advance(std::move(plan), world.glider.position);
          if (plan.active_index != index) {
            history.clear();
            event(step, EventKind::waypoint_reached);
          } else if (cross_track_error(plan, world.glider.position) > s.replan_cross_track) {
            replan(step);
          }
          if (!plan.complete() &&
              detect_local_minimum(history, in_critical_zone(sense()),
                                   s.escape)) {
            start_escape(step);
          }
        }
      }
      // An escape that began this step because no candidate was feasible
      // moves vertically right away; one triggered after a follow step
      // waits for the next step.
      if (escape.mode != EscapeMode::inactive && res.trajectory.size() == step) {
        const Vec3 current = local_flow(world, world.glider.position);
        auto [g, e] = escape_step(escape, world.glider, s.dt, s.escape, s.glider.d_max, current);
        world.glider = g;
        escape = e;
        finish_step(world, s.dt);
        record(escape.mode == EscapeMode::ascending ? StepMode::ascend : StepMode::descend,
               std::numeric_limits<double>::quiet_NaN());
        if (escape_finished(escape, world.glider,
                            in_critical_zone(sense()))) {
          escape.mode = EscapeMode::inactive;
          world.glider.mode = PlannerMode::follow;
          event(step, EventKind::escape_end);
          if (!(world.glider.position == s.end)) replan(step);
        }
      }
    } catch (const Trapped& t) {
      res.diagnostic = t.what();
      if (res.trajectory.size() == step) record(StepMode::follow, std::numeric_limits<double>::quiet_NaN());
      finish(step, Termination::trapped);
      return res;
    }

    res.min_clearance = std::min(res.min_clearance, clearance(world));
    if (world.collision) {
      finish(step, Termination::collision);
      return res;
    }
    if (distance(world.glider.position, s.end) <= s.sawtooth.arrival_radius) {
      finish(step, Termination::reached);
      return res;
    }
  }
  finish(s.max_steps, Termination::max_steps);
  return res;
}

struct ModeComparison {
  RunResult baseline;
  RunResult advanced;
  double delta_time_cost = 0.0;  // advanced - baseline
  double delta_drift = 0.0;      // advanced - baseline
};

inline ModeComparison compare_modes(Scenario s) {
  ModeComparison c;
  s.planner_mode = PotentialMode::baseline;
  c.baseline = run_scenario(s);
  s.planner_mode = PotentialMode::advanced;
  c.advanced = run_scenario(s);
  c.delta_time_cost = c.advanced.time_cost - c.baseline.time_cost;
  c.delta_drift = c.advanced.drift - c.baseline.drift;
  return c;
}

}  // namespace mppf
