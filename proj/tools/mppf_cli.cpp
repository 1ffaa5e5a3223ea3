// mppf: run, compare and lint glider path-planning scenarios.
//
//   mppf run      --scenario s.json [--mode advanced] [--seed N] [--out dir] [--max-steps N]
//   mppf compare  --scenario s.json [--seed N] [--out dir] [--max-steps N]
//   mppf validate --scenario s.json
//
// Exit codes: 0 reached, 2 collision, 3 trapped, 4 max steps exceeded,
// 64 invalid scenario, 1 other errors (I/O).

#include <cstdint>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "mppf/mppf.hpp"

namespace {

constexpr int kExitInvalidScenario = 64;

int exit_code(mppf::Termination t) {
  switch (t) {
    case mppf::Termination::reached: return 0;
    case mppf::Termination::collision: return 2;
    case mppf::Termination::trapped: return 3;
    case mppf::Termination::max_steps: return 4;
  }
  return 1;
}

struct RunOptions {
  std::string scenario;
  std::string mode;
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> max_steps;
  std::string out = "out";
  bool plots = false;
};

mppf::Scenario load(const RunOptions& o) {
  mppf::Scenario s = mppf::load_scenario(o.scenario);
  if (!o.mode.empty()) {
    auto m = mppf::parse_mode(o.mode);
    if (!m) throw mppf::ScenarioError({"--mode: expected baseline or advanced"});
    s.planner_mode = *m;
  }
  if (o.seed) {
    if (!s.random_obstacles) {
      throw mppf::ScenarioError({"--seed: scenario has no random_obstacles block"});
    }
    s.random_obstacles->seed = *o.seed;
  }
  if (o.max_steps) s.max_steps = *o.max_steps;
  auto problems = mppf::validate(s);
  if (!problems.empty()) throw mppf::ScenarioError(problems);
  return s;
}

void print_summary(const mppf::RunResult& r, const mppf::Scenario& s) {
  std::cout << mppf::to_string(s.planner_mode) << ": " << mppf::to_string(r.termination)
            << " time_cost=" << r.time_cost << "s drift=" << r.drift
            << "m min_clearance=" << r.min_clearance << "m replans=" << r.replans
            << " escapes=" << r.escapes << '\n';
  if (!r.diagnostic.empty()) std::cout << "  " << r.diagnostic << '\n';
}

void add_run_flags(CLI::App* cmd, RunOptions& o, bool with_mode) {
  cmd->add_option("--scenario", o.scenario, "Scenario JSON file")->required();
  if (with_mode) {
    cmd->add_option("--mode", o.mode, "Planner mode override")
        ->check(CLI::IsMember({"baseline", "advanced"}));
  }
  cmd->add_option("--seed", o.seed, "Seed for random obstacle generation");
  cmd->add_option("--max-steps", o.max_steps, "Step budget override");
  cmd->add_option("--out", o.out, "Output directory");
  cmd->add_flag("--plots", o.plots, "Also write SVG top and profile views");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Multi-point potential field planner for underwater gliders"};
  app.require_subcommand(1);

  RunOptions run_opts;
  auto* run = app.add_subcommand("run", "Simulate one scenario");
  add_run_flags(run, run_opts, true);

  RunOptions cmp_opts;
  auto* compare = app.add_subcommand("compare", "Run baseline and advanced modes side by side");
  add_run_flags(compare, cmp_opts, false);

  std::string lint_path;
  auto* validate = app.add_subcommand("validate", "Check a scenario file");
  validate->add_option("--scenario", lint_path, "Scenario JSON file")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (*run) {
      const auto s = load(run_opts);
      const auto r = mppf::run_scenario(s);
      mppf::emit_outputs(r, s, {run_opts.out, mppf::to_string(s.planner_mode), run_opts.plots});
      print_summary(r, s);
      return exit_code(r.termination);
    }
    if (*compare) {
      const auto s = load(cmp_opts);
      const auto c = mppf::compare_modes(s);
      auto sb = s;
      sb.planner_mode = mppf::PotentialMode::baseline;
      auto sa = s;
      sa.planner_mode = mppf::PotentialMode::advanced;
      mppf::emit_outputs(c.baseline, sb, {cmp_opts.out, "baseline", cmp_opts.plots});
      mppf::emit_outputs(c.advanced, sa, {cmp_opts.out, "advanced", cmp_opts.plots});
      print_summary(c.baseline, sb);
      print_summary(c.advanced, sa);
      std::cout << "delta_time_cost=" << c.delta_time_cost << "s delta_drift=" << c.delta_drift
                << "m (advanced - baseline)\n";
      return exit_code(c.advanced.termination);
    }
    if (*validate) {
      const auto s = mppf::load_scenario(lint_path);
      std::cout << lint_path << ": ok (" << s.name << ", hash " << mppf::scenario_hash(s)
                << ")\n";
      return 0;
    }
  } catch (const mppf::ScenarioError& e) {
    std::cerr << e.what() << '\n';
    return kExitInvalidScenario;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
