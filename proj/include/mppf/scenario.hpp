#pragma once

// Declarative experiment description, its JSON schema, validation and the
// seeded obstacle generator.

#include <cstdint>
#include <fstream>
#include <optional>
#include <random>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"
#include "mppf/environment.hpp"
#include "mppf/escape.hpp"
#include "mppf/geometry.hpp"
#include "mppf/potentials.hpp"
#include "mppf/sawtooth.hpp"

namespace mppf {

inline constexpr int kSchemaVersion = 1;
inline constexpr const char* kRngName = "mt19937_64";

struct RandomObstacles {
  std::size_t count = 0;
  double radius_min = 0.5;
  double radius_max = 7.0;
  double speed_min = 0.0;
  double speed_max = 0.0;
  std::uint64_t seed = 1;
  double clearance = 5.0;  // keep-out gap around start and end [m]
};

struct Scenario {
  int schema_version = kSchemaVersion;
  std::string name = "unnamed";
  Vec3 start{10.0, 10.0, 0.0};
  Vec3 end{90.0, 90.0, 0.0};
  double initial_heading = 0.0;  // [rad]
  GliderSpec glider;
  SawtoothParams sawtooth;
  PotentialParams potentials;
  EscapeConfig escape;
  SonarModel sonar;
  Bounds bounds;
  std::vector<Obstacle> obstacles;
  std::optional<RandomObstacles> random_obstacles;
  std::optional<VortexFlow> flow;
  PotentialMode planner_mode = PotentialMode::advanced;
  double dt = 1.0;
  std::size_t max_steps = 3000;
  double replan_cross_track = 3.0;  // [m]
};

class ScenarioError : public std::runtime_error {
 public:
  explicit ScenarioError(std::vector<std::string> problems)
      : std::runtime_error(join(problems)), problems_(std::move(problems)) {}

  const std::vector<std::string>& problems() const { return problems_; }

 private:
  static std::string join(const std::vector<std::string>& p) {
    std::string s = "invalid scenario:";
    for (const auto& e : p) s += "\n  " + e;
    return s;
  }
  std::vector<std::string> problems_;
};

/// Uniform double in [0, 1) from the top 53 bits; identical on every
/// platform, unlike std::uniform_real_distribution.
inline double unit_uniform(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

inline double uniform(std::mt19937_64& rng, double lo, double hi) {
  return lo + (hi - lo) * unit_uniform(rng);
}

inline std::vector<Obstacle> generate_obstacles(const RandomObstacles& spec, const Bounds& b,
                                                const Vec3& start, const Vec3& end) {
  std::mt19937_64 rng(spec.seed);
  std::vector<Obstacle> out;
  constexpr int kMaxAttempts = 1000;
  while (out.size() < spec.count) {
    Obstacle o;
    int attempt = 0;
    do {
      if (++attempt > kMaxAttempts) {
        throw ScenarioError({"random_obstacles: cannot place obstacle " +
                             std::to_string(out.size()) + " clear of start/end"});
      }
      o.radius = uniform(rng, spec.radius_min, spec.radius_max);
      o.center = {uniform(rng, b.lo.x, b.hi.x), uniform(rng, b.lo.y, b.hi.y),
                  uniform(rng, b.lo.z, b.hi.z)};
    } while (surface_distance(o, start) < spec.clearance ||
             surface_distance(o, end) < spec.clearance);
    const double speed = uniform(rng, spec.speed_min, spec.speed_max);
    const double heading = uniform(rng, -kPi, kPi);
    o.velocity = {speed * std::cos(heading), speed * std::sin(heading), 0.0};
    out.push_back(o);
  }
  return out;
}

/// Explicit obstacles followed by the generated ones.
inline std::vector<Obstacle> realize_obstacles(const Scenario& s) {
  std::vector<Obstacle> all = s.obstacles;
  if (s.random_obstacles) {
    auto gen = generate_obstacles(*s.random_obstacles, s.bounds, s.start, s.end);
    all.insert(all.end(), gen.begin(), gen.end());
  }
  return all;
}

// JSON schema -------------------------------------------------------------

namespace detail {

using nlohmann::json;

class Reader {
 public:
  explicit Reader(std::vector<std::string>& errors) : errors_(errors) {}

  void check_keys(const json& j, const std::string& where, std::set<std::string> allowed) {
    if (!j.is_object()) {
      errors_.push_back(where + ": expected an object");
      return;
    }
    for (const auto& [k, v] : j.items()) {
      if (!allowed.count(k)) errors_.push_back(where + "." + k + ": unknown field");
    }
  }

  void number(const json& j, const std::string& where, const char* key, double& out) {
    if (!j.contains(key)) return;
    if (!j[key].is_number()) {
      errors_.push_back(where + "." + key + ": expected a number");
      return;
    }
    out = j[key].get<double>();
  }

  void angle(const json& j, const std::string& where, const char* key, double& out) {
    double deg = rad2deg(out);
    const bool had = j.contains(key);
    number(j, where, key, deg);
    if (had) out = deg2rad(deg);
  }

  template <typename Int>
  void integer(const json& j, const std::string& where, const char* key, Int& out) {
    if (!j.contains(key)) return;
    if (!j[key].is_number_integer() || j[key].get<long long>() < 0) {
      errors_.push_back(where + "." + key + ": expected a non-negative integer");
      return;
    }
    out = j[key].get<Int>();
  }

  void vec3(const json& j, const std::string& where, const char* key, Vec3& out) {
    if (!j.contains(key)) return;
    const json& v = j[key];
    if (!v.is_array() || v.size() != 3 || !v[0].is_number() || !v[1].is_number() ||
        !v[2].is_number()) {
      errors_.push_back(where + "." + key + ": expected [x, y, z]");
      return;
    }
    out = {v[0].get<double>(), v[1].get<double>(), v[2].get<double>()};
  }

  void range(const json& j, const std::string& where, const char* key, double& lo, double& hi) {
    if (!j.contains(key)) return;
    const json& v = j[key];
    if (!v.is_array() || v.size() != 2 || !v[0].is_number() || !v[1].is_number()) {
      errors_.push_back(where + "." + key + ": expected [min, max]");
      return;
    }
    lo = v[0].get<double>();
    hi = v[1].get<double>();
  }

  void fail(std::string msg) { errors_.push_back(std::move(msg)); }

 private:
  std::vector<std::string>& errors_;
};

inline json vec_json(const Vec3& v) { return json::array({v.x, v.y, v.z}); }

}  // namespace detail

inline const char* to_string(PotentialMode m) {
  return m == PotentialMode::baseline ? "baseline" : "advanced";
}

inline std::optional<PotentialMode> parse_mode(const std::string& s) {
  if (s == "baseline") return PotentialMode::baseline;
  if (s == "advanced") return PotentialMode::advanced;
  return std::nullopt;
}

/// Semantic checks on a fully resolved scenario.
inline std::vector<std::string> validate(const Scenario& s) {
  std::vector<std::string> e;
  if (s.schema_version != kSchemaVersion) {
    e.push_back("schema_version: unsupported version " + std::to_string(s.schema_version));
  }
  if (!is_finite(s.start) || !s.bounds.contains(s.start)) e.push_back("start: outside bounds");
  if (!is_finite(s.end) || !s.bounds.contains(s.end)) e.push_back("end: outside bounds");
  if (s.start == s.end) e.push_back("end: coincides with start");
  if (s.start.z > s.glider.d_max) e.push_back("start: deeper than glider.d_max");
  if (s.end.z > s.glider.d_max) e.push_back("end: deeper than glider.d_max");
  if (!(s.dt > 0.0)) e.push_back("dt: must be > 0");
  if (s.max_steps == 0) e.push_back("max_steps: must be > 0");
  if (!s.glider.valid()) e.push_back("glider: out-of-range parameter");
  if (!s.sawtooth.valid()) e.push_back("sawtooth: out-of-range parameter");
  if (!s.potentials.valid()) e.push_back("potentials: gains must be >= 0, psi_max in [0, 90)");
  if (!s.escape.valid()) e.push_back("escape: parameters must be > 0");
  if (!s.sonar.valid()) e.push_back("sonar: out-of-range parameter");
  if (!(s.replan_cross_track > 0.0)) e.push_back("replan_cross_track: must be > 0");
  for (std::size_t i = 0; i < s.obstacles.size(); ++i) {
    const auto& o = s.obstacles[i];
    const std::string where = "obstacles[" + std::to_string(i) + "]";
    if (!(o.radius > 0.0)) e.push_back(where + ".radius: must be > 0");
    if (!s.bounds.contains(o.center)) e.push_back(where + ".center: outside bounds");
    if (o.shape == ObstacleShape::vertical_cylinder && !(o.velocity == Vec3{})) {
      e.push_back(where + ".velocity: cylinders are static");
    }
  }
  if (s.random_obstacles) {
    const auto& r = *s.random_obstacles;
    if (!(r.radius_min > 0.0 && r.radius_min <= r.radius_max)) {
      e.push_back("random_obstacles.radius: need 0 < min <= max");
    }
    if (!(r.speed_min >= 0.0 && r.speed_min <= r.speed_max)) {
      e.push_back("random_obstacles.speed: need 0 <= min <= max");
    }
    if (r.clearance < 0.0) e.push_back("random_obstacles.clearance: must be >= 0");
  }
  if (s.flow && !s.flow->valid()) e.push_back("flow: amplitude >= 0 and cell_size > 0 required");
  return e;
}

/// Parses a scenario document; built-in defaults fill every omitted field.
/// Throws ScenarioError listing every offending field.
inline Scenario scenario_from_json(const nlohmann::json& j) {
  using detail::json;
  std::vector<std::string> errors;
  detail::Reader r(errors);
  Scenario s;
  r.check_keys(j, "scenario",
               {"schema_version", "name", "start", "end", "initial_heading_deg", "planner_mode",
                "dt", "max_steps", "replan_cross_track", "glider", "sawtooth", "potentials",
                "escape", "sonar", "bounds", "obstacles", "random_obstacles", "flow"});
  if (!j.is_object()) throw ScenarioError(errors);

  if (!j.contains("schema_version")) {
    r.fail("schema_version: missing");
  } else {
    r.integer(j, "scenario", "schema_version", s.schema_version);
  }
  if (j.contains("name")) {
    if (j["name"].is_string()) {
      s.name = j["name"].get<std::string>();
    } else {
      r.fail("scenario.name: expected a string");
    }
  }
  r.vec3(j, "scenario", "start", s.start);
  r.vec3(j, "scenario", "end", s.end);
  r.angle(j, "scenario", "initial_heading_deg", s.initial_heading);
  r.number(j, "scenario", "dt", s.dt);
  r.integer(j, "scenario", "max_steps", s.max_steps);
  r.number(j, "scenario", "replan_cross_track", s.replan_cross_track);
  if (j.contains("planner_mode")) {
    const auto m = j["planner_mode"].is_string()
                       ? parse_mode(j["planner_mode"].get<std::string>())
                       : std::nullopt;
    if (m) {
      s.planner_mode = *m;
    } else {
      r.fail("scenario.planner_mode: expected \"baseline\" or \"advanced\"");
    }
  }
  if (j.contains("bounds")) {
    r.vec3(j, "scenario", "bounds", s.bounds.hi);
  }

  if (j.contains("glider")) {
    const json& g = j["glider"];
    r.check_keys(g, "glider",
                 {"psi_m_deg", "theta_max_deg", "speed_down", "speed_up", "body_radius", "d_max"});
    r.angle(g, "glider", "psi_m_deg", s.glider.psi_m);
    r.angle(g, "glider", "theta_max_deg", s.glider.theta_max);
    r.number(g, "glider", "speed_down", s.glider.speed_down);
    r.number(g, "glider", "speed_up", s.glider.speed_up);
    r.number(g, "glider", "body_radius", s.glider.body_radius);
    r.number(g, "glider", "d_max", s.glider.d_max);
  }

  s.sawtooth.z_max = s.bounds.hi.z;
  if (j.contains("sawtooth")) {
    const json& w = j["sawtooth"];
    r.check_keys(w, "sawtooth", {"z_max", "z_t", "arrival_radius", "stride_formula"});
    r.number(w, "sawtooth", "z_max", s.sawtooth.z_max);
    r.number(w, "sawtooth", "z_t", s.sawtooth.z_t);
    r.number(w, "sawtooth", "arrival_radius", s.sawtooth.arrival_radius);
    if (w.contains("stride_formula")) {
      const json& f = w["stride_formula"];
      if (f == "tangent") {
        s.sawtooth.stride = StrideFormula::tangent;
      } else if (f == "literal") {
        s.sawtooth.stride = StrideFormula::literal;
      } else {
        r.fail("sawtooth.stride_formula: expected \"tangent\" or \"literal\"");
      }
    }
  }
  s.sawtooth.d_max = s.glider.d_max;
  s.sawtooth.theta_max = s.glider.theta_max;

  s.potentials.psi_max = s.glider.psi_m;
  if (j.contains("potentials")) {
    const json& p = j["potentials"];
    r.check_keys(p, "potentials", {"xi", "eta", "tau", "kappa", "psi_max_deg"});
    r.number(p, "potentials", "xi", s.potentials.xi);
    r.number(p, "potentials", "eta", s.potentials.eta);
    r.number(p, "potentials", "tau", s.potentials.tau);
    r.number(p, "potentials", "kappa", s.potentials.kappa);
    r.angle(p, "potentials", "psi_max_deg", s.potentials.psi_max);
  }

  s.escape.step_radius = s.glider.speed_down * s.dt;
  std::optional<double> epsilon;
  if (j.contains("escape")) {
    const json& e = j["escape"];
    r.check_keys(e, "escape",
                 {"vertical_speed", "window", "progress_epsilon", "surface_margin",
                  "residual_decay", "cz_scale"});
    r.number(e, "escape", "vertical_speed", s.escape.vertical_speed);
    r.integer(e, "escape", "window", s.escape.window);
    r.number(e, "escape", "surface_margin", s.escape.surface_margin);
    r.number(e, "escape", "residual_decay", s.escape.residual_decay);
    r.number(e, "escape", "cz_scale", s.escape.cz_scale);
    if (e.contains("progress_epsilon")) {
      double v = 0.0;
      r.number(e, "escape", "progress_epsilon", v);
      epsilon = v;
    }
  }
  s.escape.progress_epsilon =
      epsilon.value_or(0.1 * s.escape.step_radius * static_cast<double>(s.escape.window));

  if (j.contains("sonar")) {
    const json& n = j["sonar"];
    r.check_keys(n, "sonar", {"range", "horizontal_fov_deg", "vertical_fov_deg", "memory"});
    r.number(n, "sonar", "memory", s.sonar.memory);
    r.number(n, "sonar", "range", s.sonar.range);
    r.angle(n, "sonar", "horizontal_fov_deg", s.sonar.horizontal_fov);
    r.angle(n, "sonar", "vertical_fov_deg", s.sonar.vertical_fov);
  }

  if (j.contains("obstacles")) {
    if (!j["obstacles"].is_array()) {
      r.fail("scenario.obstacles: expected an array");
    } else {
      std::size_t i = 0;
      for (const json& o : j["obstacles"]) {
        const std::string where = "obstacles[" + std::to_string(i++) + "]";
        r.check_keys(o, where, {"shape", "center", "radius", "velocity"});
        if (!o.is_object()) continue;
        Obstacle ob;
        const std::string shape = o.value("shape", std::string("sphere"));
        if (shape == "cylinder") {
          ob.shape = ObstacleShape::vertical_cylinder;
        } else if (shape != "sphere") {
          r.fail(where + ".shape: expected \"sphere\" or \"cylinder\"");
        }
        if (!o.contains("center")) r.fail(where + ".center: missing");
        if (!o.contains("radius")) r.fail(where + ".radius: missing");
        r.vec3(o, where, "center", ob.center);
        r.number(o, where, "radius", ob.radius);
        r.vec3(o, where, "velocity", ob.velocity);
        s.obstacles.push_back(ob);
      }
    }
  }

  if (j.contains("random_obstacles")) {
    const json& g = j["random_obstacles"];
    r.check_keys(g, "random_obstacles", {"count", "radius", "speed", "seed", "clearance"});
    RandomObstacles ro;
    r.integer(g, "random_obstacles", "count", ro.count);
    r.range(g, "random_obstacles", "radius", ro.radius_min, ro.radius_max);
    r.range(g, "random_obstacles", "speed", ro.speed_min, ro.speed_max);
    r.integer(g, "random_obstacles", "seed", ro.seed);
    r.number(g, "random_obstacles", "clearance", ro.clearance);
    s.random_obstacles = ro;
  }

  if (j.contains("flow") && !j["flow"].is_null()) {
    const json& f = j["flow"];
    r.check_keys(f, "flow", {"amplitude", "cell_size", "z_max"});
    VortexFlow vf;
    vf.z_max = s.bounds.hi.z;
    r.number(f, "flow", "amplitude", vf.amplitude);
    r.number(f, "flow", "cell_size", vf.cell_size);
    r.number(f, "flow", "z_max", vf.z_max);
    s.flow = vf;
  }

  if (errors.empty()) {
    auto semantic = validate(s);
    errors.insert(errors.end(), semantic.begin(), semantic.end());
  }
  if (!errors.empty()) throw ScenarioError(errors);
  return s;
}

inline Scenario load_scenario(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ScenarioError({path + ": cannot open"});
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::parse_error& e) {
    throw ScenarioError({path + ": " + e.what()});
  }
  return scenario_from_json(j);
}

/// Fully resolved scenario, every default written out.
inline nlohmann::json to_json(const Scenario& s) {
  using detail::json;
  using detail::vec_json;
  json j;
  j["schema_version"] = s.schema_version;
  j["name"] = s.name;
  j["start"] = vec_json(s.start);
  j["end"] = vec_json(s.end);
  j["initial_heading_deg"] = rad2deg(s.initial_heading);
  j["planner_mode"] = to_string(s.planner_mode);
  j["dt"] = s.dt;
  j["max_steps"] = s.max_steps;
  j["replan_cross_track"] = s.replan_cross_track;
  j["bounds"] = vec_json(s.bounds.hi);
  j["glider"] = {{"psi_m_deg", rad2deg(s.glider.psi_m)},
                 {"theta_max_deg", rad2deg(s.glider.theta_max)},
                 {"speed_down", s.glider.speed_down},
                 {"speed_up", s.glider.speed_up},
                 {"body_radius", s.glider.body_radius},
                 {"d_max", s.glider.d_max}};
  j["sawtooth"] = {{"z_max", s.sawtooth.z_max},
                   {"z_t", s.sawtooth.z_t},
                   {"arrival_radius", s.sawtooth.arrival_radius},
                   {"stride_formula",
                    s.sawtooth.stride == StrideFormula::tangent ? "tangent" : "literal"}};
  j["potentials"] = {{"xi", s.potentials.xi},
                     {"eta", s.potentials.eta},
                     {"tau", s.potentials.tau},
                     {"kappa", s.potentials.kappa},
                     {"psi_max_deg", rad2deg(s.potentials.psi_max)}};
  j["escape"] = {{"vertical_speed", s.escape.vertical_speed},
                 {"window", s.escape.window},
                 {"progress_epsilon", s.escape.progress_epsilon},
                 {"surface_margin", s.escape.surface_margin},
                 {"residual_decay", s.escape.residual_decay},
                 {"cz_scale", s.escape.cz_scale}};
  j["sonar"] = {{"range", s.sonar.range},
                {"horizontal_fov_deg", rad2deg(s.sonar.horizontal_fov)},
                {"vertical_fov_deg", rad2deg(s.sonar.vertical_fov)},
                {"memory", s.sonar.memory}};
  j["obstacles"] = json::array();
  for (const auto& o : s.obstacles) {
    j["obstacles"].push_back(
        {{"shape", o.shape == ObstacleShape::sphere ? "sphere" : "cylinder"},
         {"center", vec_json(o.center)},
         {"radius", o.radius},
         {"velocity", vec_json(o.velocity)}});
  }
  if (s.random_obstacles) {
    const auto& r = *s.random_obstacles;
    j["random_obstacles"] = {{"count", r.count},
                             {"radius", {r.radius_min, r.radius_max}},
                             {"speed", {r.speed_min, r.speed_max}},
                             {"seed", r.seed},
                             {"clearance", r.clearance}};
  }
  if (s.flow) {
    j["flow"] = {{"amplitude", s.flow->amplitude},
                 {"cell_size", s.flow->cell_size},
                 {"z_max", s.flow->z_max}};
  }
  return j;
}

/// FNV-1a over the canonical JSON text of the resolved scenario.
inline std::string scenario_hash(const Scenario& s) {
  const std::string text = to_json(s).dump();
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : text) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  std::ostringstream os;
  os << std::hex;
  os.width(16);
  os.fill('0');
  os << h;
  return os.str();
}

}  // namespace mppf
