#pragma once

// File outputs of a run: trajectory CSV, JSON summary and SVG plots.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <limits>
#include <sstream>
#include <stdexcept>
#include <string>

#include "json.hpp"
#include "mppf/scenario.hpp"
#include "mppf/simulation.hpp"

namespace mppf {

class OutputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline constexpr const char* kTrajectoryHeader = "t,x,y,z,psi_deg,theta_deg,mode,u_min";

namespace detail {

inline std::string fixed6(double v) {
  if (std::isnan(v)) return "nan";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6f", v);
  // "-0.000000" and "0.000000" must not depend on the sign of a rounded zero.
  if (std::string_view(buf) == "-0.000000") return "0.000000";
  return buf;
}

inline std::ofstream open_for_write(const std::filesystem::path& p) {
  std::ofstream out(p, std::ios::binary);
  if (!out) throw OutputError("cannot write " + p.string());
  return out;
}

}  // namespace detail

inline void write_trajectory_csv(const RunResult& r, std::ostream& out) {
  out << kTrajectoryHeader << '\n';
  for (const auto& s : r.trajectory) {
    out << detail::fixed6(s.t) << ',' << detail::fixed6(s.position.x) << ','
        << detail::fixed6(s.position.y) << ',' << detail::fixed6(s.position.z) << ','
        << detail::fixed6(rad2deg(s.attitude.psi)) << ','
        << detail::fixed6(rad2deg(s.attitude.theta)) << ',' << to_string(s.mode) << ','
        << detail::fixed6(s.potential) << '\n';
  }
}

/// Summary document: every RunResult scalar plus provenance fields.
inline nlohmann::json summary_json(const RunResult& r, const Scenario& s) {
  nlohmann::json j;
  j["reached"] = r.reached;
  j["time_cost"] = r.time_cost;
  j["drift"] = r.drift;
  // JSON has no infinity; an obstacle-free run stores null.
  j["min_clearance"] = std::isfinite(r.min_clearance) ? nlohmann::json(r.min_clearance)
                                                      : nlohmann::json(nullptr);
  j["collision"] = r.collision;
  j["replans"] = r.replans;
  j["escapes"] = r.escapes;
  j["steps"] = r.steps;
  j["termination"] = to_string(r.termination);
  j["diagnostic"] = r.diagnostic;
  j["scenario_hash"] = scenario_hash(s);
  j["scenario_name"] = s.name;
  j["planner_mode"] = to_string(s.planner_mode);
  j["rng"] = kRngName;
  return j;
}

/// Scalars of a RunResult read back from a summary document.
inline RunResult parse_summary(const nlohmann::json& j) {
  RunResult r;
  r.reached = j.at("reached").get<bool>();
  r.time_cost = j.at("time_cost").get<double>();
  r.drift = j.at("drift").get<double>();
  r.min_clearance = j.at("min_clearance").is_null() ? std::numeric_limits<double>::infinity()
                                                    : j.at("min_clearance").get<double>();
  r.collision = j.at("collision").get<bool>();
  r.replans = j.at("replans").get<std::size_t>();
  r.escapes = j.at("escapes").get<std::size_t>();
  r.steps = j.at("steps").get<std::size_t>();
  const std::string t = j.at("termination").get<std::string>();
  for (auto k : {Termination::reached, Termination::collision, Termination::trapped,
                 Termination::max_steps}) {
    if (t == to_string(k)) r.termination = k;
  }
  r.diagnostic = j.at("diagnostic").get<std::string>();
  return r;
}

// SVG ---------------------------------------------------------------------

namespace detail {

struct SvgFrame {
  double x0, x1, y0, y1;  // data extents
  double width = 640.0, height = 480.0, margin = 40.0;
  bool flip_y = true;  // y up for the top view, depth down for the profile

  double sx(double x) const { return margin + (x - x0) / (x1 - x0) * (width - 2 * margin); }
  double sy(double y) const {
    const double f = (y - y0) / (y1 - y0);
    return flip_y ? height - margin - f * (height - 2 * margin) : margin + f * (height - 2 * margin);
  }
  double scale_x() const { return (width - 2 * margin) / (x1 - x0); }
  double scale_y() const { return (height - 2 * margin) / (y1 - y0); }
};

inline void svg_open(std::ostream& o, const SvgFrame& f, const std::string& title,
                     const std::string& xlabel, const std::string& ylabel) {
  o << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << f.width << "\" height=\""
    << f.height << "\" viewBox=\"0 0 " << f.width << ' ' << f.height << "\">\n";
  o << "<title>" << title << "</title>\n";
  o << "<rect x=\"" << f.margin << "\" y=\"" << f.margin << "\" width=\""
    << f.width - 2 * f.margin << "\" height=\"" << f.height - 2 * f.margin
    << "\" fill=\"#f4f8fb\" stroke=\"#888\"/>\n";
  o << "<text x=\"" << f.width / 2 << "\" y=\"" << f.height - 8
    << "\" text-anchor=\"middle\" font-size=\"12\">" << xlabel << "</text>\n";
  o << "<text x=\"12\" y=\"" << f.height / 2 << "\" font-size=\"12\" transform=\"rotate(-90 12 "
    << f.height / 2 << ")\" text-anchor=\"middle\">" << ylabel << "</text>\n";
}

inline void svg_polyline(std::ostream& o, const std::vector<std::pair<double, double>>& pts,
                         const SvgFrame& f, const char* colour) {
  o << "<polyline class=\"trajectory\" fill=\"none\" stroke=\"" << colour
    << "\" stroke-width=\"1.5\" points=\"";
  for (const auto& [x, y] : pts) o << fixed6(f.sx(x)) << ',' << fixed6(f.sy(y)) << ' ';
  o << "\"/>\n";
}

}  // namespace detail

/// Top view (x-y): trajectory polyline, one circle per obstacle at its
/// initial position.
inline void write_top_view_svg(const RunResult& r, const Scenario& s, std::ostream& o) {
  detail::SvgFrame f{s.bounds.lo.x, s.bounds.hi.x, s.bounds.lo.y, s.bounds.hi.y};
  detail::svg_open(o, f, s.name + " top view", "x [m]", "y [m]");
  for (const auto& ob : r.initial_obstacles) {
    o << "<ellipse class=\"obstacle\" cx=\"" << detail::fixed6(f.sx(ob.center.x)) << "\" cy=\""
      << detail::fixed6(f.sy(ob.center.y)) << "\" rx=\"" << detail::fixed6(ob.radius * f.scale_x())
      << "\" ry=\"" << detail::fixed6(ob.radius * f.scale_y())
      << "\" fill=\"#c9a27a\" fill-opacity=\"0.6\" stroke=\"#6b4f2f\"/>\n";
  }
  std::vector<std::pair<double, double>> pts;
  for (const auto& t : r.trajectory) pts.emplace_back(t.position.x, t.position.y);
  detail::svg_polyline(o, pts, f, "#1f5fa8");
  o << "<circle class=\"target\" cx=\"" << detail::fixed6(f.sx(s.end.x)) << "\" cy=\""
    << detail::fixed6(f.sy(s.end.y)) << "\" r=\"4\" fill=\"#c0392b\"/>\n";
  o << "</svg>\n";
}

/// Profile view: horizontal arc length against depth. Obstacles are drawn
/// at the arc length of the trajectory sample horizontally nearest to them.
inline void write_profile_svg(const RunResult& r, const Scenario& s, std::ostream& o) {
  std::vector<double> arc{0.0};
  for (std::size_t i = 1; i < r.trajectory.size(); ++i) {
    const Vec3 d = r.trajectory[i].position - r.trajectory[i - 1].position;
    arc.push_back(arc.back() + horizontal_norm(d));
  }
  const double length = std::max(arc.back(), 1.0);
  detail::SvgFrame f{0.0, length, s.bounds.lo.z, s.bounds.hi.z};
  f.flip_y = false;
  detail::svg_open(o, f, s.name + " profile", "horizontal distance [m]", "depth [m]");
  for (const auto& ob : r.initial_obstacles) {
    std::size_t best = 0;
    double best_d = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < r.trajectory.size(); ++i) {
      const Vec3 d = r.trajectory[i].position - ob.center;
      if (horizontal_norm(d) < best_d) {
        best_d = horizontal_norm(d);
        best = i;
      }
    }
    if (ob.shape == ObstacleShape::vertical_cylinder) {
      o << "<rect class=\"obstacle\" x=\"" << detail::fixed6(f.sx(arc[best] - ob.radius))
        << "\" y=\"" << detail::fixed6(f.sy(s.bounds.lo.z)) << "\" width=\""
        << detail::fixed6(2 * ob.radius * f.scale_x()) << "\" height=\""
        << detail::fixed6((s.bounds.hi.z - s.bounds.lo.z) * f.scale_y())
        << "\" fill=\"#c9a27a\" fill-opacity=\"0.6\" stroke=\"#6b4f2f\"/>\n";
    } else {
      o << "<ellipse class=\"obstacle\" cx=\"" << detail::fixed6(f.sx(arc[best])) << "\" cy=\""
        << detail::fixed6(f.sy(ob.center.z)) << "\" rx=\""
        << detail::fixed6(ob.radius * f.scale_x()) << "\" ry=\""
        << detail::fixed6(ob.radius * f.scale_y())
        << "\" fill=\"#c9a27a\" fill-opacity=\"0.6\" stroke=\"#6b4f2f\"/>\n";
    }
  }
  std::vector<std::pair<double, double>> pts;
  for (std::size_t i = 0; i < r.trajectory.size(); ++i) {
    pts.emplace_back(arc[i], r.trajectory[i].position.z);
  }
  detail::svg_polyline(o, pts, f, "#1f5fa8");
  o << "</svg>\n";
}

struct OutputPaths {
  std::filesystem::path directory;
  std::string stem = "run";
  bool plots = false;
};

/// Writes <stem>_trajectory.csv, <stem>_summary.json and, optionally,
/// <stem>_top.svg / <stem>_profile.svg into the output directory.
inline void emit_outputs(const RunResult& r, const Scenario& s, const OutputPaths& paths) {
  std::error_code ec;
  std::filesystem::create_directories(paths.directory, ec);
  if (ec) throw OutputError("cannot create " + paths.directory.string() + ": " + ec.message());
  const auto base = paths.directory / paths.stem;
  {
    auto out = detail::open_for_write(base.string() + "_trajectory.csv");
    write_trajectory_csv(r, out);
  }
  {
    auto out = detail::open_for_write(base.string() + "_summary.json");
    out << summary_json(r, s).dump(2) << '\n';
  }
  if (paths.plots) {
    auto top = detail::open_for_write(base.string() + "_top.svg");
    write_top_view_svg(r, s, top);
    auto profile = detail::open_for_write(base.string() + "_profile.svg");
    write_profile_svg(r, s, profile);
  }
}

}  // namespace mppf
