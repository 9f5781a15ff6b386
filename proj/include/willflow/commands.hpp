#pragma once
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "flow.hpp"
#include "generators.hpp"
#include "minimize.hpp"
#include "svg.hpp"
#include "varifold.hpp"

namespace willflow {

using json = nlohmann::json;

//! Exit codes of the command-line tool.
enum Exit : int { exit_ok = 0, exit_error = 1, exit_singular = 2, exit_max_steps = 3, exit_no_certificate = 4 };

struct RunSpec {
  std::string command;
  json doc;
  std::filesystem::path base_dir; // directory of the config file
  std::filesystem::path out_dir = "out";
  std::uint64_t seed = 0;
  bool quiet = false;
  FlowConfig flow;
  MinimizeBudget budget;
};

namespace cfg {

inline const json &need(const json &j, const std::string &key, const std::string &path) {
  if (!j.is_object() || !j.contains(key))
    throw ConfigError(path + key, "missing");
  return j.at(key);
}

inline double number(const json &j, const std::string &path) {
  if (!j.is_number())
    throw ConfigError(path, "expected a number");
  return j.get<double>();
}

template <class T> T get_or(const json &j, const std::string &key, T dflt, const std::string &path) {
  if (!j.is_object() || !j.contains(key))
    return dflt;
  const json &v = j.at(key);
  try {
    if constexpr (std::is_same_v<T, bool>) {
      if (!v.is_boolean())
        throw ConfigError(path + key, "expected a boolean");
    } else if constexpr (std::is_arithmetic_v<T>) {
      if (!v.is_number())
        throw ConfigError(path + key, "expected a number");
      if constexpr (std::is_integral_v<T>) {
        const double d = v.get<double>();
        if (d != std::floor(d))
          throw ConfigError(path + key, "expected an integer");
      }
    } else if (!v.is_string()) {
      throw ConfigError(path + key, "expected a string");
    }
    return v.get<T>();
  } catch (const json::exception &e) {
    throw ConfigError(path + key, e.what());
  }
}

inline HPoint point(const json &j, const std::string &path) {
  if (!j.is_array() || j.size() != 2)
    throw ConfigError(path, "expected [a, r]");
  const HPoint p{number(j[0], path + "[0]"), number(j[1], path + "[1]")};
  if (!(p.r > 0.0))
    throw ConfigError(path, "height must be positive");
  return p;
}

inline UnitDir direction(const json &j, const std::string &path) {
  try {
    if (j.is_number())
      return UnitDir::from_angle(j.get<double>());
    if (j.is_array() && j.size() == 2)
      return UnitDir::normalized(number(j[0], path + "[0]"), number(j[1], path + "[1]"));
  } catch (const std::invalid_argument &e) {
    throw ConfigError(path, e.what());
  }
  throw ConfigError(path, "expected an angle or [x, y]");
}

inline ClampedBoundary boundary(const json &doc) {
  const json &b = need(doc, "boundary", "");
  if (b.contains("zone")) {
    const json &z = b["zone"];
    return zone_boundary(get_or(z, "center", 0.0, "boundary.zone."), get_or(z, "radius", 1.0, "boundary.zone."),
                         number(need(z, "theta0", "boundary.zone."), "boundary.zone.theta0"),
                         number(need(z, "theta1", "boundary.zone."), "boundary.zone.theta1"));
  }
  if (b.contains("catenoid")) {
    const json &z = b["catenoid"];
    const double c = get_or(z, "c", 1.0, "boundary.catenoid.");
    if (!(c > 0.0))
      throw ConfigError("boundary.catenoid.c", "must be positive");
    return catenoid_boundary(c, get_or(z, "a_star", 0.0, "boundary.catenoid."),
                             number(need(z, "a0", "boundary.catenoid."), "boundary.catenoid.a0"),
                             number(need(z, "a1", "boundary.catenoid."), "boundary.catenoid.a1"));
  }
  if (b.contains("dumbbell")) {
    const json &z = b["dumbbell"];
    return dumbbell_boundary(get_or(z, "radius", 1.0, "boundary.dumbbell."),
                             number(need(z, "waist", "boundary.dumbbell."), "boundary.dumbbell.waist"),
                             get_or(z, "theta", 1.2, "boundary.dumbbell."));
  }
  return {point(need(b, "p0", "boundary."), "boundary.p0"), point(need(b, "p1", "boundary."), "boundary.p1"),
          direction(need(b, "tau0", "boundary."), "boundary.tau0"),
          direction(need(b, "tau1", "boundary."), "boundary.tau1")};
}

inline FlowConfig flow_config(const json &doc) {
  FlowConfig c;
  if (!doc.contains("flow"))
    return c;
  const json &f = doc["flow"];
  const std::string p = "flow.";
  c.N = get_or(f, "N", c.N, p);
  c.dt_init = get_or(f, "dt_init", c.dt_init, p);
  c.dt_safety = get_or(f, "dt_safety", c.dt_safety, p);
  c.dt_grow = get_or(f, "dt_grow", c.dt_grow, p);
  c.dt_max = get_or(f, "dt_max", c.dt_max, p);
  c.max_steps = get_or(f, "max_steps", c.max_steps, p);
  c.tol_grad = get_or(f, "tol_grad", c.tol_grad, p);
  c.eps_axis = get_or(f, "eps_axis", c.eps_axis, p);
  c.L_hyp_max = get_or(f, "L_hyp_max", c.L_hyp_max, p);
  c.chord_hyp_max = get_or(f, "chord_hyp_max", c.chord_hyp_max, p);
  c.chord_ratio_max = get_or(f, "chord_ratio_max", c.chord_ratio_max, p);
  c.resample_every = get_or(f, "resample_every", c.resample_every, p);
  c.stop_on_converge = get_or(f, "stop_on_converge", c.stop_on_converge, p);
  const std::string integ = get_or(f, "integrator", std::string("implicit"), p);
  if (integ == "implicit")
    c.integrator = Integrator::implicit;
  else if (integ == "rk4")
    c.integrator = Integrator::rk4;
  else
    throw ConfigError("flow.integrator", "expected \"implicit\" or \"rk4\"");
  try {
    c.validate();
  } catch (const ConfigError &e) {
    throw ConfigError(p + e.field, e.reason);
  }
  return c;
}

inline MinimizeBudget budget(const json &doc) {
  MinimizeBudget b;
  if (!doc.contains("minimize"))
    return b;
  const json &m = doc["minimize"];
  b.max_iterations = get_or(m, "max_iterations", b.max_iterations, "minimize.");
  b.polish_steps = get_or(m, "polish_steps", b.polish_steps, "minimize.");
  b.tol = get_or(m, "tol", b.tol, "minimize.");
  if (b.max_iterations < 0 || b.polish_steps < 0 || !(b.tol > 0.0))
    throw ConfigError("minimize", "budget fields must be nonnegative and tol positive");
  return b;
}

} // namespace cfg

//! Parse a JSON run specification. Errors name the offending field.
inline RunSpec parse_spec(const std::string &text, const std::filesystem::path &base_dir = ".") {
  RunSpec s;
  try {
    s.doc = json::parse(text);
  } catch (const json::parse_error &e) {
    throw ConfigError("<document>", e.what());
  }
  if (!s.doc.is_object())
    throw ConfigError("<document>", "expected a JSON object");
  s.base_dir = base_dir;
  s.command = cfg::get_or(s.doc, "command", std::string(), "");
  s.seed = cfg::get_or<std::uint64_t>(s.doc, "seed", 0, "");
  s.out_dir = cfg::get_or(s.doc, "out", std::string("out"), "");
  s.flow = cfg::flow_config(s.doc);
  s.budget = cfg::budget(s.doc);
  return s;
}

inline RunSpec load_spec(const std::filesystem::path &path) {
  std::ifstream in(path);
  if (!in)
    throw ConfigError("--config", "cannot open " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_spec(ss.str(), path.parent_path());
}

//! Initial curve from the "initial" section.
inline ProfileCurve initial_curve(const RunSpec &s, const ClampedBoundary &b) {
  const json &ini = cfg::need(s.doc, "initial", "");
  const std::string gen = cfg::get_or(ini, "generator", std::string(), "initial.");
  const int N = s.flow.N;
  auto base = [&](const std::string &name) -> ProfileCurve {
    if (name == "cap")
      return cap_curve(b, N);
    if (name == "catenoid")
      return catenoid_curve(b, N);
    if (name == "graph")
      return graph_curve(b, N, cfg::get_or(ini, "h", 0.0, "initial."));
    if (name == "dumbbell")
      return dumbbell_curve(b, N);
    if (name == "neck")
      return neck_curve(b, N, cfg::get_or(ini, "waist", 0.0, "initial."));
    throw ConfigError("initial.generator", "unknown generator '" + name + "'");
  };
  if (gen == "file") {
    std::filesystem::path p = cfg::get_or(ini, "path", std::string(), "initial.");
    if (p.empty())
      throw ConfigError("initial.path", "missing");
    if (p.is_relative() && !std::filesystem::exists(p))
      p = s.base_dir / p;
    std::ifstream in(p);
    if (!in)
      throw ConfigError("initial.path", "cannot open " + p.string());
    try {
      return read_curve_csv(in);
    } catch (const ConfigError &) {
      throw;
    } catch (const std::exception &e) {
      throw ConfigError("initial.path", e.what());
    }
  }
  if (gen == "perturbed") {
    const auto b0 = base(cfg::get_or(ini, "base", std::string("graph"), "initial."));
    return perturbed_curve(b0, b, cfg::get_or<std::uint64_t>(ini, "seed", s.seed, "initial."),
                           cfg::get_or(ini, "amplitude", 0.05, "initial."));
  }
  return base(gen);
}

namespace detail {

inline void write_text(const std::filesystem::path &p, const std::string &text) {
  std::ofstream os(p, std::ios::binary);
  if (!os)
    throw Error("cannot write " + p.string());
  os << text;
}

inline std::string csv_of(const ProfileCurve &c) {
  std::ostringstream os;
  write_curve_csv(os, c);
  return os.str();
}

inline json finite_or_null(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

inline void emit(const RunSpec &s, const json &j) {
  if (!s.quiet)
    std::cout << j.dump(2) << '\n';
}

} // namespace detail

inline json to_json(const ThresholdReport &r) {
  return {{"T", r.t_tau},
          {"c_ly_rot", r.c_ly_rot},
          {"h_star", detail::finite_or_null(r.h_star)},
          {"c_ly", r.c_ly},
          {"z_axial", detail::finite_or_null(r.z_axial)},
          {"z_dist", detail::finite_or_null(r.z_dist)}};
}

inline json to_json(const GateReport &g) {
  return {{"W0", g.W0}, {"threshold", g.threshold}, {"satisfied", g.satisfied}, {"margin", g.margin}};
}

inline int cmd_thresholds(const RunSpec &s) {
  const auto b = cfg::boundary(s.doc);
  const auto r = threshold_report(b);
  std::filesystem::create_directories(s.out_dir);
  const json j = to_json(r);
  detail::write_text(s.out_dir / "thresholds.json", j.dump(2) + "\n");
  const auto cs = boundary_circles(b);
  const auto w = axial_window(cs, 3.0);
  svg::Series ser;
  for (int k = 0; k < 512; ++k) {
    const double h = w.lo + (w.hi - w.lo) * k / 511.0;
    ser.x.push_back(h);
    ser.y.push_back(axial_bracket(cs, h));
  }
  std::optional<double> mark;
  if (std::isfinite(r.h_star))
    mark = r.h_star;
  detail::write_text(s.out_dir / "bracket.svg",
                     svg::line_plot("axial boundary bracket", "h", "bracket / 2pi", ser, mark));
  detail::emit(s, j);
  return exit_ok;
}

inline int flow_exit_code(Outcome o) {
  switch (o) {
  case Outcome::Converged:
    return exit_ok;
  case Outcome::SingularitySuspected:
    return exit_singular;
  default:
    return exit_max_steps;
  }
}

inline int cmd_flow(const RunSpec &s) {
  const auto b = cfg::boundary(s.doc);
  const auto init = initial_curve(s, b);
  require_boundary(init, b);
  const auto res = run(init, b, s.flow);
  std::filesystem::create_directories(s.out_dir);
  detail::write_text(s.out_dir / "gate.json", to_json(res.gate_report).dump(2) + "\n");
  std::ostringstream tr;
  write_trace_csv(tr, res.trace);
  detail::write_text(s.out_dir / "trace.csv", tr.str());
  detail::write_text(s.out_dir / "final_curve.csv", detail::csv_of(res.final_state.curve));
  const auto &d = res.final_diagnostics;
  json sum = {{"outcome", to_string(res.outcome)},
              {"steps", res.final_state.step_count},
              {"t", res.final_state.t},
              {"rejections", res.trace.rejections},
              {"resamples", res.trace.resamples},
              {"descent_violations", res.trace.descent_violations},
              {"gate", to_json(res.gate_report)},
              {"final",
               {{"W", d.W},
                {"E", d.E},
                {"grad_norm", d.grad_norm},
                {"min_height", d.min_height},
                {"min_index", d.min_index},
                {"verticality", d.verticality},
                {"L_euc", d.L_euc},
                {"L_hyp", d.L_hyp},
                {"chord_hyp", d.chord_hyp}}}};
  if (res.outcome == Outcome::Converged) {
    sum["final_residual"] = res.final_residual;
    if (res.li_yau)
      sum["li_yau"] = {{"passes", res.li_yau->passes},
                       {"margin", res.li_yau->margin},
                       {"densities_ok", res.li_yau->densities_ok},
                       {"samples", res.li_yau->densities.size()}};
  }
  detail::write_text(s.out_dir / "summary.json", sum.dump(2) + "\n");
  svg::Series W, Lh, mh;
  for (std::size_t k = 0; k < res.trace.records.size(); ++k) {
    const auto &r = res.trace.records[k];
    W.x.push_back(k);
    W.y.push_back(r.W);
    Lh.x.push_back(k);
    Lh.y.push_back(r.L_hyp);
    mh.x.push_back(k);
    mh.y.push_back(r.min_height);
  }
  detail::write_text(s.out_dir / "W.svg", svg::line_plot("Willmore energy", "accepted step", "W", W));
  detail::write_text(s.out_dir / "L_hyp.svg", svg::line_plot("hyperbolic length", "accepted step", "L_hyp", Lh));
  detail::write_text(s.out_dir / "min_height.svg", svg::line_plot("minimum height", "accepted step", "min r", mh));
  detail::emit(s, sum);
  return flow_exit_code(res.outcome);
}

inline int minimize_exit_code(Verdict v) { return v == Verdict::BelowThreshold ? exit_ok : exit_no_certificate; }

inline int cmd_minimize(const RunSpec &s) {
  const auto b = cfg::boundary(s.doc);
  const auto init = initial_curve(s, b);
  const auto r = minimize_elastic(b, init, s.budget);
  std::filesystem::create_directories(s.out_dir);
  const json j = {{"M_estimate", r.M_estimate},   {"residual", r.residual},
                  {"verdict", to_string(r.verdict)}, {"iterations", r.iterations},
                  {"polish_steps", r.polish_steps}, {"budget_exhausted", r.budget_exhausted},
                  {"threshold", r.threshold}};
  detail::write_text(s.out_dir / "result.json", j.dump(2) + "\n");
  detail::write_text(s.out_dir / "final_curve.csv", detail::csv_of(r.curve));
  detail::emit(s, j);
  return minimize_exit_code(r.verdict);
}

inline std::vector<double> radii_of(const json &a) {
  if (!a.contains("radii"))
    throw ConfigError("analyze.radii", "missing");
  const json &r = a["radii"];
  std::vector<double> out;
  if (r.is_array()) {
    for (std::size_t k = 0; k < r.size(); ++k)
      out.push_back(cfg::number(r[k], "analyze.radii[" + std::to_string(k) + "]"));
  } else {
    const double lo = cfg::number(cfg::need(r, "t_min", "analyze.radii."), "analyze.radii.t_min");
    const double hi = cfg::number(cfg::need(r, "t_max", "analyze.radii."), "analyze.radii.t_max");
    const int n = cfg::get_or(r, "count", 32, "analyze.radii.");
    if (!(lo > 0.0 && hi > lo && n >= 2))
      throw ConfigError("analyze.radii", "need 0 < t_min < t_max and count >= 2");
    out = log_radii(lo, hi, n);
  }
  for (std::size_t k = 0; k < out.size(); ++k)
    if (!(out[k] > 0.0) || (k > 0 && !(out[k] > out[k - 1])))
      throw ConfigError("analyze.radii", "radii must be positive and increasing");
  return out;
}

inline int cmd_analyze(const RunSpec &s) {
  const json &a = cfg::need(s.doc, "analyze", "");
  const std::string kind = cfg::get_or(a, "surface", std::string("initial"), "analyze.");
  Varifold V;
  if (kind == "sphere") {
    const json sp = a.value("sphere", json::object());
    const double R = cfg::get_or(sp, "radius", 1.0, "analyze.sphere.");
    const int N = cfg::get_or(sp, "N", 1024, "analyze.sphere.");
    if (!(R > 0.0) || N < 16)
      throw ConfigError("analyze.sphere", "need radius > 0 and N >= 16");
    V = make_varifold(revolve(sphere_curve(N, R, cfg::get_or(sp, "center", 0.0, "analyze.sphere."))));
  } else if (kind == "initial") {
    const auto b = cfg::boundary(s.doc);
    const auto c = initial_curve(s, b);
    require_boundary(c, b);
    V = make_varifold(revolve(c), b);
  } else {
    throw ConfigError("analyze.surface", "expected \"sphere\" or \"initial\"");
  }
  const auto radii = radii_of(a);
  const json &zs = cfg::need(a, "z", "analyze.");
  if (!zs.is_array())
    throw ConfigError("analyze.z", "expected a list of points");
  std::filesystem::create_directories(s.out_dir);
  json profiles = json::array();
  for (std::size_t k = 0; k < zs.size(); ++k) {
    const std::string path = "analyze.z[" + std::to_string(k) + "]";
    if (!zs[k].is_array() || zs[k].size() != 3)
      throw ConfigError(path, "expected [x, y, z]");
    const Vec3 z{cfg::number(zs[k][0], path), cfg::number(zs[k][1], path), cfg::number(zs[k][2], path)};
    json entry = {{"z", {z.x, z.y, z.z}}};
    try {
      const auto p = simon_profile(V, z, radii);
      std::ostringstream os;
      write_profile_csv(os, p);
      detail::write_text(s.out_dir / ("profile_" + std::to_string(k) + ".csv"), os.str());
      detail::write_text(s.out_dir / ("A_" + std::to_string(k) + ".svg"),
                         svg::line_plot("monotone quantity A_z(t)", "t", "A", {p.radii, p.A_values}));
      double drop = 0.0;
      for (std::size_t i = 1; i < p.A_values.size(); ++i)
        drop = std::max(drop, p.A_values[i - 1] - p.A_values[i]);
      entry["theta_hat"] = p.theta_hat;
      entry["A_first"] = p.A_values.front();
      entry["A_last"] = p.A_values.back();
      entry["max_decrease"] = drop;
    } catch (const SingularPoint &e) {
      entry["error"] = e.what();
    }
    profiles.push_back(entry);
  }
  const auto ly = li_yau_check(V, Region::axis);
  json sum = {{"willmore", V.willmore()},
              {"profiles", profiles},
              {"li_yau",
               {{"passes", ly.passes},
                {"margin", ly.margin},
                {"densities_ok", ly.densities_ok},
                {"samples", ly.densities.size()}}}};
  detail::write_text(s.out_dir / "analyze.json", sum.dump(2) + "\n");
  detail::emit(s, sum);
  return exit_ok;
}

//! Random constructible cap configurations: p in [-1, 1] x [0.2, 2], tangent
//! angle bounded away from vertical.
inline std::vector<std::tuple<HPoint, UnitDir, int>> random_caps(std::uint64_t seed, int count) {
  std::mt19937_64 g(seed);
  std::vector<std::tuple<HPoint, UnitDir, int>> out;
  while (static_cast<int>(out.size()) < count) {
    const double a = detail::unit_symmetric(g);
    const double r = 1.1 + 0.9 * detail::unit_symmetric(g);
    const double th = std::numbers::pi * detail::unit_symmetric(g);
    const int y = detail::unit_symmetric(g) < 0.0 ? 0 : 1;
    if (std::abs(std::cos(th)) < 0.1)
      continue;
    out.emplace_back(HPoint{a, r}, UnitDir::from_angle(th), y);
  }
  return out;
}

inline int cmd_caps(const RunSpec &s) {
  const json c = s.doc.value("caps", json::object());
  const int count = cfg::get_or(c, "count", 20, "caps.");
  const int N = cfg::get_or(c, "N", 1024, "caps.");
  if (count < 1 || N < 16)
    throw ConfigError("caps", "need count >= 1 and N >= 16");
  std::filesystem::create_directories(s.out_dir);
  std::ostringstream os;
  os << "a,r,tau_x,tau_y,y,lhs,rhs,h\n";
  double worst = 0.0;
  for (const auto &[p, tau, y] : random_caps(s.seed, count)) {
    const auto ci = cap_identity_check(p, tau, y, std::nullopt, N);
    worst = std::max(worst, std::abs(ci.lhs - ci.rhs));
    os << fmt17(p.a) << ',' << fmt17(p.r) << ',' << fmt17(tau.t1) << ',' << fmt17(tau.t2) << ',' << y << ','
       << fmt17(ci.lhs) << ',' << fmt17(ci.rhs) << ',' << fmt17(ci.h) << '\n';
  }
  detail::write_text(s.out_dir / "caps.csv", os.str());
  const json j = {{"count", count}, {"N", N}, {"seed", s.seed}, {"max_abs_diff", worst}};
  detail::write_text(s.out_dir / "caps.json", j.dump(2) + "\n");
  detail::emit(s, j);
  return exit_ok;
}

//! Dispatch; scientific outcomes map to exit codes, errors to exit_error.
inline int dispatch(const RunSpec &s, std::ostream &err = std::cerr) {
  try {
    if (s.command == "thresholds")
      return cmd_thresholds(s);
    if (s.command == "flow")
      return cmd_flow(s);
    if (s.command == "minimize")
      return cmd_minimize(s);
    if (s.command == "analyze")
      return cmd_analyze(s);
    if (s.command == "caps")
      return cmd_caps(s);
    throw ConfigError("command", "unknown command '" + s.command + "'");
  } catch (const std::exception &e) {
    err << "error: " << e.what() << '\n';
    return exit_error;
  }
}

} // namespace willflow
