// One PASS/FAIL line per acceptance criterion. Exit status is the number of
// failing criteria.

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <sstream>
#include <string>

#include <willflow/commands.hpp>

#include "corpus.hpp"

using namespace willflow;
using corpus::pi;
namespace fs = std::filesystem;

namespace {

struct Check {
  bool ok = true;
  std::string detail;

  void require(bool cond, const std::string &what) {
    if (!cond) {
      ok = false;
      if (!detail.empty())
        detail += "; ";
      detail += what;
    }
  }
};

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", v);
  return buf;
}

const ClampedBoundary zone = zone_boundary(0.0, 1.0, 2.2, 0.9);
const ClampedBoundary cat = catenoid_boundary(1.0, 0.0, -1.0, 1.0);
const ClampedBoundary degenerate{{0.0, 1.0}, {0.0, 1.0}, {1.0, 0.0}, {1.0, 0.0}};
const ClampedBoundary symmetric{{-1.0, 1.0}, {1.0, 1.0}, {1.0, 0.0}, {1.0, 0.0}};

ClampedBoundary random_boundary(std::mt19937_64 &g) {
  auto u = [&] { return detail::unit_symmetric(g); };
  auto height = [&] { return 0.1 + 4.95 * (u() + 1.0); };
  return {{5 * u(), height()}, {5 * u(), height()}, UnitDir::from_angle(pi * u()), UnitDir::from_angle(pi * u())};
}

double bg_gap(const ProfileCurve &c) { return std::abs(willmore_energy(revolve(c)) - bryant_griffiths(c)); }

Check identity() {
  Check v;
  double worst = 0.0;
  for (auto [t0, t1] : {std::pair{pi / 6, 5 * pi / 6}, std::pair{0.4, 2.5}, std::pair{0.2, 1.2}, std::pair{2.9, 1.0}})
    worst = std::max(worst, bg_gap(corpus::semicircle(1024, t0, t1)));
  for (std::uint64_t s = 0; s < 50; ++s)
    worst = std::max(worst, bg_gap(corpus::random_curve(s, 1024)));
  v.require(worst <= 1e-3, "max gap " + fmt(worst));
  double order = INFINITY;
  for (auto [t0, t1] : {std::pair{0.4, 2.5}, std::pair{0.2, 1.2}}) {
    const double g1 = bg_gap(corpus::semicircle(256, t0, t1)), g2 = bg_gap(corpus::semicircle(512, t0, t1));
    order = std::min(order, std::log2(g1 / g2));
  }
  v.require(order >= 1.8, "order " + fmt(order));
  v.detail = v.ok ? "max gap " + fmt(worst) + ", order " + fmt(order) : v.detail;
  return v;
}

Check oracles() {
  Check v;
  const double sphere = willmore_energy(revolve(sphere_curve(2048, 1.0, 0.0, 1e-4)));
  v.require(std::abs(sphere - 4 * pi) <= 1e-2, "sphere " + fmt(sphere));
  const double z = willmore_energy(revolve(corpus::semicircle(1024)));
  v.require(std::abs(z - 2 * pi * std::sqrt(3.0)) <= 1e-3, "zone " + fmt(z));
  const double c = willmore_energy(revolve(corpus::catenoid(1024)));
  v.require(c <= 1e-5, "catenoid " + fmt(c));
  double worst = 0.0;
  for (const auto &[p, tau, y] : random_caps(31, 20)) {
    const auto arc = construct_cap(p, tau, natural_side(tau, y)).arc;
    const UnitDir inward(y == 1 ? tau.t1 : -tau.t1, y == 1 ? tau.t2 : -tau.t2);
    worst = std::max(worst, std::abs(willmore_energy(revolve(arc)) - spherical_cap_energy(inward)));
  }
  v.require(worst <= 1e-3, "cap " + fmt(worst));
  if (v.ok)
    v.detail = "sphere err " + fmt(std::abs(sphere - 4 * pi)) + ", zone err " + fmt(std::abs(z - 2 * pi * std::sqrt(3.0))) +
               ", catenoid " + fmt(c) + ", cap err " + fmt(worst);
  return v;
}

Check thresholds() {
  Check v;
  const auto d = threshold_report(degenerate);
  v.require(std::abs(d.c_ly_rot - 8 * pi) <= 1e-8 && std::abs(d.c_ly - 8 * pi) <= 1e-8, "degenerate C_LY");
  v.require(d.t_tau == 4 * pi, "degenerate T");
  const auto s = c_ly_rot(symmetric);
  v.require(std::abs(s.value - 4 * pi) <= 1e-6, "symmetric " + fmt(s.value - 4 * pi));
  std::mt19937_64 g(17);
  double closed = 0.0;
  for (int k = 0; k < 100; ++k) {
    const auto cs = boundary_circles(random_boundary(g));
    const Vec3 z{6 * detail::unit_symmetric(g), 0, 0};
    closed = std::max(closed, std::abs(boundary_integral(cs, z) - boundary_integral_quadrature(cs, z)));
  }
  v.require(closed <= 1e-10, "closed form " + fmt(closed));
  int bad = 0;
  std::mt19937_64 h(99);
  for (int k = 0; k < 1000; ++k) {
    const auto r = threshold_report(random_boundary(h));
    if (!(r.c_ly >= r.t_tau - 1e-6) || !(r.c_ly_rot >= r.c_ly))
      ++bad;
  }
  v.require(bad == 0, std::to_string(bad) + " ordering failures");
  if (v.ok)
    v.detail = "closed form err " + fmt(closed) + ", 1000 random boundaries ordered";
  return v;
}

Check gradient() {
  Check v;
  double worst = 0.0;
  for (std::uint64_t s = 0; s < 50; ++s) {
    const auto c = corpus::random_curve(1000 + s, 256);
    for (std::uint64_t d = 0; d < 5; ++d)
      worst = std::max(worst, corpus::gradient_fd_error(c, corpus::random_direction(10 * s + d, 256)));
  }
  v.require(worst <= 1e-4, "rel err " + fmt(worst));
  if (v.ok)
    v.detail = "max rel err " + fmt(worst);
  return v;
}

double sup_distance(const ProfileCurve &a, const ProfileCurve &b) {
  double m = 0.0;
  for (int i = 0; i <= a.N(); ++i)
    m = std::max(m, norm(a[i].vec() - b[i].vec()));
  return m;
}

bool monotone(const FlowTrace &t) {
  for (std::size_t k = 1; k < t.records.size(); ++k)
    if (t.records[k].W > t.records[k - 1].W + 1e-9)
      return false;
  return true;
}

Check flow() {
  Check v;
  int violations = 0;
  FlowConfig still;
  still.max_steps = 10000;
  still.stop_on_converge = false;
  double drift = 0.0;
  for (const auto &[c, b] : {std::pair{cap_curve(zone, 128), zone}, std::pair{catenoid_curve(cat, 128), cat}}) {
    const auto r = run(c, b, still);
    drift = std::max(drift, sup_distance(r.final_state.curve, c));
    violations += r.trace.descent_violations;
  }
  v.require(drift <= 10 * still.tol_grad, "stationary drift " + fmt(drift));

  FlowConfig long_run;
  long_run.max_steps = 200000;
  const auto pc = run(perturbed_curve(catenoid_curve(cat, 256), cat, 3, 0.05), cat, long_run);
  violations += pc.trace.descent_violations;
  v.require(pc.final_diagnostics.grad_norm < 1e-3 && monotone(pc.trace), "perturbed catenoid");

  const ClampedBoundary eg{{-1.0, 0.6}, {1.0, 1.4}, {1.0, 0.0}, {1.0, 0.0}};
  const std::vector<std::pair<ProfileCurve, ClampedBoundary>> cases{
      {perturbed_curve(cap_curve(zone, 256), zone, 7, 0.02), zone},
      {perturbed_curve(cap_curve(zone, 256), zone, 8, 0.05), zone},
      {perturbed_curve(catenoid_curve(cat, 256), cat, 4, 0.02), cat},
      {graph_curve(symmetric, 256, 0.3), symmetric},
      {graph_curve(eg, 256), eg}};
  int converged = 0, gated = 0;
  for (const auto &[c, b] : cases) {
    if (!gate(c, b).satisfied)
      continue;
    ++gated;
    const auto r = run(c, b, FlowConfig{});
    violations += r.trace.descent_violations;
    converged += r.outcome == Outcome::Converged;
  }
  v.require(gated == 5, std::to_string(gated) + "/5 cases satisfy the gate");
  v.require(converged == gated, std::to_string(converged) + "/" + std::to_string(gated) + " converged");
  v.require(violations == 0, std::to_string(violations) + " descent violations");
  if (v.ok)
    v.detail = "drift " + fmt(drift) + ", perturbed catenoid in " + std::to_string(pc.final_state.step_count) +
               " steps, 5/5 converged";
  return v;
}

Varifold cap_varifold(const HPoint &p, const UnitDir &tau, Side side) {
  const auto c = construct_cap(p, tau, side, 1024);
  const auto [t0, t1] = end_tangents(c.arc);
  return {{revolve(c.arc)}, {{p.a, p.r, -1.0 * t0}}};
}

double max_decrease(const DensityProfile &p) {
  double m = 0.0;
  for (std::size_t k = 1; k < p.A_values.size(); ++k)
    m = std::max(m, p.A_values[k - 1] - p.A_values[k]);
  return m;
}

Check monotonicity() {
  Check v;
  const auto sphere = make_varifold(revolve(sphere_curve(1024, 1.0, 0.0, 1e-4)));
  const auto capV = cap_varifold({0.3, 0.8}, UnitDir::from_angle(2.0), Side::left);
  const std::vector<Varifold> corpus_v{sphere, capV,
                                       make_varifold(revolve(corpus::catenoid(1024, -1.0, 1.0)), cat)};
  std::mt19937_64 g(77);
  const auto radii = log_radii(0.01, 10.0, 48);
  double drop = 0.0;
  for (const auto &V : corpus_v)
    for (int k = 0; k < 20; ++k) {
      const Vec3 z{1.5 * detail::unit_symmetric(g), 1.5 * detail::unit_symmetric(g), 0.5 * detail::unit_symmetric(g)};
      try {
        drop = std::max(drop, max_decrease(simon_profile(V, z, radii)));
      } catch (const SingularPoint &) {
      }
    }
  v.require(drop <= 1e-4, "max decrease " + fmt(drop));

  double flat = 0.0;
  for (Vec3 z : {Vec3{0, 1, 0}, Vec3{0.6, 0.8, 0}, Vec3{0.6, 0, 0.8}})
    for (double A : simon_profile(sphere, z, log_radii(0.01, 5.0, 40)).A_values)
      flat = std::max(flat, std::abs(A / pi - 1.0));
  v.require(flat <= 0.02, "sphere flatness " + fmt(flat));

  double limit = 0.0;
  for (Vec3 z : {Vec3{0.0, 0.0, 0.0}, Vec3{1.5, 0.4, 0.0}, Vec3{-0.2, 0.3, 0.1}})
    limit = std::max(limit, std::abs(simon_profile(capV, z, {200.0}).A_values.back() - li_yau_rhs(capV, z)));
  v.require(limit <= 1e-3, "large-t limit " + fmt(limit));

  const auto [lo, hi] = density_window(sphere);
  const double smooth = density_estimate(sphere, {0.6, 0.8, 0}, lo, hi);
  v.require(std::abs(smooth - 1.0) <= 0.03, "smooth density " + fmt(smooth));
  const auto right = cap_varifold({-1.0, 1.0}, {1.0, 0.0}, Side::right);
  const auto left = cap_varifold({1.0, 1.0}, {-1.0, 0.0}, Side::left);
  const Varifold two{{right.sheets[0], left.sheets[0]}, {right.boundary[0], left.boundary[0]}};
  const double axis = density_estimate(two, {0, 0, 0}, 0.01, 0.1);
  v.require(std::abs(axis / 2.0 - 1.0) <= 0.05, "axis density " + fmt(axis));

  int ly_bad = 0;
  const auto [clo, chi] = density_window(capV);
  const auto &prof = capV.sheets[0].profile;
  for (int i = 50; i < 1000; i += 50) {
    const Vec3 z{prof[i].a, prof[i].r, 0.0};
    if (distance_to_circle(capV.boundary[0], z) < 2.0 * chi)
      continue;
    const double th = density_estimate(capV, z, clo, chi);
    ly_bad += th * pi > 1.05 * li_yau_rhs(capV, z);
  }
  for (const auto &V : {capV, two}) {
    const auto rep = li_yau_check(V, Region::all_space);
    for (std::size_t k = 0; k < rep.densities.size(); ++k)
      ly_bad += rep.densities[k] * pi > 1.05 * li_yau_rhs(V, rep.samples[k]);
  }
  v.require(ly_bad == 0, std::to_string(ly_bad) + " Li-Yau violations");
  if (v.ok)
    v.detail = "max decrease " + fmt(drop) + ", flatness " + fmt(flat) + ", limit err " + fmt(limit) + ", densities " +
               fmt(smooth) + " / " + fmt(axis);
  return v;
}

Check cap_identity() {
  Check v;
  double worst = 0.0;
  int n = 0;
  for (const auto &[p, tau, y] : random_caps(12, 20)) {
    const auto r = cap_identity_check(p, tau, y);
    worst = std::max(worst, std::abs(r.lhs - r.rhs));
    ++n;
  }
  v.require(n == 20 && worst <= 1e-2, "max |lhs - rhs| " + fmt(worst));
  if (v.ok)
    v.detail = "max |lhs - rhs| " + fmt(worst);
  return v;
}

std::string slurp(const fs::path &p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Check determinism() {
  Check v;
  const fs::path configs = WILLFLOW_CONFIG_DIR;
  const fs::path root = fs::temp_directory_path() / "willflow_acceptance";
  fs::remove_all(root);
  int files = 0;
  for (const char *name : {"degenerate.json", "symmetric.json", "zone_flow.json", "catenoid_perturbed.json",
                           "pinched.json", "minimize_zone.json", "minimize_graph.json", "analyze_sphere.json",
                           "analyze_boundary.json", "caps.json"}) {
    int codes[2];
    for (int k = 0; k < 2; ++k) {
      auto s = load_spec(configs / name);
      s.quiet = true;
      s.out_dir = root / (std::to_string(k) + "_" + name);
      std::ostringstream err;
      codes[k] = dispatch(s, err);
    }
    v.require(codes[0] == codes[1], std::string(name) + " exit codes differ");
    for (const auto &e : fs::directory_iterator(root / ("0_" + std::string(name)))) {
      ++files;
      const auto twin = root / ("1_" + std::string(name)) / e.path().filename();
      v.require(slurp(e.path()) == slurp(twin), std::string(name) + "/" + e.path().filename().string() + " differs");
    }
  }
  fs::remove_all(root);
  v.require(files > 0, "no artifacts");
  if (v.ok)
    v.detail = std::to_string(files) + " artifacts identical";
  return v;
}

} // namespace

int main() {
  struct Criterion {
    const char *name;
    double budget_s;
    std::function<Check()> check;
  };
  const Criterion criteria[] = {{"Bryant-Griffiths identity", 10, identity},
                                {"analytic oracles", 5, oracles},
                                {"threshold values", 60, thresholds},
                                {"gradient correctness", 30, gradient},
                                {"flow properties", 600, flow},
                                {"monotonicity suite", 120, monotonicity},
                                {"cap identity", 30, cap_identity},
                                {"determinism", 600, determinism}};
  int failed = 0, k = 0;
  for (const auto &c : criteria) {
    ++k;
    const auto t0 = std::chrono::steady_clock::now();
    Check v;
    try {
      v = c.check();
    } catch (const std::exception &e) {
      v.require(false, std::string("threw: ") + e.what());
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    v.require(secs <= c.budget_s, "runtime " + fmt(secs) + " s over " + fmt(c.budget_s) + " s");
    failed += !v.ok;
    std::printf("criterion %d %-28s %s  %s (%.1f s)\n", k, c.name, v.ok ? "PASS" : "FAIL", v.detail.c_str(), secs);
    std::fflush(stdout);
  }
  return failed;
}
