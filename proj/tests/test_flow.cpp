#include <gtest/gtest.h>

#include <willflow/flow.hpp>

#include "corpus.hpp"

using namespace willflow;
using corpus::pi;

namespace {

const ClampedBoundary zone = zone_boundary(0.0, 1.0, 2.2, 0.9);
const ClampedBoundary cat = catenoid_boundary(1.0, 0.0, -1.0, 1.0);
const ClampedBoundary pinch{{-2.0, 0.5}, {2.0, 0.5}, UnitDir::from_angle(-1.0), UnitDir::from_angle(1.0)};

ProfileCurve perturbed_catenoid(int N, double eps) {
  auto c = ProfileCurve::from_function(N, [=](double x) {
    const double a = 2 * x - 1;
    return HPoint{a, std::cosh(a) + eps * std::sin(pi * x)};
  });
  return ProfileCurve(impose_boundary(c.nodes(), cat));
}

double interior_speed(const std::vector<Vec2> &v) {
  double m = 0.0;
  const int N = static_cast<int>(v.size()) - 1;
  for (int i = residual_first(N); i <= residual_last(N); ++i)
    m = std::max(m, norm(v[i]));
  return m;
}

double sup_distance(const ProfileCurve &a, const ProfileCurve &b) {
  double m = 0.0;
  for (int i = 0; i <= a.N(); ++i)
    m = std::max(m, norm(a[i].vec() - b[i].vec()));
  return m;
}

} // namespace

TEST(FlowConfig, Validation) {
  FlowConfig c;
  EXPECT_NO_THROW(c.validate());
  c.dt_safety = 1.0;
  EXPECT_THROW(c.validate(), ConfigError);
  c = {};
  c.dt_init = 0.0;
  try {
    c.validate();
    FAIL();
  } catch (const ConfigError &e) {
    EXPECT_EQ(e.field, "dt_init");
  }
  c = {};
  EXPECT_DOUBLE_EQ(c.axis_alarm(pinch), 5e-4);
}

TEST(Gate, ZoneSatisfied) {
  const auto g = gate(cap_curve(zone, 256), zone);
  EXPECT_TRUE(g.satisfied);
  EXPECT_NEAR(g.W0, 2 * pi * (zone.tau0.t2 - zone.tau1.t2), 1e-3);
  EXPECT_NEAR(g.margin, g.threshold - g.W0, 1e-12);
}

TEST(Gate, DegenerateDataThresholdIsEightPi) {
  const ClampedBoundary deg{{0.0, 1.0}, {0.0, 1.0}, {1.0, 0.0}, {1.0, 0.0}};
  EXPECT_NEAR(c_ly_rot(deg).value, 8 * pi, 1e-8);
  EXPECT_TRUE(gate_holds(2 * pi, c_ly_rot(deg).value));
}

TEST(Gate, EqualityCounts) {
  EXPECT_TRUE(gate_holds(8 * pi, 8 * pi));
  EXPECT_FALSE(gate_holds(std::nextafter(8 * pi, 100.0), 8 * pi));
}

TEST(Gate, MismatchedEndpoints) {
  EXPECT_THROW(gate(cap_curve(zone, 128), cat), BoundaryMismatch);
}

TEST(Velocity, StationaryProfiles) {
  EXPECT_LE(interior_speed(velocity(corpus::semicircle(512))), 1e-2);
  EXPECT_LE(interior_speed(velocity(corpus::catenoid(512))), 1e-2);
}

TEST(Velocity, HeightScalingOnHorizontalSegments) {
  // Halving the height multiplies the speed by 8: the mobility gives r^-4
  // and the gradient of a horocycle shrinks like r.
  const auto v1 = velocity(corpus::segment(128, 1.0));
  const auto v2 = velocity(corpus::segment(128, 0.5));
  for (int i = 8; i <= 120; i += 8)
    EXPECT_NEAR(norm(v2[i]) / norm(v1[i]), 8.0, 1e-6) << i;
}

TEST(Velocity, PreservesEndTangents) {
  const auto c = perturbed_catenoid(256, 0.05);
  const auto v = velocity(c);
  const double s = 1e-6;
  auto u = c.nodes();
  for (std::size_t i = 0; i < u.size(); ++i)
    u[i] = HPoint::from(u[i].vec() + s * v[i]);
  EXPECT_LE(boundary_defect(ProfileCurve(u), cat), 1e-10);
}

TEST(Velocity, DissipationMatchesEnergyDecay) {
  const auto c = perturbed_catenoid(256, 0.05);
  const double dt = 1e-12;
  auto u = *detail::ImplicitSystem(c, cat).trial(dt);
  const ProfileCurve next(impose_boundary(std::move(u), cat));
  const double observed = (bryant_griffiths(c) - bryant_griffiths(next)) / dt;
  EXPECT_NEAR(observed, dissipation_rate(c), 0.1 * dissipation_rate(c));
}

TEST(Step, StationaryZoneBarelyMoves) {
  const auto c = cap_curve(zone, 256);
  FlowConfig cfg;
  const FlowState s{0.0, c, 0, cfg.dt_init};
  const auto n = step(s, zone, cfg);
  EXPECT_LE(sup_distance(n.curve, c), (n.t - s.t) * 1e-2);
  EXPECT_LE(boundary_defect(n.curve, zone), 1e-8);
}

TEST(Step, HugeStepIsRejectedAndShrunk) {
  const auto b = zone;
  const auto c = perturbed_curve(cap_curve(zone, 256), zone, 7, 0.2);
  FlowConfig cfg;
  long rej = 0;
  const auto n = step(FlowState{0.0, c, 0, 1e6}, b, cfg, &rej);
  EXPECT_GT(rej, 0);
  EXPECT_LT(n.t, 1e6);
  EXPECT_LE(bryant_griffiths(n.curve), bryant_griffiths(c));
  EXPECT_LE(boundary_defect(n.curve, b), 1e-8);
  EXPECT_EQ(n.curve.front().a, b.p0.a);
  EXPECT_EQ(n.curve.back().r, b.p1.r);
}

TEST(Step, PerturbedCatenoidDescends) {
  FlowConfig cfg;
  cfg.max_steps = 100;
  cfg.stop_on_converge = false;
  const auto r = run(perturbed_catenoid(256, 0.05), cat, cfg);
  ASSERT_EQ(r.trace.records.size(), 101u);
  EXPECT_LT(r.trace.records.back().W, r.trace.records.front().W);
  for (std::size_t k = 1; k < r.trace.records.size(); ++k)
    EXPECT_LE(r.trace.records[k].W, r.trace.records[k - 1].W + 1e-9) << k;
  EXPECT_EQ(r.trace.descent_violations, 0);
}

TEST(Run, PerturbedZoneConverges) {
  const auto init = perturbed_curve(cap_curve(zone, 256), zone, 7, 0.02);
  ASSERT_TRUE(gate(init, zone).satisfied);
  const auto r = run(init, zone, FlowConfig{});
  EXPECT_EQ(r.outcome, Outcome::Converged);
  EXPECT_LT(r.final_diagnostics.grad_norm, 1e-3);
  EXPECT_LE(r.final_diagnostics.W, r.trace.records.front().W);
  EXPECT_NEAR(r.final_diagnostics.W, 2 * pi * (zone.tau0.t2 - zone.tau1.t2), 1e-3);
  ASSERT_TRUE(r.li_yau.has_value());
  EXPECT_TRUE(r.li_yau->passes);
}

TEST(Run, StationaryCatenoidConvergesImmediately) {
  const auto r = run(catenoid_curve(cat, 256), cat, FlowConfig{});
  EXPECT_EQ(r.outcome, Outcome::Converged);
  EXPECT_EQ(r.final_state.step_count, 0);
}

TEST(Run, PinchedDatumRaisesAlarm) {
  const auto b = dumbbell_boundary(1.0, 0.1, 1.2);
  const auto init = dumbbell_curve(b, 256);
  EXPECT_FALSE(gate(init, b).satisfied);
  const auto r = run(init, b, FlowConfig{});
  EXPECT_EQ(r.outcome, Outcome::SingularitySuspected);
  EXPECT_GE(r.final_diagnostics.verticality, 0.9);
  EXPECT_GT(r.final_diagnostics.min_height, 0.0);
  EXPECT_GT(r.final_diagnostics.L_hyp, 0.0);
  EXPECT_FALSE(r.li_yau.has_value());
}

TEST(Run, SmoothNeckHealsDespiteGate) {
  const auto init = neck_curve(pinch, 256, 0.15);
  EXPECT_FALSE(gate(init, pinch).satisfied);
  const auto r = run(init, pinch, FlowConfig{});
  EXPECT_EQ(r.outcome, Outcome::Converged);
  EXPECT_NEAR(r.final_diagnostics.W, willmore_energy(revolve(r.final_state.curve)), 0.05);
}

TEST(Run, StationaryCurvesStayPut) {
  FlowConfig cfg;
  cfg.max_steps = 500;
  cfg.stop_on_converge = false;
  for (const auto &[c, b] : {std::pair{cap_curve(zone, 128), zone}, std::pair{catenoid_curve(cat, 128), cat}}) {
    const auto r = run(c, b, cfg);
    EXPECT_LE(sup_distance(r.final_state.curve, c), 10 * cfg.tol_grad);
    EXPECT_EQ(r.trace.descent_violations, 0);
  }
}

TEST(Diagnostics, Verticality) {
  EXPECT_EQ(diagnostics(corpus::segment(64)).verticality, 0.0);
  const auto v = ProfileCurve::from_function(64, [](double x) { return HPoint{0.0, 1.0 + x}; });
  EXPECT_NEAR(diagnostics(v).verticality, 1.0, 1e-14);
  double prev = 0.0;
  for (double eps : {1e-2, 1e-3, 1e-4}) {
    const auto arc = construct_cap({0.0, 1.0}, {-1.0, 0.0}, Side::right, 512, eps).arc;
    const double vt = diagnostics(arc).verticality;
    EXPECT_GE(vt, prev);
    prev = vt;
  }
  EXPECT_GE(prev, 0.999);
}

TEST(TraceCsv, Header) {
  FlowTrace tr;
  tr.records.push_back({0, 1, 2, 3, 4, 5, 6, 7, 8});
  std::ostringstream os;
  write_trace_csv(os, tr);
  EXPECT_EQ(os.str(), "t,W,E,L_euc,L_hyp,min_height,grad_norm,verticality,dt\n0,1,2,3,4,5,6,7,8\n");
}
