#include <gtest/gtest.h>

#include <willflow/varifold.hpp>

#include "corpus.hpp"

using namespace willflow;
using corpus::pi;

namespace {

Varifold unit_sphere() { return make_varifold(revolve(sphere_curve(1024, 1.0, 0.0, 1e-4))); }

// Cap of the sphere through p with tangent tau, with its boundary circle.
Varifold cap(const HPoint &p, const UnitDir &tau, Side side, int N = 1024) {
  const auto c = construct_cap(p, tau, side, N);
  const auto [t0, t1] = end_tangents(c.arc);
  return {{revolve(c.arc)}, {{p.a, p.r, -1.0 * t0}}};
}

double max_decrease(const DensityProfile &p) {
  double m = 0.0;
  for (std::size_t k = 1; k < p.A_values.size(); ++k)
    m = std::max(m, p.A_values[k - 1] - p.A_values[k]);
  return m;
}

} // namespace

TEST(BallMass, SmoothPointDensity) {
  const auto V = unit_sphere();
  const double t = 0.05;
  EXPECT_NEAR(ball_mass(V, {0, 1, 0}, t) / (pi * t * t), 1.0, 0.02);
  EXPECT_NEAR(ball_mass(V, {0, 0, 1}, t) / (pi * t * t), 1.0, 0.02);
}

TEST(BallMass, FarBallIsEmpty) {
  const auto V = make_varifold(revolve(sphere_curve(256, 0.5)));
  EXPECT_EQ(ball_mass(V, {10.0, 0, 0}, 1.0), 0.0);
}

TEST(BallMass, LargeBallHoldsEverything) { EXPECT_NEAR(ball_mass(unit_sphere(), {0, 0, 0}, 3.0), 4 * pi, 1e-3); }

TEST(SimonProfile, SphereIsFlatAtPi) {
  const auto V = unit_sphere();
  const auto radii = log_radii(0.01, 5.0, 40);
  for (Vec3 z : {Vec3{0, 1, 0}, Vec3{0.6, 0.8, 0}, Vec3{0.6, 0, 0.8}}) {
    const auto p = simon_profile(V, z, radii);
    for (double A : p.A_values)
      EXPECT_NEAR(A, pi, 0.02 * pi);
    EXPECT_LE(max_decrease(p), 1e-4);
  }
}

TEST(SimonProfile, CapLargeRadiusLimit) {
  const auto V = cap({0.3, 0.8}, UnitDir::from_angle(2.0), Side::left);
  const double diam = 2.0;
  for (Vec3 z : {Vec3{0.0, 0.0, 0.0}, Vec3{1.5, 0.4, 0.0}, Vec3{-0.2, 0.3, 0.1}}) {
    const auto p = simon_profile(V, z, {100 * diam});
    EXPECT_NEAR(p.A_values.back(), li_yau_rhs(V, z), 1e-3);
  }
}

TEST(SimonProfile, MonotoneOnCorpus) {
  std::vector<Varifold> surfaces{unit_sphere(), cap({0.3, 0.8}, UnitDir::from_angle(2.0), Side::left),
                                 make_varifold(revolve(corpus::catenoid(1024, -1.0, 1.0)),
                                               catenoid_boundary(1.0, 0.0, -1.0, 1.0))};
  std::mt19937_64 g(77);
  const auto radii = log_radii(0.01, 10.0, 48);
  for (const auto &V : surfaces)
    for (int k = 0; k < 20; ++k) {
      const Vec3 z{1.5 * detail::unit_symmetric(g), 1.5 * detail::unit_symmetric(g), 0.5 * detail::unit_symmetric(g)};
      try {
        EXPECT_LE(max_decrease(simon_profile(V, z, radii)), 1e-4);
      } catch (const SingularPoint &) {
      }
    }
}

TEST(SimonProfile, RejectsPointOnBoundaryCircle) {
  const auto b = catenoid_boundary(1.0, 0.0, -1.0, 1.0);
  const auto V = make_varifold(revolve(catenoid_curve(b, 256)), b);
  EXPECT_THROW(simon_profile(V, {b.p0.a, 0.0, b.p0.r}, {0.1, 0.2}), SingularPoint);
  EXPECT_THROW(simon_profile(V, {0, 0, 0}, {0.2, 0.1}), std::invalid_argument);
}

TEST(Density, SmoothPoint) {
  const auto V = unit_sphere();
  const auto [lo, hi] = density_window(V);
  EXPECT_NEAR(density_estimate(V, {0.6, 0.8, 0}, lo, hi), 1.0, 0.03);
}

TEST(Density, TwoCapsMeetingOnTheAxis) {
  auto right = cap({-1.0, 1.0}, {1.0, 0.0}, Side::right);
  auto left = cap({1.0, 1.0}, {-1.0, 0.0}, Side::left);
  Varifold V{{right.sheets[0], left.sheets[0]}, {right.boundary[0], left.boundary[0]}};
  EXPECT_NEAR(density_estimate(V, {0, 0, 0}, 0.01, 0.1), 2.0, 0.1);
}

TEST(Density, OffSurface) {
  const auto V = unit_sphere();
  EXPECT_EQ(density_estimate(V, {0, 0, 0}, 0.02, 0.2), 0.0);
  EXPECT_EQ(density_estimate(V, {3, 0, 0}, 0.02, 0.2), 0.0);
}

TEST(GapIntegral, VanishesOnSpheres) {
  for (double R : {0.5, 1.0, 2.0}) {
    const auto V = make_varifold(revolve(sphere_curve(1024, R, 0.3, 1e-4)));
    EXPECT_LE(gap_integral(V, {0.3, R, 0}, 1e-3 * R), 1e-4) << R;
  }
}

TEST(LiYau, DensityBoundOnSamples) {
  const auto V = cap({0.3, 0.8}, UnitDir::from_angle(2.0), Side::left);
  const auto [lo, hi] = density_window(V);
  const auto &prof = V.sheets[0].profile;
  for (int i = 100; i < 1000; i += 100) {
    const Vec3 z{prof[i].a, prof[i].r, 0.0};
    const double th = density_estimate(V, z, lo, hi);
    EXPECT_LE(th * pi, li_yau_rhs(V, z) * 1.05) << i;
  }
}

TEST(LiYau, CapWithItsOwnBoundary) {
  const auto V = cap({0.3, 0.8}, UnitDir::from_angle(2.0), Side::left);
  const auto r = li_yau_check(V, Region::all_space);
  EXPECT_TRUE(r.passes);
  ASSERT_FALSE(r.densities.empty());
  for (double th : r.densities)
    EXPECT_LE(th, 1.05);
}

TEST(LiYau, UnionAboveThresholdFails) {
  const auto a = revolve(sphere_curve(512, 1.0, -3.0)), b = revolve(sphere_curve(512, 1.0, 0.0)),
             c = revolve(sphere_curve(512, 1.0, 3.0));
  const auto r = li_yau_check(Varifold{{a, b, c}, {}}, Region::axis);
  EXPECT_FALSE(r.passes);
  EXPECT_TRUE(r.densities.empty());
}

TEST(LiYau, DegenerateBoundaryMargin) {
  const ClampedBoundary deg{{0.0, 1.0}, {0.0, 1.0}, {1.0, 0.0}, {1.0, 0.0}};
  const auto hemi = construct_cap({0.0, 1.0}, {-1.0, 0.0}, Side::right).arc;
  const auto r = li_yau_check(make_varifold(revolve(hemi), deg), Region::axis);
  EXPECT_TRUE(r.passes);
  EXPECT_NEAR(r.margin, 6 * pi, 1e-3);
}

TEST(ProfileCsv, Header) {
  const auto p = simon_profile(unit_sphere(), {0, 1, 0}, {0.1, 0.2});
  std::ostringstream os;
  write_profile_csv(os, p);
  EXPECT_EQ(os.str().substr(0, os.str().find('\n')), "t,A,mass_term,willmore_term,pairing_term,boundary_term");
}
