#pragma once
#include <cmath>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "hcurve.hpp"

namespace willflow {

// Named initial curves. Every generator returns a curve satisfying the given
// clamped data within 1e-8 or throws ConfigError.

namespace detail {

inline ProfileCurve finish(std::vector<HPoint> u, const ClampedBoundary &b, const char *field) {
  for (const auto &p : u)
    if (!(p.r > 0.0))
      throw ConfigError(field, "generated curve leaves the half-plane");
  try {
    ProfileCurve c(blend_boundary(std::move(u), b));
    require_boundary(c, b);
    return c;
  } catch (const ConfigError &) {
    throw;
  } catch (const Error &e) {
    throw ConfigError(field, e.what());
  }
}

inline bool close(double x, double y, double tol = 1e-8) { return std::abs(x - y) <= tol * std::max(1.0, std::abs(y)); }

// Uniform on [-1, 1) from the raw 64-bit stream, identical on every platform.
inline double unit_symmetric(std::mt19937_64 &g) { return 2.0 * static_cast<double>(g() >> 11) * 0x1.0p-53 - 1.0; }

} // namespace detail

//! Clamped data of the sphere arc (xc + R cos th, R sin th), th from th0 to th1.
inline ClampedBoundary zone_boundary(double xc, double R, double th0, double th1) {
  const double sg = th1 > th0 ? 1.0 : -1.0;
  return {{xc + R * std::cos(th0), R * std::sin(th0)},
          {xc + R * std::cos(th1), R * std::sin(th1)},
          UnitDir::normalized(-sg * std::sin(th0), sg * std::cos(th0)),
          UnitDir::normalized(-sg * std::sin(th1), sg * std::cos(th1))};
}

//! Clamped data of the catenoid profile r = c cosh((a - a_star) / c) on [a0, a1].
inline ClampedBoundary catenoid_boundary(double c, double a_star, double a0, double a1) {
  auto pt = [&](double a) { return HPoint{a, c * std::cosh((a - a_star) / c)}; };
  auto dir = [&](double a) { return UnitDir::normalized(1.0, std::sinh((a - a_star) / c)); };
  return {pt(a0), pt(a1), dir(a0), dir(a1)};
}

//! Clamped data of two unit-type spheres of radius R centred on the axis at
//! -+sqrt(R^2 - w^2), so that they cross at height w above the origin. The
//! ends sit at polar angle theta from the outer poles.
inline ClampedBoundary dumbbell_boundary(double R, double w, double theta) {
  if (!(R > 0.0 && w > 0.0 && w < R && theta > 0.0 && theta < std::numbers::pi / 2))
    throw ConfigError("boundary.dumbbell", "need 0 < waist < radius and 0 < theta < pi/2");
  const double c = std::sqrt(R * R - w * w);
  const double th0 = std::numbers::pi - theta;
  return {{-c + R * std::cos(th0), R * std::sin(th0)},
          {c - R * std::cos(th0), R * std::sin(th0)},
          UnitDir::normalized(std::sin(th0), -std::cos(th0)),
          UnitDir::normalized(std::sin(th0), std::cos(th0))};
}

//! Spherical arc through the clamped data; both ends must lie on the same
//! sphere centred on the axis with matching tangents.
inline ProfileCurve cap_curve(const ClampedBoundary &b, int N) {
  if (std::abs(b.tau0.t1) < 1e-12)
    throw ConfigError("initial.generator", "cap needs a non-vertical tau0");
  const double xc = b.p0.a + b.p0.r * b.tau0.t2 / b.tau0.t1;
  const double R = std::hypot(b.p0.a - xc, b.p0.r);
  const double th0 = std::atan2(b.p0.r, b.p0.a - xc), th1 = std::atan2(b.p1.r, b.p1.a - xc);
  if (!detail::close(std::hypot(b.p1.a - xc, b.p1.r), R))
    throw ConfigError("boundary", "p1 does not lie on the sphere through p0 and tau0");
  const auto ref = zone_boundary(xc, R, th0, th1);
  if (norm(ref.tau0.vec() - b.tau0.vec()) > 1e-8 || norm(ref.tau1.vec() - b.tau1.vec()) > 1e-8)
    throw ConfigError("boundary", "tangents are not those of the spherical arc");
  std::vector<HPoint> u(N + 1);
  for (int i = 0; i <= N; ++i) {
    const double th = th0 + (th1 - th0) * i / N;
    u[i] = {xc + R * std::cos(th), R * std::sin(th)};
  }
  u.front() = b.p0;
  u.back() = b.p1;
  return detail::finish(std::move(u), b, "initial.generator");
}

//! Catenoid arc through the clamped data.
inline ProfileCurve catenoid_curve(const ClampedBoundary &b, int N) {
  if (!(b.tau0.t1 > 0.0) || !(b.tau1.t1 > 0.0))
    throw ConfigError("initial.generator", "catenoid needs rightward tangents");
  const double z0 = std::asinh(b.tau0.t2 / b.tau0.t1);
  const double c = b.p0.r / std::cosh(z0);
  const double a_star = b.p0.a - c * z0;
  const auto ref = catenoid_boundary(c, a_star, b.p0.a, b.p1.a);
  if (!detail::close(ref.p1.r, b.p1.r) || norm(ref.tau1.vec() - b.tau1.vec()) > 1e-8)
    throw ConfigError("boundary", "data are not those of a catenoid arc");
  std::vector<HPoint> u(N + 1);
  for (int i = 0; i <= N; ++i) {
    const double a = b.p0.a + (b.p1.a - b.p0.a) * i / N;
    u[i] = {a, c * std::cosh((a - a_star) / c)};
  }
  u.front() = b.p0;
  u.back() = b.p1;
  return detail::finish(std::move(u), b, "initial.generator");
}

//! Cubic Hermite graph over [a0, a1] matching heights and slopes, plus the
//! bump h sin^2(pi x).
inline ProfileCurve graph_curve(const ClampedBoundary &b, int N, double h = 0.0) {
  if (!(b.tau0.t1 > 0.0) || !(b.tau1.t1 > 0.0) || !(b.p1.a > b.p0.a))
    throw ConfigError("initial.generator", "graph needs a0 < a1 and rightward tangents");
  const double L = b.p1.a - b.p0.a;
  const double m0 = L * b.tau0.t2 / b.tau0.t1, m1 = L * b.tau1.t2 / b.tau1.t1;
  std::vector<HPoint> u(N + 1);
  for (int i = 0; i <= N; ++i) {
    const double x = static_cast<double>(i) / N;
    const double x2 = x * x, x3 = x2 * x;
    const double r = (2 * x3 - 3 * x2 + 1) * b.p0.r + (x3 - 2 * x2 + x) * m0 + (-2 * x3 + 3 * x2) * b.p1.r +
                     (x3 - x2) * m1;
    const double s = std::sin(std::numbers::pi * x);
    u[i] = {b.p0.a + L * x, r + h * s * s};
  }
  u.front() = b.p0;
  u.back() = b.p1;
  return detail::finish(std::move(u), b, "initial.generator");
}

//! Chord between the end heights pulled down to the waist w by sin^2(pi x),
//! plus the end slopes carried by x (1 - x / l)^3 over the first and last
//! fraction l = 0.15 of the parameter interval.
inline ProfileCurve neck_curve(const ClampedBoundary &b, int N, double w) {
  if (!(w > 0.0))
    throw ConfigError("initial.waist", "must be positive");
  if (!(b.tau0.t1 > 0.0) || !(b.tau1.t1 > 0.0) || !(b.p1.a > b.p0.a))
    throw ConfigError("initial.generator", "neck needs a0 < a1 and rightward tangents");
  const double L = b.p1.a - b.p0.a, l = 0.15;
  const double m0 = L * b.tau0.t2 / b.tau0.t1, m1 = L * b.tau1.t2 / b.tau1.t1;
  auto phi = [l](double x) { return x < l ? x * std::pow(1.0 - x / l, 3) : 0.0; };
  std::vector<HPoint> u(N + 1);
  for (int i = 0; i <= N; ++i) {
    const double x = static_cast<double>(i) / N;
    const double s = std::sin(std::numbers::pi * x);
    const double r = (1.0 - x) * b.p0.r + x * b.p1.r;
    u[i] = {b.p0.a + L * x, r - (r - w) * s * s + m0 * phi(x) - m1 * phi(1.0 - x)};
  }
  u.front() = b.p0;
  u.back() = b.p1;
  return detail::finish(std::move(u), b, "initial.generator");
}

//! Arc of the sphere through p0 and tau0 up to its upper crossing with the
//! sphere through p1 and tau1, then along that sphere to p1. The crossing is
//! a sharp neck.
inline ProfileCurve dumbbell_curve(const ClampedBoundary &b, int N) {
  if (std::abs(b.tau0.t1) < 1e-12 || std::abs(b.tau1.t1) < 1e-12)
    throw ConfigError("initial.generator", "dumbbell needs non-vertical end tangents");
  const double x0 = b.p0.a + b.p0.r * b.tau0.t2 / b.tau0.t1, R0 = std::hypot(b.p0.a - x0, b.p0.r);
  const double x1 = b.p1.a + b.p1.r * b.tau1.t2 / b.tau1.t1, R1 = std::hypot(b.p1.a - x1, b.p1.r);
  const double d = x1 - x0;
  if (!(d > 0.0) || !(d < R0 + R1) || !(d > std::abs(R0 - R1)))
    throw ConfigError("initial.generator", "dumbbell spheres do not cross");
  const double xn = x0 + (d * d + R0 * R0 - R1 * R1) / (2.0 * d);
  const double wn = std::sqrt(R0 * R0 - (xn - x0) * (xn - x0));
  const double a0 = std::atan2(b.p0.r, b.p0.a - x0), an0 = std::atan2(wn, xn - x0);
  const double a1 = std::atan2(b.p1.r, b.p1.a - x1), an1 = std::atan2(wn, xn - x1);
  const int M = N / 2;
  std::vector<HPoint> u(N + 1);
  for (int i = 0; i <= M; ++i) {
    const double th = a0 + (an0 - a0) * i / M;
    u[i] = {x0 + R0 * std::cos(th), R0 * std::sin(th)};
  }
  for (int i = M; i <= N; ++i) {
    const double th = an1 + (a1 - an1) * (i - M) / (N - M);
    u[i] = {x1 + R1 * std::cos(th), R1 * std::sin(th)};
  }
  u.front() = b.p0;
  u.back() = b.p1;
  return detail::finish(std::move(u), b, "initial.generator");
}

//! Normal perturbation sum_k c_k sin^2(pi x) sin(k pi x), k = 1..4, with
//! c_k uniform in [-amplitude, amplitude] from the seed.
inline ProfileCurve perturbed_curve(const ProfileCurve &base, const ClampedBoundary &b, std::uint64_t seed,
                                    double amplitude) {
  std::mt19937_64 g(seed);
  double ck[4];
  for (double &v : ck)
    v = amplitude * detail::unit_symmetric(g);
  const auto geo = geometry(base);
  const int N = base.N();
  std::vector<HPoint> u = base.nodes();
  for (int i = 1; i < N; ++i) {
    const double x = static_cast<double>(i) / N;
    const double s = std::sin(std::numbers::pi * x);
    double d = 0.0;
    for (int k = 0; k < 4; ++k)
      d += ck[k] * std::sin((k + 1) * std::numbers::pi * x);
    u[i] = HPoint::from(u[i].vec() + (s * s * d * u[i].r) * perp(geo.tangent[i]));
  }
  return detail::finish(std::move(u), b, "initial.generator");
}

//! Profile of the sphere of radius R centred at (xc, 0, 0), polar angles
//! in [delta, pi - delta].
inline ProfileCurve sphere_curve(int N, double R = 1.0, double xc = 0.0, double delta = 1e-3) {
  return ProfileCurve::from_function(N, [=](double x) {
    const double th = delta + x * (std::numbers::pi - 2.0 * delta);
    return HPoint{xc + R * std::cos(th), R * std::sin(th)};
  });
}

} // namespace willflow
