#pragma once
#include <algorithm>
#include <array>
#include <cmath>
#include <functional>
#include <numbers>
#include <optional>
#include <vector>

#include "hcurve.hpp"
#include "revolution.hpp"

namespace willflow {

struct Vec3 {
  double x = 0.0, y = 0.0, z = 0.0;
};

//! Circle {axial} × radius·S¹ carrying the co-normal field
//! eta(theta) = (eta.x, eta.y cos theta, eta.y sin theta).
struct BoundaryCircle {
  double axial = 0.0, radius = 1.0;
  Vec2 eta;
};

//! Boundary circles of the cylinder with co-normal (-1)^(1+y) tau_y.
inline std::vector<BoundaryCircle> boundary_circles(const ClampedBoundary &b) {
  return {{b.p0.a, b.p0.r, -1.0 * b.tau0.vec()}, {b.p1.a, b.p1.r, b.tau1.vec()}};
}

//! Diameter of the union of the boundary circles in R^3.
inline double boundary_scale(const std::vector<BoundaryCircle> &cs) {
  double d = 0.0;
  for (std::size_t i = 0; i < cs.size(); ++i) {
    d = std::max(d, 2.0 * cs[i].radius);
    for (std::size_t j = i + 1; j < cs.size(); ++j)
      d = std::max(d, std::hypot(cs[i].axial - cs[j].axial, cs[i].radius + cs[j].radius));
  }
  return d;
}

inline double t_tau(const ClampedBoundary &b) {
  return 4.0 * std::numbers::pi - 2.0 * std::numbers::pi * (b.tau1.t2 - b.tau0.t2);
}

//! Distance from z to the circle.
inline double distance_to_circle(const BoundaryCircle &c, const Vec3 &z) {
  return std::hypot(z.x - c.axial, std::hypot(z.y, z.z) - c.radius);
}

namespace detail {

inline void require_off_circles(const std::vector<BoundaryCircle> &cs, const Vec3 &z) {
  for (const auto &c : cs)
    if (distance_to_circle(c, z) < 1e-9)
      throw SingularPoint("point lies on a boundary circle");
}

// Integral over one circle for z on the axis at axial coordinate h.
inline double axial_circle_integral(const BoundaryCircle &c, double h) {
  const double dx = c.axial - h;
  return 2.0 * std::numbers::pi * c.radius * (c.eta.x * dx + c.eta.y * c.radius) / (dx * dx + c.radius * c.radius);
}

// Integral over one circle for z at axial coordinate z1 and distance d >= 0
// from the axis, in closed form.
inline double reduced_circle_integral(const BoundaryCircle &c, double z1, double d) {
  const double dx = c.axial - z1, p = c.radius;
  const double sq = std::sqrt((dx * dx + (p - d) * (p - d)) * (dx * dx + (p + d) * (p + d)));
  const double num = c.eta.x * p * dx + 0.5 * c.eta.y * ((p - dx) * (p + dx) - d * d);
  return 2.0 * std::numbers::pi * (num / sq + 0.5 * c.eta.y);
}

// Composite Simpson quadrature over one circle of
// <eta, b - z> / |b - z|^2 with the arc-length element radius dtheta.
inline double simpson_circle_integral(const BoundaryCircle &c, const Vec3 &z) {
  const double dist = distance_to_circle(c, z);
  const double ratio = c.radius / std::max(dist, 1e-300);
  int n = static_cast<int>(std::min(1048576.0, std::max(2048.0, 64.0 * ratio)));
  n += n % 2;
  const double dt = 2.0 * std::numbers::pi / n;
  auto f = [&](double th) {
    const double ct = std::cos(th), st = std::sin(th);
    const Vec3 e{c.eta.x, c.eta.y * ct, c.eta.y * st};
    const Vec3 w{c.axial - z.x, c.radius * ct - z.y, c.radius * st - z.z};
    return (e.x * w.x + e.y * w.y + e.z * w.z) / (w.x * w.x + w.y * w.y + w.z * w.z) * c.radius;
  };
  double s = f(0.0) + f(2.0 * std::numbers::pi);
  for (int k = 1; k < n; ++k)
    s += (k % 2 ? 4.0 : 2.0) * f(k * dt);
  return s * dt / 3.0;
}

} // namespace detail

//! Integral of <eta, b - z> / |b - z|^2 over the boundary circles. Points on
//! the rotation axis use the closed form; other points use Simpson's rule in
//! the angle.
inline double boundary_integral(const std::vector<BoundaryCircle> &cs, const Vec3 &z) {
  detail::require_off_circles(cs, z);
  double s = 0.0;
  const bool on_axis = z.y == 0.0 && z.z == 0.0;
  for (const auto &c : cs)
    s += on_axis ? detail::axial_circle_integral(c, z.x) : detail::simpson_circle_integral(c, z);
  return s;
}

inline double boundary_integral(const ClampedBoundary &b, const Vec3 &z) {
  return boundary_integral(boundary_circles(b), z);
}

//! Same integral by quadrature only, also on the axis.
inline double boundary_integral_quadrature(const std::vector<BoundaryCircle> &cs, const Vec3 &z) {
  detail::require_off_circles(cs, z);
  double s = 0.0;
  for (const auto &c : cs)
    s += detail::simpson_circle_integral(c, z);
  return s;
}

//! Closed form of the integral as a function of the axial coordinate z1 and
//! the distance d from the axis.
inline double boundary_integral_reduced(const std::vector<BoundaryCircle> &cs, double z1, double d) {
  double s = 0.0;
  for (const auto &c : cs)
    s += detail::reduced_circle_integral(c, z1, std::abs(d));
  return s;
}

//! Bracket whose supremum over h determines the rotational threshold:
//! boundary_integral at (h, 0, 0) divided by 2 pi.
inline double axial_bracket(const std::vector<BoundaryCircle> &cs, double h) {
  double s = 0.0;
  for (const auto &c : cs)
    s += detail::axial_circle_integral(c, h);
  return s / (2.0 * std::numbers::pi);
}

struct AxialWindow {
  double lo, hi;
};

inline AxialWindow axial_window(const std::vector<BoundaryCircle> &cs, double factor = 10.0) {
  double lo = cs.front().axial, hi = lo;
  for (const auto &c : cs) {
    lo = std::min(lo, c.axial);
    hi = std::max(hi, c.axial);
  }
  const double sc = boundary_scale(cs);
  return {lo - factor * sc, hi + factor * sc};
}

namespace detail {

inline double golden_max(const std::function<double(double)> &f, double a, double b, double tol) {
  const double g = 0.5 * (std::sqrt(5.0) - 1.0);
  double x1 = b - g * (b - a), x2 = a + g * (b - a);
  double f1 = f(x1), f2 = f(x2);
  while (b - a > tol) {
    if (f1 < f2) {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + g * (b - a);
      f2 = f(x2);
    } else {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - g * (b - a);
      f1 = f(x1);
    }
  }
  return f1 > f2 ? x1 : x2;
}

} // namespace detail

struct AxialThreshold {
  double value;  // 8 pi - 2 sup of the boundary integral over the axis
  double h_star; // maximizer; +inf when the limit value 0 wins
  double sup;    // supremum of the boundary integral
};

//! Rotational Li-Yau threshold: grid search on the axis followed by
//! golden-section refinement. The limit value 0 at |h| -> inf is a candidate.
inline AxialThreshold c_ly_rot(const std::vector<BoundaryCircle> &cs, int samples = 4096, double window = 10.0) {
  const auto w = axial_window(cs, window);
  const double dh = (w.hi - w.lo) / (samples - 1);
  std::vector<double> v(samples);
  for (int k = 0; k < samples; ++k)
    v[k] = axial_bracket(cs, w.lo + k * dh);
  std::vector<int> peaks;
  for (int k = 0; k < samples; ++k) {
    const bool left = k == 0 || v[k] >= v[k - 1];
    const bool right = k == samples - 1 || v[k] >= v[k + 1];
    if (left && right)
      peaks.push_back(k);
  }
  std::sort(peaks.begin(), peaks.end(), [&](int a, int b) { return v[a] > v[b] || (v[a] == v[b] && a < b); });
  if (peaks.size() > 4)
    peaks.resize(4);
  double best = 0.0, h_star = std::numeric_limits<double>::infinity();
  auto f = [&](double h) { return axial_bracket(cs, h); };
  for (int k : peaks) {
    const double a = w.lo + std::max(k - 1, 0) * dh, b = w.lo + std::min(k + 1, samples - 1) * dh;
    const double h = detail::golden_max(f, a, b, 1e-10);
    double val = f(h), hh = h;
    if (v[k] > val) {
      val = v[k];
      hh = w.lo + k * dh;
    }
    if (val > best) {
      best = val;
      h_star = hh;
    }
  }
  return {4.0 * std::numbers::pi * (2.0 - best), h_star, 2.0 * std::numbers::pi * best};
}

inline AxialThreshold c_ly_rot(const ClampedBoundary &b) { return c_ly_rot(boundary_circles(b)); }

namespace detail {

// Nelder-Mead maximization in two variables.
inline std::array<double, 3> nelder_mead_max(const std::function<double(double, double)> &f, double x0, double y0,
                                             double step, double tol, int max_iter = 2000) {
  std::array<std::array<double, 3>, 3> s{{{x0, y0, 0.0}, {x0 + step, y0, 0.0}, {x0, y0 + step, 0.0}}};
  for (auto &p : s)
    p[2] = f(p[0], p[1]);
  for (int it = 0; it < max_iter; ++it) {
    std::sort(s.begin(), s.end(), [](const auto &a, const auto &b) { return a[2] > b[2]; });
    const double size = std::max(std::hypot(s[1][0] - s[0][0], s[1][1] - s[0][1]),
                                 std::hypot(s[2][0] - s[0][0], s[2][1] - s[0][1]));
    if (size < tol)
      break;
    const double cx = 0.5 * (s[0][0] + s[1][0]), cy = 0.5 * (s[0][1] + s[1][1]);
    auto pt = [&](double t) {
      const double x = cx + t * (s[2][0] - cx), y = cy + t * (s[2][1] - cy);
      return std::array<double, 3>{x, y, f(x, y)};
    };
    const auto r = pt(-1.0);
    if (r[2] > s[0][2]) {
      const auto e = pt(-2.0);
      s[2] = e[2] > r[2] ? e : r;
    } else if (r[2] > s[1][2]) {
      s[2] = r;
    } else {
      const auto c = r[2] > s[2][2] ? pt(-0.5) : pt(0.5);
      if (c[2] > std::max(r[2], s[2][2])) {
        s[2] = c;
      } else {
        for (int k = 1; k < 3; ++k) {
          s[k][0] = s[0][0] + 0.5 * (s[k][0] - s[0][0]);
          s[k][1] = s[0][1] + 0.5 * (s[k][1] - s[0][1]);
          s[k][2] = f(s[k][0], s[k][1]);
        }
      }
    }
  }
  std::sort(s.begin(), s.end(), [](const auto &a, const auto &b) { return a[2] > b[2]; });
  return s[0];
}

} // namespace detail

struct SpatialThreshold {
  double value;
  double z_axial, z_dist; // maximizer (axial coordinate, distance from axis)
  double sup;
};

//! Li-Yau threshold over all of R^3, reduced by rotational symmetry to the
//! half-plane (z1, d). Grid search, Nelder-Mead refinement, and the axial
//! maximizer and the limit value 0 as extra candidates.
inline SpatialThreshold c_ly(const std::vector<BoundaryCircle> &cs, int grid = 1024, double window = 10.0) {
  const auto w = axial_window(cs, window);
  const double dmax = window * boundary_scale(cs);
  auto f = [&](double z1, double d) {
    d = std::abs(d);
    for (const auto &c : cs)
      if (std::hypot(z1 - c.axial, d - c.radius) < 1e-7 * std::max(1.0, c.radius))
        return -std::numeric_limits<double>::infinity();
    const double v = boundary_integral_reduced(cs, z1, d);
    return std::isfinite(v) ? v : -std::numeric_limits<double>::infinity();
  };
  const double dz = (w.hi - w.lo) / (grid - 1), dd = dmax / (grid - 1);
  double gbest = -std::numeric_limits<double>::infinity(), gz = 0.0, gd = 0.0;
  for (int i = 0; i < grid; ++i) {
    const double z1 = w.lo + i * dz;
    for (int j = 0; j < grid; ++j) {
      const double v = f(z1, j * dd);
      if (v > gbest) {
        gbest = v;
        gz = z1;
        gd = j * dd;
      }
    }
  }
  const auto ax = c_ly_rot(cs);
  double best = 0.0, bz = std::numeric_limits<double>::infinity(), bd = 0.0;
  auto consider = [&](double v, double z1, double d) {
    if (v > best) {
      best = v;
      bz = z1;
      bd = std::abs(d);
    }
  };
  if (std::isfinite(ax.h_star))
    consider(ax.sup, ax.h_star, 0.0);
  consider(gbest, gz, gd);
  const auto nm = detail::nelder_mead_max(f, gz, gd, std::max(dz, dd), 1e-12);
  consider(nm[2], nm[0], nm[1]);
  if (std::isfinite(ax.h_star)) {
    const auto nm2 = detail::nelder_mead_max(f, ax.h_star, 0.0, std::max(dz, dd), 1e-12);
    consider(nm2[2], nm2[0], nm2[1]);
  }
  return {std::min(8.0 * std::numbers::pi - 2.0 * best, ax.value), bz, bd, best};
}

inline SpatialThreshold c_ly(const ClampedBoundary &b) { return c_ly(boundary_circles(b)); }

struct ThresholdReport {
  double t_tau;
  double c_ly_rot;
  double h_star;
  double c_ly;
  double z_axial, z_dist;
};

inline ThresholdReport threshold_report(const ClampedBoundary &b) {
  const auto r = c_ly_rot(b);
  const auto s = c_ly(b);
  return {t_tau(b), r.value, r.h_star, s.value, s.z_axial, s.z_dist};
}

//! Willmore energy of the spherical cap whose outward profile co-normal at
//! the boundary circle is tau.
inline double spherical_cap_energy(const UnitDir &tau) {
  if (std::abs(tau.t1) < 1e-12)
    throw VerticalTangent("spherical cap undefined for a vertical tangent");
  return 2.0 * std::numbers::pi * (1.0 - tau.t2);
}

enum class Side { left, right };

struct CapArc {
  ProfileCurve arc;
  double h;      // axial coordinate where the circle meets the axis
  double center; // x_c
  double radius; // R
};

//! Arc of the circle centred on the axis through p with tangent tau, running
//! from p to the axis on the requested side. The last node is lifted to
//! height eps_axis·R.
inline CapArc construct_cap(const HPoint &p, const UnitDir &tau, Side side, int N = 1024, double eps_axis = 1e-6) {
  if (std::abs(tau.t1) < 1e-12)
    throw VerticalTangent("cap construction needs a non-vertical tangent");
  const double xc = p.a + p.r * tau.t2 / tau.t1;
  const double R = std::hypot(p.a - xc, p.r);
  const double phi0 = std::atan2(p.r, p.a - xc);
  const double lift = std::asin(eps_axis);
  const double phi1 = side == Side::right ? lift : std::numbers::pi - lift;
  std::vector<HPoint> v(N + 1);
  for (int i = 0; i <= N; ++i) {
    const double phi = phi0 + (phi1 - phi0) * i / N;
    v[i] = {xc + R * std::cos(phi), R * std::sin(phi)};
  }
  v[0] = p;
  v[N] = {xc + R * std::cos(phi1), eps_axis * R};
  return {ProfileCurve(std::move(v)), side == Side::right ? xc + R : xc - R, xc, R};
}

//! Side on which the cap leaving p along (-1)^y tau reaches the axis.
inline Side natural_side(const UnitDir &tau, int y) {
  const double dx = (y == 0 ? 1.0 : -1.0) * tau.t1;
  return dx > 0.0 ? Side::right : Side::left;
}

struct CapIdentity {
  double lhs, rhs, h;
};

//! Compares the Willmore energy of the revolved cap with 4 pi minus twice
//! the single-circle boundary integral at (h, 0, 0), co-normal (-1)^(1+y) tau.
inline CapIdentity cap_identity_check(const HPoint &p, const UnitDir &tau, int y, std::optional<Side> side = {},
                                      int N = 1024) {
  const Side sd = side.value_or(natural_side(tau, y));
  const auto cap = construct_cap(p, tau, sd, N);
  const double lhs = willmore_energy(revolve(cap.arc));
  const double sgn = y == 1 ? 1.0 : -1.0;
  const BoundaryCircle c{p.a, p.r, sgn * tau.vec()};
  const double rhs = 4.0 * std::numbers::pi - 2.0 * detail::axial_circle_integral(c, cap.h);
  return {lhs, rhs, cap.h};
}

} // namespace willflow
