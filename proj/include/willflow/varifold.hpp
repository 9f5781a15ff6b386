#pragma once
#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <optional>
#include <ostream>
#include <vector>

#include "revolution.hpp"
#include "thresholds.hpp"

namespace willflow {

//! Axisymmetric integral varifold: a sum of revolved sheets together with the
//! boundary measure on circles and its co-normal.
struct Varifold {
  std::vector<RevolutionSurface> sheets;
  std::vector<BoundaryCircle> boundary;

  double willmore() const {
    double W = 0.0;
    for (const auto &s : sheets)
      W += willmore_energy(s);
    return W;
  }
};

inline Varifold make_varifold(const RevolutionSurface &s) { return {{s}, {}}; }
inline Varifold make_varifold(const RevolutionSurface &s, const ClampedBoundary &b) {
  return {{s}, boundary_circles(b)};
}

struct DensityTerms {
  double mass = 0.0;     // mu(B_t) / t^2
  double willmore = 0.0; // (1/4) int_{B_t} |H|^2
  double pairing = 0.0;  // int_{B_t} <H, x - z> / t^2
  double boundary = 0.0; // (1/2) int_{B_t} (1/|x-z|^2 - 1/t^2) <x - z, eta> dsigma
  double total() const { return mass + willmore + pairing + boundary; }
};

struct DensityProfile {
  Vec3 z;
  std::vector<double> radii;
  std::vector<double> A_values;
  std::vector<DensityTerms> terms;
  double theta_hat = 0.0;
};

namespace detail {

// Gauss-Legendre nodes and weights on [0, 1].
inline const std::array<std::array<double, 2>, 8> &gauss8() {
  static const std::array<std::array<double, 2>, 8> g = [] {
    const double x[4] = {0.1834346424956498, 0.5255324099163290, 0.7966664774136267, 0.9602898564975363};
    const double w[4] = {0.3626837833783620, 0.3137066458778873, 0.2223810344533745, 0.1012285362903763};
    std::array<std::array<double, 2>, 8> out{};
    for (int k = 0; k < 4; ++k) {
      out[2 * k] = {0.5 * (1.0 - x[k]), 0.5 * w[k]};
      out[2 * k + 1] = {0.5 * (1.0 + x[k]), 0.5 * w[k]};
    }
    return out;
  }();
  return g;
}

// Half-angle of the arc of the ring (a, r) inside B_t((z1, d, 0)).
inline double ring_half_angle(double a, double r, double z1, double d, double t) {
  const double da = a - z1;
  const double lo = da * da + (r - d) * (r - d), hi = da * da + (r + d) * (r + d);
  const double t2 = t * t;
  if (t2 <= lo)
    return 0.0;
  if (t2 >= hi)
    return std::numbers::pi;
  const double c = (da * da + r * r + d * d - t2) / (2.0 * r * d);
  return std::acos(std::clamp(c, -1.0, 1.0));
}

// Roots in (0, 1) of |(a0 + s da, r0 + s dr) - (z1, e)|^2 = t^2.
inline void segment_crossings(Vec2 p, Vec2 q, double z1, double e, double t, std::vector<double> &out) {
  const Vec2 v = q - p, w = p - Vec2{z1, e};
  const double A = dot(v, v), B = 2.0 * dot(v, w), C = dot(w, w) - t * t;
  const double disc = B * B - 4.0 * A * C;
  if (A <= 0.0 || disc < 0.0)
    return;
  const double sq = std::sqrt(disc);
  const double q1 = -0.5 * (B + std::copysign(sq, B));
  const double r1 = q1 / A, r2 = q1 != 0.0 ? C / q1 : r1;
  for (double s : {r1, r2})
    if (s > 0.0 && s < 1.0)
      out.push_back(s);
}

struct RingSums {
  double mass = 0.0, willmore = 0.0, pairing = 0.0;
};

// Integrals over B_t((z1, d, 0)) of 1, |H|^2 / 4 and <H N, x - z> over one
// revolved sheet, treating the profile as piecewise linear with H varying
// linearly along each segment.
inline RingSums sheet_ball_integrals(const RevolutionSurface &s, double z1, double d, double t) {
  RingSums out;
  const int N = s.profile.N();
  const auto &u = s.profile.nodes();
  std::vector<double> cuts;
  for (int i = 0; i < N; ++i) {
    const Vec2 p = u[i].vec(), q = u[i + 1].vec();
    const double len = norm(q - p);
    // Skip segments entirely outside the ball.
    const double da = std::max({0.0, std::min(p.x, q.x) - z1 - t, z1 - t - std::max(p.x, q.x)});
    if (da > 0.0)
      continue;
    cuts.assign({0.0, 1.0});
    segment_crossings(p, q, z1, d, t, cuts);
    segment_crossings(p, q, z1, -d, t, cuts);
    std::sort(cuts.begin(), cuts.end());
    const Vec2 nrm{(q.y - p.y) / len, -(q.x - p.x) / len};
    for (std::size_t k = 0; k + 1 < cuts.size(); ++k) {
      const double s0 = cuts[k], s1 = cuts[k + 1];
      if (s1 - s0 <= 0.0)
        continue;
      for (const auto &[xg, wg] : gauss8()) {
        // cosine substitution smooths the square-root behaviour at the cuts
        const double v = 0.5 * (1.0 - std::cos(std::numbers::pi * xg));
        const double jac = 0.5 * std::numbers::pi * std::sin(std::numbers::pi * xg);
        const double sp = s0 + (s1 - s0) * v;
        const double a = p.x + sp * (q.x - p.x), r = p.y + sp * (q.y - p.y);
        const double phi = ring_half_angle(a, r, z1, d, t);
        if (phi <= 0.0)
          continue;
        const double H = s.H[i] + sp * (s.H[i + 1] - s.H[i]);
        const double wq = wg * jac * (s1 - s0) * len;
        const double ring = 2.0 * phi * r;
        out.mass += wq * ring;
        out.willmore += wq * 0.25 * H * H * ring;
        const double pair = 2.0 * phi * (nrm.x * (a - z1) + nrm.y * r) - 2.0 * nrm.y * d * std::sin(phi);
        out.pairing += wq * H * r * pair;
      }
    }
  }
  return out;
}

// (1/2) int over the part of the circle inside B_t of
// (1/|x-z|^2 - 1/t^2) <x - z, eta>.
inline double circle_ball_term(const BoundaryCircle &c, double z1, double d, double t) {
  const double dx = c.axial - z1, p = c.radius;
  const double lo = dx * dx + (p - d) * (p - d), hi = dx * dx + (p + d) * (p + d);
  const double t2 = t * t;
  if (t2 <= lo)
    return 0.0;
  if (lo < 1e-18 * std::max(1.0, p * p))
    throw SingularPoint("point lies on a boundary circle");
  const double A = c.eta.x * dx + c.eta.y * p;
  const double C = dx * dx + p * p + d * d, D = 2.0 * p * d;
  double th;
  if (t2 >= hi)
    th = std::numbers::pi;
  else
    th = std::acos(std::clamp((C - t2) / D, -1.0, 1.0));
  const double sq = std::sqrt(lo * hi);
  double J;
  if (th >= std::numbers::pi)
    J = 2.0 * std::numbers::pi / sq;
  else
    J = 4.0 / sq * std::atan(std::sqrt(hi / lo) * std::tan(0.5 * th));
  const double k = 0.5 * c.eta.y / p;
  const double first = k * 2.0 * th + (A - k * C) * J;
  const double second = 2.0 * th * A - 2.0 * c.eta.y * d * std::sin(th);
  return 0.5 * p * (first - second / t2);
}

inline std::pair<double, double> reduce(const Vec3 &z) { return {z.x, std::hypot(z.y, z.z)}; }

} // namespace detail

//! Area of the varifold inside the open ball B_t(z).
inline double ball_mass(const Varifold &V, const Vec3 &z, double t) {
  const auto [z1, d] = detail::reduce(z);
  double m = 0.0;
  for (const auto &s : V.sheets)
    m += detail::sheet_ball_integrals(s, z1, d, t).mass;
  return m;
}

inline double ball_mass(const RevolutionSurface &s, const Vec3 &z, double t) { return ball_mass(make_varifold(s), z, t); }

//! Terms of Simon's monotone quantity A_z(t).
inline DensityTerms simon_terms(const Varifold &V, const Vec3 &z, double t) {
  const auto [z1, d] = detail::reduce(z);
  DensityTerms out;
  for (const auto &s : V.sheets) {
    const auto r = detail::sheet_ball_integrals(s, z1, d, t);
    out.mass += r.mass / (t * t);
    out.willmore += r.willmore;
    out.pairing += r.pairing / (t * t);
  }
  for (const auto &c : V.boundary)
    out.boundary += detail::circle_ball_term(c, z1, d, t);
  return out;
}

inline std::vector<double> log_radii(double t_min, double t_max, int n) {
  std::vector<double> r(n);
  for (int k = 0; k < n; ++k)
    r[k] = t_min * std::pow(t_max / t_min, static_cast<double>(k) / (n - 1));
  return r;
}

//! Density by a least-squares fit of mu(B_t) / (pi t^2) = theta + c t over
//! log-spaced radii in [t_min, t_max].
inline double density_estimate(const Varifold &V, const Vec3 &z, double t_min, double t_max, int samples = 16) {
  if (!(t_min > 0.0 && t_min < t_max))
    throw std::invalid_argument("density_estimate: need 0 < t_min < t_max");
  detail::require_off_circles(V.boundary, z);
  const auto radii = log_radii(t_min, t_max, samples);
  double St = 0, Sy = 0, Stt = 0, Sty = 0;
  for (double t : radii) {
    const double y = ball_mass(V, z, t) / (std::numbers::pi * t * t);
    St += t;
    Sy += y;
    Stt += t * t;
    Sty += t * y;
  }
  const double n = samples;
  const double slope = (n * Sty - St * Sy) / (n * Stt - St * St);
  return (Sy - slope * St) / n;
}

namespace detail {

inline double sheet_scale(const Varifold &V) {
  double lo = 1e300, hi = -1e300, rmax = 0.0;
  for (const auto &s : V.sheets)
    for (const auto &p : s.profile.nodes()) {
      lo = std::min(lo, p.a);
      hi = std::max(hi, p.a);
      rmax = std::max(rmax, p.r);
    }
  return std::hypot(hi - lo, 2.0 * rmax);
}

} // namespace detail

//! Default density fitting window [0.02, 0.2] times half the extent of the sheets.
inline std::pair<double, double> density_window(const Varifold &V) {
  const double s = 0.5 * detail::sheet_scale(V);
  return {0.02 * s, 0.2 * s};
}

inline DensityProfile simon_profile(const Varifold &V, const Vec3 &z, const std::vector<double> &radii,
                                    std::optional<std::pair<double, double>> window = {}) {
  if (radii.empty() || !(radii.front() > 0.0))
    throw std::invalid_argument("simon_profile: radii must be positive");
  for (std::size_t k = 1; k < radii.size(); ++k)
    if (!(radii[k] > radii[k - 1]))
      throw std::invalid_argument("simon_profile: radii must increase");
  detail::require_off_circles(V.boundary, z);
  DensityProfile p;
  p.z = z;
  p.radii = radii;
  for (double t : radii) {
    p.terms.push_back(simon_terms(V, z, t));
    p.A_values.push_back(p.terms.back().total());
  }
  const auto [t0, t1] = window.value_or(density_window(V));
  p.theta_hat = density_estimate(V, z, t0, t1);
  return p;
}

//! Right-hand side of the Li-Yau type bound: W/4 + (1/2) boundary integral.
inline double li_yau_rhs(const Varifold &V, const Vec3 &z) {
  const double b = V.boundary.empty() ? 0.0 : boundary_integral(V.boundary, z);
  return 0.25 * V.willmore() + 0.5 * b;
}

//! Integral of |H/2 + (x - z)^perp / |x - z|^2|^2 over the sheets outside
//! B_sigma(z), (x - z)^perp the normal component.
inline double gap_integral(const Varifold &V, const Vec3 &z, double sigma, int azimuth = 512) {
  const auto [z1, d] = detail::reduce(z);
  double total = 0.0;
  for (const auto &s : V.sheets) {
    const auto &u = s.profile.nodes();
    for (int i = 0; i < s.profile.N(); ++i) {
      const Vec2 p = u[i].vec(), q = u[i + 1].vec();
      const double len = norm(q - p);
      const Vec2 nrm{(q.y - p.y) / len, -(q.x - p.x) / len};
      for (const auto &[xg, wg] : detail::gauss8()) {
        const double a = p.x + xg * (q.x - p.x), r = p.y + xg * (q.y - p.y);
        const double H = s.H[i] + xg * (s.H[i + 1] - s.H[i]);
        double ring = 0.0;
        for (int k = 0; k < azimuth; ++k) {
          const double phi = 2.0 * std::numbers::pi * (k + 0.5) / azimuth;
          const Vec3 w{a - z1, r * std::cos(phi) - d, r * std::sin(phi)};
          const double w2 = w.x * w.x + w.y * w.y + w.z * w.z;
          if (w2 < sigma * sigma)
            continue;
          const double wn = nrm.x * w.x + nrm.y * (w.y * std::cos(phi) + w.z * std::sin(phi));
          const double g = 0.5 * H + wn / w2;
          ring += g * g;
        }
        total += wg * len * r * ring * 2.0 * std::numbers::pi / azimuth;
      }
    }
  }
  return total;
}

enum class Region { axis, all_space };

struct LiYauReport {
  bool passes = false;
  double margin = 0.0;
  std::vector<Vec3> samples;
  std::vector<double> densities;
  bool densities_ok = true;
};


//! Compares W with the Li-Yau threshold of the boundary circles on K. When
//! below, densities are sampled at 32 points of K and checked against 2.
inline LiYauReport li_yau_check(const Varifold &V, Region K, double tol_density = 0.05) {
  LiYauReport rep;
  double threshold = 8.0 * std::numbers::pi;
  if (!V.boundary.empty())
    threshold = K == Region::axis ? c_ly_rot(V.boundary).value : c_ly(V.boundary).value;
  rep.margin = threshold - V.willmore();
  rep.passes = rep.margin > 0.0;
  if (!rep.passes)
    return rep;
  double lo = 1e300, hi = -1e300;
  for (const auto &s : V.sheets)
    for (const auto &p : s.profile.nodes()) {
      lo = std::min(lo, p.a);
      hi = std::max(hi, p.a);
    }
  const auto [t_min, t_max] = density_window(V);
  for (int k = 0; k < 32; ++k) {
    Vec3 z;
    if (K == Region::axis) {
      z = {lo + (hi - lo) * (k + 0.5) / 32.0, 0.0, 0.0};
    } else {
      const auto &s = V.sheets[k % V.sheets.size()];
      const int i = 1 + (s.profile.N() - 2) * k / 31;
      z = {s.profile[i].a, s.profile[i].r, 0.0};
    }
    bool near = false;
    for (const auto &c : V.boundary)
      near = near || distance_to_circle(c, z) < 2.0 * t_max;
    if (near)
      continue;
    const double th = density_estimate(V, z, t_min, t_max);
    rep.samples.push_back(z);
    rep.densities.push_back(th);
    rep.densities_ok = rep.densities_ok && th < 2.0 - tol_density;
  }
  return rep;
}

inline void write_profile_csv(std::ostream &os, const DensityProfile &p) {
  os << "t,A,mass_term,willmore_term,pairing_term,boundary_term\n";
  for (std::size_t k = 0; k < p.radii.size(); ++k) {
    const auto &t = p.terms[k];
    os << fmt17(p.radii[k]) << ',' << fmt17(p.A_values[k]) << ',' << fmt17(t.mass) << ',' << fmt17(t.willmore) << ','
       << fmt17(t.pairing) << ',' << fmt17(t.boundary) << '\n';
  }
}

} // namespace willflow
