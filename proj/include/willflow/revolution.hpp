#pragma once
#include <cmath>
#include <numbers>
#include <ostream>
#include <vector>

#include "hcurve.hpp"

namespace willflow {

//! Surface obtained by rotating a profile curve about the horizontal axis,
//! f(x, phi) = (a(x), r(x) cos phi, r(x) sin phi).
//!
//! Orientation: N = d_x f × d_phi f / |...|. In the profile plane this is the
//! tangent rotated clockwise, (r', -a') / |u'|. With A_ij = <d_ij f, N> and
//! H = g^ij A_ij / 2 the unit sphere traversed by increasing polar angle has
//! outward N and H = -1; the mean curvature vector H N points inward.
struct RevolutionSurface {
  ProfileCurve profile;
  int m = 64;
  std::vector<double> H;
  std::vector<double> A0sq;
  std::vector<double> kappa_prof;
  std::vector<double> kappa_ring;
  std::vector<double> ring_radius;
  std::vector<double> weight; // 2 pi r_i ds_i, ds_i the Euclidean arc element
  std::vector<Vec2> normal;   // N in the profile plane (phi = 0)

  double area() const {
    double s = 0.0;
    for (double w : weight)
      s += w;
    return s;
  }
};

inline RevolutionSurface revolve(const ProfileCurve &c, int m = 64) {
  if (m < 16)
    throw std::invalid_argument("revolve: need m >= 16 azimuthal samples");
  const auto g = geometry(c);
  const int N = c.N();
  RevolutionSurface s;
  s.profile = c;
  s.m = m;
  s.H.resize(N + 1);
  s.A0sq.resize(N + 1);
  s.kappa_prof.resize(N + 1);
  s.kappa_ring.resize(N + 1);
  s.ring_radius.resize(N + 1);
  s.weight.resize(N + 1);
  s.normal.resize(N + 1);
  for (int i = 0; i <= N; ++i) {
    const double L = g.speed[i], r = c[i].r;
    const double kp = -cross(g.d1[i], g.d2[i]) / (L * L * L);
    const double kr = g.d1[i].x / (r * L);
    s.kappa_prof[i] = kp;
    s.kappa_ring[i] = kr;
    s.H[i] = 0.5 * (kp + kr);
    s.A0sq[i] = 0.5 * (kp - kr) * (kp - kr);
    s.ring_radius[i] = r;
    s.weight[i] = 2.0 * std::numbers::pi * r * detail::trapezoid_weight(i, N) * L;
    s.normal[i] = Vec2{g.tangent[i].y, -g.tangent[i].x};
  }
  return s;
}

inline double willmore_energy(const RevolutionSurface &s) {
  double W = 0.0;
  for (std::size_t i = 0; i < s.H.size(); ++i)
    W += s.H[i] * s.H[i] * s.weight[i];
  return W;
}

//! Willmore energy of the revolved surface predicted from the elastic
//! energy of the profile and its endpoint tangents.
inline double bryant_griffiths(const ProfileCurve &c) {
  const auto [t0, t1] = end_tangents(c);
  return 0.5 * std::numbers::pi * (elastic_energy(c) - 4.0 * (t1.y - t0.y));
}

//! Stationarity residual: max over interior nodes of |grad E|_g (normal part).
inline double willmore_residual(const ProfileCurve &c) { return normal_residual(c); }

inline void write_surface_csv(std::ostream &os, const RevolutionSurface &s) {
  os << "x,a,r,H,A0sq,w\n";
  const int N = s.profile.N();
  for (int i = 0; i <= N; ++i)
    os << fmt17(static_cast<double>(i) / N) << ',' << fmt17(s.profile[i].a) << ',' << fmt17(s.profile[i].r) << ','
       << fmt17(s.H[i]) << ',' << fmt17(s.A0sq[i]) << ',' << fmt17(s.weight[i]) << '\n';
}

//! Vertex positions of the m-fold revolved mesh in OBJ text form.
inline void write_surface_obj(std::ostream &os, const RevolutionSurface &s) {
  const int N = s.profile.N();
  for (int i = 0; i <= N; ++i)
    for (int k = 0; k < s.m; ++k) {
      const double phi = 2.0 * std::numbers::pi * k / s.m;
      os << "v " << fmt17(s.profile[i].a) << ' ' << fmt17(s.profile[i].r * std::cos(phi)) << ' '
         << fmt17(s.profile[i].r * std::sin(phi)) << '\n';
    }
}

} // namespace willflow
