#pragma once
#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <functional>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "errors.hpp"
#include "jet.hpp"

namespace willflow {

struct Vec2 {
  double x = 0.0, y = 0.0;
};
inline Vec2 operator+(Vec2 a, Vec2 b) { return {a.x + b.x, a.y + b.y}; }
inline Vec2 operator-(Vec2 a, Vec2 b) { return {a.x - b.x, a.y - b.y}; }
inline Vec2 operator*(double s, Vec2 a) { return {s * a.x, s * a.y}; }
inline Vec2 operator*(Vec2 a, double s) { return {s * a.x, s * a.y}; }
inline double dot(Vec2 a, Vec2 b) { return a.x * b.x + a.y * b.y; }
inline double cross(Vec2 a, Vec2 b) { return a.x * b.y - a.y * b.x; }
inline double norm(Vec2 a) { return std::hypot(a.x, a.y); }
//! Counter-clockwise rotation by a right angle.
inline Vec2 perp(Vec2 a) { return {-a.y, a.x}; }

//! Point of the upper half-plane: axial coordinate a, height r > 0.
struct HPoint {
  double a = 0.0, r = 1.0;
  Vec2 vec() const { return {a, r}; }
  static HPoint from(Vec2 v) { return {v.x, v.y}; }
};

//! Hyperbolic norm |v|_g = |v| / r of a tangent vector based at p.
inline double g_norm(const HPoint &p, Vec2 v) { return norm(v) / p.r; }

struct UnitDir {
  double t1 = 1.0, t2 = 0.0;
  UnitDir() = default;
  UnitDir(double x, double y) : t1(x), t2(y) {
    if (std::abs(x * x + y * y - 1.0) > 1e-12)
      throw std::invalid_argument("UnitDir: not of unit length");
  }
  static UnitDir normalized(double x, double y) {
    const double n = std::hypot(x, y);
    if (!(n > 0.0) || !std::isfinite(n))
      throw std::invalid_argument("UnitDir: zero or non-finite direction");
    return UnitDir(x / n, y / n);
  }
  static UnitDir from_angle(double th) { return UnitDir(std::cos(th), std::sin(th)); }
  Vec2 vec() const { return {t1, t2}; }
};

//! Clamped boundary data: endpoint positions and endpoint unit tangents.
struct ClampedBoundary {
  HPoint p0, p1;
  UnitDir tau0, tau1;
};

//! Immersed curve in the half-plane sampled on the uniform grid x_i = i/N.
class ProfileCurve {
public:
  ProfileCurve() = default;
  explicit ProfileCurve(std::vector<HPoint> nodes) : nodes_(std::move(nodes)) { validate(); }

  static ProfileCurve from_function(int N, const std::function<HPoint(double)> &f) {
    std::vector<HPoint> v(N + 1);
    for (int i = 0; i <= N; ++i)
      v[i] = f(static_cast<double>(i) / N);
    return ProfileCurve(std::move(v));
  }

  int N() const { return static_cast<int>(nodes_.size()) - 1; }
  const std::vector<HPoint> &nodes() const { return nodes_; }
  const HPoint &operator[](int i) const { return nodes_[i]; }
  const HPoint &front() const { return nodes_.front(); }
  const HPoint &back() const { return nodes_.back(); }

private:
  void validate() const {
    if (nodes_.size() < 9)
      throw DegenerateImmersion("ProfileCurve: need N >= 8");
    double dmin = std::numeric_limits<double>::infinity(), dmax = 0.0;
    for (std::size_t i = 0; i < nodes_.size(); ++i) {
      const auto &p = nodes_[i];
      if (!std::isfinite(p.a) || !std::isfinite(p.r))
        throw DegenerateImmersion("ProfileCurve: non-finite node " + std::to_string(i));
      if (!(p.r > 0.0))
        throw DegenerateImmersion("ProfileCurve: node " + std::to_string(i) + " not above the axis");
      if (i > 0) {
        const double d = norm(p.vec() - nodes_[i - 1].vec());
        dmin = std::min(dmin, d);
        dmax = std::max(dmax, d);
      }
    }
    if (!(dmin >= 1e-12 * dmax) || !(dmax > 0.0))
      throw DegenerateImmersion("ProfileCurve: consecutive nodes coincide");
  }

  std::vector<HPoint> nodes_;
};

struct CurveGeometry {
  std::vector<Vec2> d1;       // discrete first derivative in x
  std::vector<Vec2> d2;       // discrete second derivative in x
  std::vector<Vec2> tangent;  // Euclidean unit tangent
  std::vector<double> speed;  // |d1|
  std::vector<double> hspeed; // |d1|_g = |d1| / r
  std::vector<Vec2> kappa;    // curvature vector, Euclidean components
  std::vector<double> kappa_g2;
};

//! Per-node two-component field, Euclidean components.
struct ElasticGradient {
  std::vector<Vec2> field;
};

namespace detail {

template <class T> struct LocalDerivs {
  T y, d1x, d1y, d2x, d2y;
};

// q = (a,r) of nodes i-1, i, i+1.
template <class T> LocalDerivs<T> interior_derivs(const std::array<T, 6> &q, double n) {
  const double hn = 0.5 * n, n2 = n * n;
  return {q[3], (q[4] - q[0]) * hn, (q[5] - q[1]) * hn, (q[4] - 2.0 * q[2] + q[0]) * n2,
          (q[5] - 2.0 * q[3] + q[1]) * n2};
}

// q = (a,r) of the endpoint, its neighbour and the next node. The first
// derivative is the one-sided second-order stencil pointing into the curve;
// the second derivative is that of the mirror image of the neighbour across
// the endpoint normal line.
template <class T> LocalDerivs<T> end_derivs(const std::array<T, 6> &q, double n) {
  using std::sqrt;
  const double hn = 0.5 * n, n2 = n * n;
  const T d1x = (4.0 * q[2] - 3.0 * q[0] - q[4]) * hn;
  const T d1y = (4.0 * q[3] - 3.0 * q[1] - q[5]) * hn;
  const T len = sqrt(d1x * d1x + d1y * d1y);
  const T nx = -d1y / len, ny = d1x / len;
  const T wn = (q[2] - q[0]) * nx + (q[3] - q[1]) * ny;
  const T s = 2.0 * n2 * wn;
  return {q[1], d1x, d1y, s * nx, s * ny};
}

// Squared hyperbolic curvature times hyperbolic speed.
template <class T> T integrand(const LocalDerivs<T> &l) {
  using std::sqrt;
  const T s2 = l.d1x * l.d1x + l.d1y * l.d1y;
  const T num = l.y * (l.d1x * l.d2y - l.d1y * l.d2x) + l.d1x * s2;
  return num * num / (l.y * s2 * s2 * sqrt(s2));
}

struct Term {
  std::array<int, 3> idx;
  bool end;
  double weight;
};

inline std::vector<Term> terms(int N) {
  const double h = 1.0 / N;
  std::vector<Term> t;
  t.reserve(N + 1);
  t.push_back({{0, 1, 2}, true, 0.5 * h});
  for (int i = 1; i < N; ++i)
    t.push_back({{i - 1, i, i + 1}, false, h});
  t.push_back({{N, N - 1, N - 2}, true, 0.5 * h});
  return t;
}

template <class T> T term_value(const Term &tm, const std::array<T, 6> &q, int N) {
  return integrand(tm.end ? end_derivs(q, N) : interior_derivs(q, N));
}

inline void check_finite(double v, int i) {
  if (!std::isfinite(v))
    throw DegenerateImmersion("discrete speed underflow near node " + std::to_string(i));
}

inline double trapezoid_weight(int i, int N) { return (i == 0 || i == N) ? 0.5 / N : 1.0 / N; }

} // namespace detail

inline CurveGeometry geometry(const ProfileCurve &c) {
  const int N = c.N();
  const auto &u = c.nodes();
  CurveGeometry g;
  g.d1.resize(N + 1);
  g.d2.resize(N + 1);
  g.tangent.resize(N + 1);
  g.speed.resize(N + 1);
  g.hspeed.resize(N + 1);
  g.kappa.resize(N + 1);
  g.kappa_g2.resize(N + 1);
  for (int i = 0; i <= N; ++i) {
    detail::LocalDerivs<double> l;
    if (i == 0 || i == N) {
      const int s = i == 0 ? 1 : -1;
      const std::array<double, 6> q{u[i].a, u[i].r, u[i + s].a, u[i + s].r, u[i + 2 * s].a, u[i + 2 * s].r};
      l = detail::end_derivs(q, N);
      l.d1x *= s;
      l.d1y *= s;
    } else {
      const std::array<double, 6> q{u[i - 1].a, u[i - 1].r, u[i].a, u[i].r, u[i + 1].a, u[i + 1].r};
      l = detail::interior_derivs(q, N);
    }
    const Vec2 d1{l.d1x, l.d1y}, d2{l.d2x, l.d2y};
    const double L = norm(d1);
    if (!(L > 1e-300) || !std::isfinite(L))
      throw DegenerateImmersion("discrete speed underflow at node " + std::to_string(i));
    const double r = u[i].r, q = r / L;
    const Vec2 T = (1.0 / L) * d1;
    const Vec2 a = (q * q) * d2;
    const Vec2 ds2u = a - dot(a, T) * T + (r * d1.y / L) * T;
    const Vec2 su = r * T;
    const Vec2 k = ds2u + (1.0 / r) * Vec2{-2.0 * su.x * su.y, su.x * su.x - su.y * su.y};
    g.d1[i] = d1;
    g.d2[i] = d2;
    g.tangent[i] = T;
    g.speed[i] = L;
    g.hspeed[i] = L / r;
    g.kappa[i] = k;
    g.kappa_g2[i] = dot(k, k) / (r * r);
  }
  return g;
}

//! Euclidean length of the polygon and trapezoidal hyperbolic length.
struct Lengths {
  double L_euclid, L_hyperbolic;
};

inline Lengths lengths(const ProfileCurve &c) {
  const auto g = geometry(c);
  const int N = c.N();
  Lengths out{0.0, 0.0};
  for (int i = 0; i <= N; ++i)
    out.L_hyperbolic += detail::trapezoid_weight(i, N) * g.hspeed[i];
  for (int i = 0; i < N; ++i)
    out.L_euclid += norm(c[i + 1].vec() - c[i].vec());
  return out;
}

inline double elastic_energy(const ProfileCurve &c) {
  const int N = c.N();
  const auto &u = c.nodes();
  double E = 0.0;
  for (const auto &tm : detail::terms(N)) {
    std::array<double, 6> q;
    for (int k = 0; k < 3; ++k) {
      q[2 * k] = u[tm.idx[k]].a;
      q[2 * k + 1] = u[tm.idx[k]].r;
    }
    const double f = detail::term_value(tm, q, N);
    detail::check_finite(f, tm.idx[0]);
    E += tm.weight * f;
  }
  return E;
}

//! Discrete energy and its exact partial derivatives dE/d(a_i, r_i),
//! flattened as (a_0, r_0, a_1, r_1, ...).
struct EnergyAndPartials {
  double E = 0.0;
  std::vector<double> dE;
};

inline EnergyAndPartials elastic_partials(const ProfileCurve &c) {
  using J = Jet<double, 6>;
  const int N = c.N();
  const auto &u = c.nodes();
  EnergyAndPartials out;
  out.dE.assign(2 * (N + 1), 0.0);
  for (const auto &tm : detail::terms(N)) {
    std::array<J, 6> q;
    for (int k = 0; k < 3; ++k) {
      q[2 * k] = J::variable(u[tm.idx[k]].a, 2 * k);
      q[2 * k + 1] = J::variable(u[tm.idx[k]].r, 2 * k + 1);
    }
    const J f = detail::term_value(tm, q, N);
    detail::check_finite(f.v, tm.idx[0]);
    out.E += tm.weight * f.v;
    for (int k = 0; k < 3; ++k) {
      out.dE[2 * tm.idx[k]] += tm.weight * f.d[2 * k];
      out.dE[2 * tm.idx[k] + 1] += tm.weight * f.d[2 * k + 1];
    }
  }
  return out;
}

//! Weighted 6x6 second-derivative block of one energy term.
struct HessianBlock {
  std::array<int, 3> idx;
  std::array<std::array<double, 6>, 6> h;
};

inline std::vector<HessianBlock> elastic_hessian_blocks(const ProfileCurve &c) {
  using J1 = Jet<double, 6>;
  using J2 = Jet<J1, 6>;
  const int N = c.N();
  const auto &u = c.nodes();
  std::vector<HessianBlock> out;
  out.reserve(N + 1);
  for (const auto &tm : detail::terms(N)) {
    std::array<J2, 6> q;
    for (int k = 0; k < 3; ++k) {
      const double vals[2] = {u[tm.idx[k]].a, u[tm.idx[k]].r};
      for (int m = 0; m < 2; ++m) {
        const int j = 2 * k + m;
        q[j] = J2::variable(J1::variable(vals[m], j), j);
      }
    }
    const J2 f = detail::term_value(tm, q, N);
    HessianBlock b;
    b.idx = tm.idx;
    for (int i = 0; i < 6; ++i)
      for (int j = 0; j < 6; ++j)
        b.h[i][j] = tm.weight * f.d[i].d[j];
    out.push_back(b);
  }
  return out;
}

//! Hyperbolic arc-length weights of the trapezoidal rule.
inline std::vector<double> arc_weights(const ProfileCurve &c, const CurveGeometry &g) {
  const int N = c.N();
  std::vector<double> w(N + 1);
  for (int i = 0; i <= N; ++i)
    w[i] = detail::trapezoid_weight(i, N) * g.hspeed[i];
  return w;
}

//! L2(ds) gradient of the discrete energy: the vector field whose discrete
//! pairing sum_i <grad_i, phi_i>_g ds_i equals the directional derivative
//! of elastic_energy along phi.
inline ElasticGradient elastic_gradient(const ProfileCurve &c) {
  const auto p = elastic_partials(c);
  const auto g = geometry(c);
  const auto w = arc_weights(c, g);
  ElasticGradient out;
  out.field.resize(c.N() + 1);
  for (int i = 0; i <= c.N(); ++i) {
    const double r2 = c[i].r * c[i].r;
    out.field[i] = (r2 / w[i]) * Vec2{p.dE[2 * i], p.dE[2 * i + 1]};
  }
  return out;
}

//! Discrete pairing sum_i <grad_i, phi_i>_g ds_i.
inline double discrete_pairing(const ProfileCurve &c, const ElasticGradient &grad, const std::vector<Vec2> &phi) {
  const auto g = geometry(c);
  const auto w = arc_weights(c, g);
  double s = 0.0;
  for (int i = 0; i <= c.N(); ++i)
    s += dot(grad.field[i], phi[i]) / (c[i].r * c[i].r) * w[i];
  return s;
}

//! First and last node index entering interior residuals. The endpoint and
//! the two nodes that carry its tangent constraint are excluded.
inline int residual_first(int) { return 3; }
inline int residual_last(int N) { return N - 3; }

//! max over interior nodes of the hyperbolic norm of the normal part of
//! the elastic gradient.
inline double normal_residual(const ProfileCurve &c) {
  const auto grad = elastic_gradient(c);
  const auto g = geometry(c);
  double m = 0.0;
  for (int i = residual_first(c.N()); i <= residual_last(c.N()); ++i) {
    const Vec2 n = perp(g.tangent[i]);
    m = std::max(m, std::abs(dot(grad.field[i], n)) / c[i].r);
  }
  return m;
}

//! Unit tangents of the endpoint stencils, oriented along increasing x.
inline std::pair<Vec2, Vec2> end_tangents(const ProfileCurve &c) {
  const auto &u = c.nodes();
  const int N = c.N();
  const Vec2 a = 4.0 * u[1].vec() - u[2].vec() - 3.0 * u[0].vec();
  const Vec2 b = 3.0 * u[N].vec() - 4.0 * u[N - 1].vec() + u[N - 2].vec();
  return {(1.0 / norm(a)) * a, (1.0 / norm(b)) * b};
}

//! Set the endpoints to the clamped positions and restore the endpoint
//! tangent directions by the minimal-norm move of the two adjacent nodes.
inline std::vector<HPoint> impose_boundary(std::vector<HPoint> u, const ClampedBoundary &b) {
  const int N = static_cast<int>(u.size()) - 1;
  u[0] = b.p0;
  u[N] = b.p1;
  {
    const Vec2 n = perp(b.tau0.vec());
    const double c = dot(n, 4.0 * u[1].vec() - u[2].vec() - 3.0 * u[0].vec());
    const double lam = c / 17.0;
    u[1] = HPoint::from(u[1].vec() - (4.0 * lam) * n);
    u[2] = HPoint::from(u[2].vec() + lam * n);
  }
  {
    const Vec2 n = perp(b.tau1.vec());
    const double c = dot(n, 3.0 * u[N].vec() - 4.0 * u[N - 1].vec() + u[N - 2].vec());
    const double lam = c / 17.0;
    u[N - 1] = HPoint::from(u[N - 1].vec() + (4.0 * lam) * n);
    u[N - 2] = HPoint::from(u[N - 2].vec() - lam * n);
  }
  return u;
}

//! Same constraints as impose_boundary, with each normal correction spread
//! over the whole curve by the cubic x (1 - x)^2 (mirrored at the right end),
//! whose fourth derivative vanishes. An exact curve whose stencil tangent is
//! off by O(h^2) stays smooth.
inline std::vector<HPoint> blend_boundary(std::vector<HPoint> u, const ClampedBoundary &b) {
  const int N = static_cast<int>(u.size()) - 1;
  auto psi = [N](int i) {
    const double x = static_cast<double>(i) / N;
    return x * (1.0 - x) * (1.0 - x);
  };
  const double k = 4.0 * psi(1) - psi(2);
  u[0] = b.p0;
  u[N] = b.p1;
  const Vec2 nl = perp(b.tau0.vec()), nr = perp(b.tau1.vec());
  for (int it = 0; it < 4; ++it) {
    const double lam = -dot(nl, 4.0 * u[1].vec() - u[2].vec() - 3.0 * u[0].vec()) / k;
    for (int i = 1; i < N; ++i)
      u[i] = HPoint::from(u[i].vec() + (lam * psi(i)) * nl);
    const double mu = dot(nr, 3.0 * u[N].vec() - 4.0 * u[N - 1].vec() + u[N - 2].vec()) / k;
    for (int i = 1; i < N; ++i)
      u[N - i] = HPoint::from(u[N - i].vec() + (mu * psi(i)) * nr);
  }
  return u;
}

//! Largest deviation of the curve from the clamped data: endpoint distance
//! or endpoint-tangent distance, whichever is larger.
inline double boundary_defect(const ProfileCurve &c, const ClampedBoundary &b) {
  const auto [t0, t1] = end_tangents(c);
  return std::max({norm(c.front().vec() - b.p0.vec()), norm(c.back().vec() - b.p1.vec()), norm(t0 - b.tau0.vec()),
                   norm(t1 - b.tau1.vec())});
}

inline void require_boundary(const ProfileCurve &c, const ClampedBoundary &b, double tol = 1e-8) {
  const double d = boundary_defect(c, b);
  if (!(d <= tol)) {
    std::ostringstream os;
    os << "curve disagrees with the clamped data by " << d;
    throw BoundaryMismatch(os.str());
  }
}

namespace detail {

// Natural cubic spline through (s_i, y_i).
class Spline1 {
public:
  Spline1(const std::vector<double> &s, const std::vector<double> &y) : s_(s), y_(y), m_(s.size(), 0.0) {
    const std::size_t n = s.size();
    if (n < 3)
      return;
    std::vector<double> a(n, 0.0), b(n, 1.0), c(n, 0.0), d(n, 0.0);
    for (std::size_t i = 1; i + 1 < n; ++i) {
      const double h0 = s[i] - s[i - 1], h1 = s[i + 1] - s[i];
      a[i] = h0;
      b[i] = 2.0 * (h0 + h1);
      c[i] = h1;
      d[i] = 6.0 * ((y[i + 1] - y[i]) / h1 - (y[i] - y[i - 1]) / h0);
    }
    for (std::size_t i = 1; i < n; ++i) {
      const double w = a[i] / b[i - 1];
      b[i] -= w * c[i - 1];
      d[i] -= w * d[i - 1];
    }
    m_[n - 1] = d[n - 1] / b[n - 1];
    for (std::size_t i = n - 1; i-- > 0;)
      m_[i] = (d[i] - c[i] * m_[i + 1]) / b[i];
  }

  double operator()(std::size_t k, double s) const {
    const double h = s_[k + 1] - s_[k];
    const double A = (s_[k + 1] - s) / h, B = (s - s_[k]) / h;
    return A * y_[k] + B * y_[k + 1] + ((A * A * A - A) * m_[k] + (B * B * B - B) * m_[k + 1]) * h * h / 6.0;
  }

private:
  std::vector<double> s_, y_, m_;
};

} // namespace detail

//! Reparametrize to constant Euclidean speed with N_new intervals. Nodes are
//! placed on the cubic interpolant (chord-length parameter) so that all
//! consecutive chords are equal; the endpoints are copied exactly.
inline ProfileCurve resample(const ProfileCurve &c, int N_new) {
  const auto &u = c.nodes();
  const std::size_t n = u.size();
  std::vector<double> s(n, 0.0), xa(n), xr(n);
  for (std::size_t i = 0; i < n; ++i) {
    xa[i] = u[i].a;
    xr[i] = u[i].r;
    if (i > 0)
      s[i] = s[i - 1] + norm(u[i].vec() - u[i - 1].vec());
  }
  const detail::Spline1 sa(s, xa), sr(s, xr);
  auto at = [&](std::size_t k, double t) { return Vec2{sa(k, t), sr(k, t)}; };

  // March with fixed chord length `chord`; returns the nodes and the signed
  // mismatch of the final chord.
  auto march = [&](double chord, std::vector<Vec2> &out) {
    out.assign(1, u[0].vec());
    std::size_t k = 0;
    double t = 0.0;
    for (int j = 1; j < N_new; ++j) {
      const Vec2 P = out.back();
      std::size_t kk = k;
      while (kk + 1 < n && norm(u[kk + 1].vec() - P) < chord)
        ++kk;
      if (kk + 1 >= n)
        return -1.0;
      double lo = (kk == k) ? t : s[kk], hi = s[kk + 1];
      for (int it = 0; it < 200 && hi - lo > 0.0; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi)
          break;
        (norm(at(kk, mid) - P) < chord ? lo : hi) = mid;
      }
      k = kk;
      t = hi;
      out.push_back(at(kk, hi));
    }
    return norm(u[n - 1].vec() - out.back()) - chord;
  };

  const double total = s[n - 1];
  double lo = 0.5 * total / N_new, hi = 1.5 * total / N_new;
  std::vector<Vec2> pts;
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi)
      break;
    const double f = march(mid, pts);
    (f > 0.0 ? lo : hi) = mid;
  }
  if (march(lo, pts) < -0.5 * lo)
    throw DegenerateImmersion("resample: chord marching failed");
  std::vector<HPoint> v;
  v.reserve(N_new + 1);
  for (const auto &p : pts)
    v.push_back(HPoint::from(p));
  v.push_back(u[n - 1]);
  v.front() = u[0];
  return ProfileCurve(std::move(v));
}

inline std::string fmt17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

inline void write_curve_csv(std::ostream &os, const ProfileCurve &c) {
  os << "x,a,r\n";
  const int N = c.N();
  for (int i = 0; i <= N; ++i)
    os << fmt17(static_cast<double>(i) / N) << ',' << fmt17(c[i].a) << ',' << fmt17(c[i].r) << '\n';
}

inline ProfileCurve read_curve_csv(std::istream &is) {
  std::string line;
  if (!std::getline(is, line) || line.rfind("x,a,r", 0) != 0)
    throw std::runtime_error("curve CSV: expected header x,a,r");
  std::vector<HPoint> v;
  double prev = -std::numeric_limits<double>::infinity();
  int row = 1;
  while (std::getline(is, line)) {
    ++row;
    if (line.empty())
      continue;
    std::istringstream ls(line);
    std::string f[3];
    for (auto &s : f)
      if (!std::getline(ls, s, ','))
        throw std::runtime_error("curve CSV: short row " + std::to_string(row));
    const double x = std::stod(f[0]);
    if (!(x > prev))
      throw std::runtime_error("curve CSV: x not ascending at row " + std::to_string(row));
    prev = x;
    v.push_back({std::stod(f[1]), std::stod(f[2])});
  }
  return ProfileCurve(std::move(v));
}

} // namespace willflow
