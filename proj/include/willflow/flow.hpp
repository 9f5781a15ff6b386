#pragma once
#include <algorithm>
#include <cmath>
#include <optional>
#include <ostream>
#include <vector>

#include <Eigen/Sparse>
#include <Eigen/SparseLU>

#include "revolution.hpp"
#include "thresholds.hpp"
#include "varifold.hpp"

namespace willflow {

enum class Integrator { implicit, rk4 };

//! Time stepping parameters. eps_axis = 0 selects 1e-3 times the smaller
//! boundary height.
struct FlowConfig {
  int N = 256;
  double dt_init = 1e-4;
  double dt_safety = 0.5;
  double dt_grow = 2.0;
  double dt_max = 1e6;
  long max_steps = 200000;
  double tol_grad = 1e-3;
  double eps_axis = 0.0;
  double L_hyp_max = 50.0;
  double chord_hyp_max = 0.5; // largest |u_{i+1} - u_i| / min(r_i, r_{i+1})
  double chord_ratio_max = 1.5; // neighbouring chords; larger ratios trigger a resample
  int resample_every = 50;
  bool stop_on_converge = true;
  Integrator integrator = Integrator::implicit;

  void validate() const {
    auto need = [](bool ok, const char *f, const char *what) {
      if (!ok)
        throw ConfigError(f, what);
    };
    need(N >= 8, "N", "must be at least 8");
    need(dt_init > 0.0, "dt_init", "must be positive");
    need(dt_safety > 0.0 && dt_safety < 1.0, "dt_safety", "must lie in (0, 1)");
    need(dt_grow >= 1.0, "dt_grow", "must be at least 1");
    need(dt_max >= dt_init, "dt_max", "must be at least dt_init");
    need(max_steps > 0, "max_steps", "must be positive");
    need(tol_grad > 0.0, "tol_grad", "must be positive");
    need(eps_axis >= 0.0, "eps_axis", "must be nonnegative");
    need(L_hyp_max > 0.0, "L_hyp_max", "must be positive");
    need(chord_hyp_max > 0.0, "chord_hyp_max", "must be positive");
    need(chord_ratio_max > 1.0, "chord_ratio_max", "must exceed 1");
    need(resample_every > 0, "resample_every", "must be positive");
  }

  double axis_alarm(const ClampedBoundary &b) const {
    return eps_axis > 0.0 ? eps_axis : 1e-3 * std::min(b.p0.r, b.p1.r);
  }
};

struct FlowState {
  double t = 0.0;
  ProfileCurve curve;
  long step_count = 0;
  double dt = 0.0; // trial step carried to the next call
};

struct FlowRecord {
  double t, W, E, L_euc, L_hyp, min_height, grad_norm, verticality, dt;
};

struct FlowTrace {
  std::vector<FlowRecord> records;
  long rejections = 0;
  long resamples = 0;
  long descent_violations = 0;
};

struct GateReport {
  double W0 = 0.0;
  double threshold = 0.0;
  bool satisfied = false;
  double margin = 0.0;
};

struct Diagnostics {
  double min_height = 0.0;
  int min_index = 0;
  double verticality = 0.0;
  double L_euc = 0.0;
  double L_hyp = 0.0;
  double E = 0.0;
  double W = 0.0;
  double grad_norm = 0.0;
  double chord_hyp = 0.0;
};

enum class Outcome { Converged, MaxSteps, SingularitySuspected };

inline const char *to_string(Outcome o) {
  switch (o) {
  case Outcome::Converged:
    return "Converged";
  case Outcome::MaxSteps:
    return "MaxSteps";
  default:
    return "SingularitySuspected";
  }
}

//! Non-strict: W0 equal to the threshold satisfies the gate.
inline bool gate_holds(double W0, double threshold) { return W0 <= threshold; }

inline GateReport gate(const ProfileCurve &initial, const ClampedBoundary &b) {
  require_boundary(initial, b);
  GateReport g;
  g.W0 = bryant_griffiths(initial);
  g.threshold = c_ly_rot(b).value;
  g.margin = g.threshold - g.W0;
  g.satisfied = gate_holds(g.W0, g.threshold);
  return g;
}

//! Normal part of -grad E / (4 r^4), projected so that the endpoint tangent
//! directions are preserved; zero at the endpoints.
inline std::vector<Vec2> velocity(const ProfileCurve &c) {
  const auto p = elastic_partials(c);
  const auto g = geometry(c);
  const auto [t0, t1] = end_tangents(c);
  const int N = c.N();
  const double h = 1.0 / N;
  std::vector<double> rate(N + 1, 0.0), D(N + 1, 1.0);
  std::vector<Vec2> n(N + 1);
  for (int i = 1; i < N; ++i) {
    n[i] = perp(g.tangent[i]);
    D[i] = 4.0 * c[i].r * h * g.speed[i];
    rate[i] = -(n[i].x * p.dE[2 * i] + n[i].y * p.dE[2 * i + 1]) / D[i];
  }
  auto project = [&](int i1, int i2, Vec2 m, double k1, double k2) {
    const double a1 = k1 * dot(m, n[i1]), a2 = k2 * dot(m, n[i2]);
    const double lam = (a1 * rate[i1] + a2 * rate[i2]) / (a1 * a1 / D[i1] + a2 * a2 / D[i2]);
    rate[i1] -= lam * a1 / D[i1];
    rate[i2] -= lam * a2 / D[i2];
  };
  project(1, 2, perp(t0), 4.0, -1.0);
  project(N - 1, N - 2, perp(t1), -4.0, 1.0);
  std::vector<Vec2> v(N + 1, Vec2{0.0, 0.0});
  for (int i = 1; i < N; ++i)
    v[i] = rate[i] * n[i];
  return v;
}

//! Ring weights 2 pi r_i h |d1_i| pairing the velocity with itself.
inline std::vector<double> dissipation_weights(const ProfileCurve &c) {
  const auto g = geometry(c);
  std::vector<double> w(c.N() + 1);
  for (int i = 0; i <= c.N(); ++i)
    w[i] = 2.0 * std::numbers::pi * c[i].r * detail::trapezoid_weight(i, c.N()) * g.speed[i];
  return w;
}

//! Predicted -dW/dt for the current curve.
inline double dissipation_rate(const ProfileCurve &c) {
  const auto v = velocity(c);
  const auto w = dissipation_weights(c);
  double s = 0.0;
  for (std::size_t i = 0; i < v.size(); ++i)
    s += dot(v[i], v[i]) * w[i];
  return s;
}

inline Diagnostics diagnostics(const ProfileCurve &c) {
  const auto g = geometry(c);
  const int N = c.N();
  Diagnostics d;
  d.min_height = c[0].r;
  for (int i = 1; i <= N; ++i)
    if (c[i].r < d.min_height) {
      d.min_height = c[i].r;
      d.min_index = i;
    }
  const int span = std::max(1, static_cast<int>(std::ceil(0.05 * (N + 1))));
  // nodes nearest the minimum in index distance
  int lo = std::max(0, d.min_index - span / 2), hi = lo + span - 1;
  if (hi > N) {
    hi = N;
    lo = std::max(0, N - span + 1);
  }
  for (int i = lo; i <= hi; ++i)
    d.verticality = std::max(d.verticality, std::abs(g.d1[i].y) / g.speed[i]);
  for (int i = 0; i < N; ++i)
    d.chord_hyp = std::max(d.chord_hyp, norm(c[i + 1].vec() - c[i].vec()) / std::min(c[i].r, c[i + 1].r));
  const auto L = lengths(c);
  d.L_euc = L.L_euclid;
  d.L_hyp = L.L_hyperbolic;
  d.E = elastic_energy(c);
  d.W = bryant_griffiths(c);
  d.grad_norm = normal_residual(c);
  return d;
}

namespace detail {

inline bool heights_positive(const std::vector<HPoint> &u) {
  for (const auto &p : u)
    if (!(p.r > 0.0) || !std::isfinite(p.a))
      return false;
  return true;
}

// The one-sided end stencil also accepts curves leaving the endpoint against
// the clamped direction; the first two chords must point along it.
inline bool end_chords_aligned(const std::vector<HPoint> &u, const ClampedBoundary &b) {
  const std::size_t N = u.size() - 1;
  const Vec2 t0 = b.tau0.vec(), t1 = b.tau1.vec();
  return dot(u[1].vec() - u[0].vec(), t0) > 0.0 && dot(u[2].vec() - u[1].vec(), t0) > 0.0 &&
         dot(u[N].vec() - u[N - 1].vec(), t1) > 0.0 && dot(u[N - 1].vec() - u[N - 2].vec(), t1) > 0.0;
}

// Linearised backward Euler in the normal displacements alpha_1..alpha_{N-1}
// with the endpoint tangent rows as equality constraints.
class ImplicitSystem {
public:
  ImplicitSystem(const ProfileCurve &c, const ClampedBoundary &b) : c_(c), N_(c.N()) {
    const auto g = geometry(c);
    const auto p = elastic_partials(c);
    const auto blocks = elastic_hessian_blocks(c);
    const double h = 1.0 / N_;
    n_.resize(N_ + 1);
    D_.assign(N_ - 1, 0.0);
    rhs_.assign(N_ - 1, 0.0);
    for (int i = 1; i < N_; ++i) {
      n_[i] = perp(g.tangent[i]);
      D_[i - 1] = 4.0 * c[i].r * h * g.speed[i];
      rhs_[i - 1] = -(n_[i].x * p.dE[2 * i] + n_[i].y * p.dE[2 * i + 1]);
    }
    for (const auto &bl : blocks)
      for (int k = 0; k < 3; ++k)
        for (int l = 0; l < 3; ++l) {
          const int i = bl.idx[k], j = bl.idx[l];
          if (i < 1 || i >= N_ || j < 1 || j >= N_)
            continue;
          const Vec2 ni = n_[i], nj = n_[j];
          const double v = ni.x * (bl.h[2 * k][2 * l] * nj.x + bl.h[2 * k][2 * l + 1] * nj.y) +
                           ni.y * (bl.h[2 * k + 1][2 * l] * nj.x + bl.h[2 * k + 1][2 * l + 1] * nj.y);
          H_.emplace_back(i - 1, j - 1, v);
        }
    const auto &u = c.nodes();
    const Vec2 nl = perp(b.tau0.vec()), nr = perp(b.tau1.vec());
    cl_ = {4.0 * dot(nl, n_[1]), -dot(nl, n_[2])};
    cr_ = {-4.0 * dot(nr, n_[N_ - 1]), dot(nr, n_[N_ - 2])};
    dl_ = -dot(nl, 4.0 * u[1].vec() - u[2].vec() - 3.0 * u[0].vec());
    dr_ = -dot(nr, 3.0 * u[N_].vec() - 4.0 * u[N_ - 1].vec() + u[N_ - 2].vec());
  }

  std::optional<std::vector<HPoint>> trial(double dt) const {
    const int m = N_ - 1;
    std::vector<Eigen::Triplet<double>> T = H_;
    for (int k = 0; k < m; ++k)
      T.emplace_back(k, k, D_[k] / dt);
    const int L = m, R = m + 1;
    T.emplace_back(L, 0, cl_[0]);
    T.emplace_back(L, 1, cl_[1]);
    T.emplace_back(0, L, cl_[0]);
    T.emplace_back(1, L, cl_[1]);
    T.emplace_back(R, m - 1, cr_[0]);
    T.emplace_back(R, m - 2, cr_[1]);
    T.emplace_back(m - 1, R, cr_[0]);
    T.emplace_back(m - 2, R, cr_[1]);
    Eigen::SparseMatrix<double> K(m + 2, m + 2);
    K.setFromTriplets(T.begin(), T.end());
    Eigen::VectorXd f(m + 2);
    for (int k = 0; k < m; ++k)
      f[k] = rhs_[k];
    f[L] = dl_;
    f[R] = dr_;
    Eigen::SparseLU<Eigen::SparseMatrix<double>> lu;
    lu.compute(K);
    if (lu.info() != Eigen::Success)
      return std::nullopt;
    const Eigen::VectorXd x = lu.solve(f);
    if (lu.info() != Eigen::Success || !x.allFinite())
      return std::nullopt;
    std::vector<HPoint> u = c_.nodes();
    for (int i = 1; i < N_; ++i)
      u[i] = HPoint::from(u[i].vec() + x[i - 1] * n_[i]);
    return u;
  }

private:
  const ProfileCurve &c_;
  int N_;
  std::vector<Vec2> n_;
  std::vector<double> D_, rhs_;
  std::vector<Eigen::Triplet<double>> H_;
  std::array<double, 2> cl_, cr_;
  double dl_, dr_;
};

inline std::optional<std::vector<HPoint>> rk4_trial(const ProfileCurve &c, double dt) {
  auto shifted = [&](const std::vector<Vec2> &k, double s) -> std::optional<ProfileCurve> {
    std::vector<HPoint> u = c.nodes();
    for (std::size_t i = 0; i < u.size(); ++i)
      u[i] = HPoint::from(u[i].vec() + s * k[i]);
    if (!heights_positive(u))
      return std::nullopt;
    try {
      return ProfileCurve(std::move(u));
    } catch (const Error &) {
      return std::nullopt;
    }
  };
  try {
    const auto k1 = velocity(c);
    const auto c2 = shifted(k1, 0.5 * dt);
    if (!c2)
      return std::nullopt;
    const auto k2 = velocity(*c2);
    const auto c3 = shifted(k2, 0.5 * dt);
    if (!c3)
      return std::nullopt;
    const auto k3 = velocity(*c3);
    const auto c4 = shifted(k3, dt);
    if (!c4)
      return std::nullopt;
    const auto k4 = velocity(*c4);
    std::vector<HPoint> u = c.nodes();
    for (std::size_t i = 0; i < u.size(); ++i)
      u[i] = HPoint::from(u[i].vec() + (dt / 6.0) * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]));
    return u;
  } catch (const Error &) {
    return std::nullopt;
  }
}

inline double rk4_stability_cap(const ProfileCurve &c) {
  double hmin = c[0].r, chord = 1e300;
  for (int i = 0; i < c.N(); ++i) {
    hmin = std::min(hmin, c[i + 1].r);
    chord = std::min(chord, norm(c[i + 1].vec() - c[i].vec()));
  }
  return 0.1 * std::pow(hmin, 4) * std::pow(chord / hmin, 4);
}

// Largest ratio of neighbouring chord lengths.
inline double chord_ratio(const ProfileCurve &c) {
  double m = 1.0, prev = norm(c[1].vec() - c[0].vec());
  for (int i = 1; i < c.N(); ++i) {
    const double l = norm(c[i + 1].vec() - c[i].vec());
    m = std::max(m, std::max(l / prev, prev / l));
    prev = l;
  }
  return m;
}

} // namespace detail

//! One accepted time step. A trial whose node spacing has become uneven is
//! resampled before it is judged. The trial step shrinks by dt_safety until
//! the Willmore energy does not increase and the clamped data still hold.
inline FlowState step(const FlowState &s, const ClampedBoundary &b, const FlowConfig &cfg, long *rejections = nullptr) {
  const double W0 = bryant_griffiths(s.curve);
  const bool aligned = detail::end_chords_aligned(s.curve.nodes(), b);
  double dt = s.dt > 0.0 ? s.dt : cfg.dt_init;
  std::optional<detail::ImplicitSystem> sys;
  if (cfg.integrator == Integrator::implicit)
    sys.emplace(s.curve, b);
  else
    dt = std::min(dt, detail::rk4_stability_cap(s.curve));
  for (int attempt = 0; attempt <= 40; ++attempt) {
    auto u = sys ? sys->trial(dt) : detail::rk4_trial(s.curve, dt);
    if (u) {
      *u = impose_boundary(std::move(*u), b);
      if (detail::heights_positive(*u) && (!aligned || detail::end_chords_aligned(*u, b))) {
        try {
          ProfileCurve next(std::move(*u));
          if (detail::chord_ratio(next) > cfg.chord_ratio_max)
            next = ProfileCurve(blend_boundary(resample(next, next.N()).nodes(), b));
          const double W1 = bryant_griffiths(next);
          if (W1 <= W0 + 1e-12 && boundary_defect(next, b) <= 1e-8) {
            FlowState out{s.t + dt, std::move(next), s.step_count + 1, std::min(dt * cfg.dt_grow, cfg.dt_max)};
            return out;
          }
        } catch (const Error &) {
        }
      }
    }
    if (rejections)
      ++*rejections;
    dt *= cfg.dt_safety;
  }
  throw StepFailure("step rejected 40 times; last trial dt " + fmt17(dt));
}

inline FlowRecord make_record(double t, const Diagnostics &d, double dt) {
  return {t, d.W, d.E, d.L_euc, d.L_hyp, d.min_height, d.grad_norm, d.verticality, dt};
}

struct FlowResult {
  FlowTrace trace;
  Outcome outcome = Outcome::MaxSteps;
  FlowState final_state;
  Diagnostics final_diagnostics;
  GateReport gate_report;
  double final_residual = 0.0;
  std::optional<LiYauReport> li_yau;
};

inline FlowResult run(const ProfileCurve &initial, const ClampedBoundary &b, const FlowConfig &cfg) {
  cfg.validate();
  require_boundary(initial, b);
  FlowResult res;
  res.gate_report = gate(initial, b);
  const double eps = cfg.axis_alarm(b);
  FlowState s{0.0, initial, 0, cfg.dt_init};
  auto d = diagnostics(s.curve);
  res.trace.records.push_back(make_record(0.0, d, 0.0));
  auto alarm = [&](const Diagnostics &x) { return x.min_height < eps || x.L_hyp > cfg.L_hyp_max || x.chord_hyp > cfg.chord_hyp_max;
  };
  if (alarm(d)) {
    res.outcome = Outcome::SingularitySuspected;
  } else if (cfg.stop_on_converge && d.grad_norm < cfg.tol_grad) {
    res.outcome = Outcome::Converged;
  } else {
    res.outcome = Outcome::MaxSteps;
    for (long k = 0; k < cfg.max_steps; ++k) {
      const double W_prev = d.W;
      FlowState next = step(s, b, cfg, &res.trace.rejections);
      const double dt_used = next.t - s.t;
      s = std::move(next);
      if (s.step_count % cfg.resample_every == 0) {
        try {
          ProfileCurve rc(blend_boundary(resample(s.curve, s.curve.N()).nodes(), b));
          if (bryant_griffiths(rc) <= bryant_griffiths(s.curve) + 1e-12 && boundary_defect(rc, b) <= 1e-8 &&
              detail::end_chords_aligned(rc.nodes(), b)) {
            s.curve = std::move(rc);
            ++res.trace.resamples;
          }
        } catch (const Error &) {
        }
      }
      d = diagnostics(s.curve);
      if (d.W > W_prev + 1e-9)
        ++res.trace.descent_violations;
      res.trace.records.push_back(make_record(s.t, d, dt_used));
      if (alarm(d)) {
        res.outcome = Outcome::SingularitySuspected;
        break;
      }
      if (cfg.stop_on_converge && d.grad_norm < cfg.tol_grad) {
        res.outcome = Outcome::Converged;
        break;
      }
    }
    if (!cfg.stop_on_converge && res.outcome == Outcome::MaxSteps && d.grad_norm < cfg.tol_grad)
      res.outcome = Outcome::Converged;
  }
  res.final_state = s;
  res.final_diagnostics = d;
  if (res.outcome == Outcome::Converged) {
    res.final_residual = willmore_residual(s.curve);
    res.li_yau = li_yau_check(make_varifold(revolve(s.curve), b), Region::axis);
  }
  return res;
}

inline void write_trace_csv(std::ostream &os, const FlowTrace &tr) {
  os << "t,W,E,L_euc,L_hyp,min_height,grad_norm,verticality,dt\n";
  for (const auto &r : tr.records)
    os << fmt17(r.t) << ',' << fmt17(r.W) << ',' << fmt17(r.E) << ',' << fmt17(r.L_euc) << ',' << fmt17(r.L_hyp)
       << ',' << fmt17(r.min_height) << ',' << fmt17(r.grad_norm) << ',' << fmt17(r.verticality) << ','
       << fmt17(r.dt) << '\n';
}

} // namespace willflow
