#pragma once
#include <cmath>
#include <vector>

#include "flow.hpp"

namespace willflow {

enum class Verdict { BelowThreshold, AtOrAbove };

inline const char *to_string(Verdict v) { return v == Verdict::BelowThreshold ? "BelowThreshold" : "AtOrAbove"; }

struct MinimizeBudget {
  int max_iterations = 2000;
  long polish_steps = 20000;
  double tol = 1e-3;
};

struct MinimizeResult {
  ProfileCurve curve;
  double M_estimate = 0.0;
  double residual = 0.0;
  Verdict verdict = Verdict::AtOrAbove;
  int iterations = 0;
  long polish_steps = 0;
  bool budget_exhausted = false;
  double threshold = 0.0;
  std::vector<double> E_trace, W_trace;
};

//! BelowThreshold certifies M_{p,tau} <= M_estimate < threshold.
inline Verdict existence_verdict(double M_estimate, double threshold) {
  return M_estimate < threshold - 1e-9 ? Verdict::BelowThreshold : Verdict::AtOrAbove;
}

inline Verdict existence_verdict(const MinimizeResult &r, const ClampedBoundary &b) {
  return existence_verdict(r.M_estimate, c_ly_rot(b).value);
}

//! Descent on the discrete elastic energy along the constrained normal
//! velocity with Armijo backtracking, then a flow polish.
inline MinimizeResult minimize_elastic(const ClampedBoundary &b, const ProfileCurve &init, const MinimizeBudget &budget = {}) {
  require_boundary(init, b);
  MinimizeResult res;
  ProfileCurve c = init;
  double E = elastic_energy(c);
  auto record = [&](const ProfileCurve &x, double e) {
    res.E_trace.push_back(e);
    res.W_trace.push_back(bryant_griffiths(x));
  };
  record(c, E);
  double s = 1e-3;
  int it = 0;
  for (; it < budget.max_iterations; ++it) {
    if (normal_residual(c) < budget.tol)
      break;
    const auto v = velocity(c);
    const auto w = dissipation_weights(c);
    double slope = 0.0; // dE/ds along v
    for (std::size_t i = 0; i < v.size(); ++i)
      slope -= dot(v[i], v[i]) * w[i];
    slope *= 2.0 / std::numbers::pi;
    bool accepted = false;
    for (int k = 0; k < 50 && !accepted; ++k, s *= 0.5) {
      std::vector<HPoint> u = c.nodes();
      for (std::size_t i = 0; i < u.size(); ++i)
        u[i] = HPoint::from(u[i].vec() + s * v[i]);
      u = impose_boundary(std::move(u), b);
      if (!detail::heights_positive(u) || !detail::end_chords_aligned(u, b))
        continue;
      try {
        ProfileCurve trial(std::move(u));
        if (detail::chord_ratio(trial) > 1.5)
          trial = ProfileCurve(blend_boundary(resample(trial, trial.N()).nodes(), b));
        const double Et = elastic_energy(trial);
        if (Et <= E + 1e-4 * s * slope && boundary_defect(trial, b) <= 1e-8) {
          c = std::move(trial);
          E = Et;
          accepted = true;
          record(c, E);
        }
      } catch (const Error &) {
      }
    }
    if (!accepted)
      break;
    s *= 4.0;
  }
  res.iterations = it;
  if (normal_residual(c) >= budget.tol && budget.polish_steps > 0) {
    FlowConfig cfg;
    cfg.N = c.N();
    cfg.tol_grad = budget.tol;
    cfg.max_steps = budget.polish_steps;
    cfg.L_hyp_max = 1e300;
    cfg.chord_hyp_max = 1e300;
    cfg.eps_axis = 1e-300;
    const auto fr = run(c, b, cfg);
    res.polish_steps = fr.final_state.step_count;
    for (std::size_t k = 1; k < fr.trace.records.size(); ++k) {
      res.E_trace.push_back(fr.trace.records[k].E);
      res.W_trace.push_back(fr.trace.records[k].W);
    }
    if (fr.final_diagnostics.W <= bryant_griffiths(c))
      c = fr.final_state.curve;
  }
  res.curve = c;
  res.M_estimate = bryant_griffiths(c);
  res.residual = normal_residual(c);
  res.budget_exhausted = !(res.residual < budget.tol);
  res.threshold = c_ly_rot(b).value;
  res.verdict = existence_verdict(res.M_estimate, res.threshold);
  return res;
}

} // namespace willflow
