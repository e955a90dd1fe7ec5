#pragma once

#include <cmath>
#include <stdexcept>
#include <vector>

#include "levyq/model.hpp"

namespace levyq {

struct ScalarDerivs {
  double value;
  double d1;
  double d2;
};

// The fixed convex C^2 function: constant -1/2 below -1, the bridge
// (t+1)^3 - (t+1)^4/2 - 1/2 on [-1,0], identity above 0.
inline ScalarDerivs psi(double t) {
  if (t <= -1.0) return {-0.5, 0.0, 0.0};
  if (t >= 0.0) return {t, 1.0, 0.0};
  double s = t + 1.0;
  double s2 = s * s;
  double s3 = s2 * s;
  return {s3 - 0.5 * s2 * s2 - 0.5, 3.0 * s2 - 2.0 * s3, 6.0 * s - 6.0 * s2};
}

// psi_delta(t) = psi(delta t) with chain-rule derivatives.
inline ScalarDerivs psi_scaled(double t, double delta) {
  if (!(delta > 0.0) || delta > 1.0)
    throw std::invalid_argument("psi_scaled: delta must lie in (0,1]");
  ScalarDerivs p = psi(delta * t);
  return {p.value, delta * p.d1, delta * delta * p.d2};
}

enum class LyapunovVariant { Vp, VpScaled };

// Selects V_p (Definition-1 style, weight delta on the negative part) or the
// scaled variant with psi_delta on the positive part and weight delta^2 on
// the negative part.
struct LyapunovSpec {
  double p = 1.2;
  double delta = 0.05;
  LyapunovVariant variant = LyapunovVariant::Vp;
  Vec mu;  // service rates, fixes the 1/mu_i weights and the constant term

  void validate() const {
    if (!(p > 0.0)) throw std::invalid_argument("LyapunovSpec: p must be positive");
    if (!(delta > 0.0) || delta > 1.0)
      throw std::invalid_argument("LyapunovSpec: delta must lie in (0,1]");
    if (mu.empty()) throw std::invalid_argument("LyapunovSpec: mu not set");
    for (double v : mu)
      if (!(v > 0.0)) throw std::invalid_argument("LyapunovSpec: mu must be positive");
  }

  double min_mu() const {
    double v = mu[0];
    for (double x : mu) v = std::min(v, x);
    return v;
  }
};

// Admissibility of (delta, p) for the positive-safety-staffing pipeline:
// (max gamma_i/mu_i - 1)^+ delta <= 1 and delta < beta / (2m(2beta+m)).
struct DeltaAdmissibility {
  bool el1a_ok;
  bool et2a_ok;
  double et2a_bound;
};

inline DeltaAdmissibility check_delta(const DriftParams& params, double delta) {
  double ratio = 0.0;
  for (std::size_t i = 0; i < params.m; ++i)
    ratio = std::max(ratio, params.gamma[i] / params.mu[i]);
  double beta = params.beta();
  double m = static_cast<double>(params.m);
  double bound = beta > 0.0 ? beta / (2.0 * m * (2.0 * beta + m)) : 0.0;
  return {std::max(ratio - 1.0, 0.0) * delta <= 1.0, delta < bound, bound};
}

// Largest admissible delta times a 0.9 safety factor.
inline double default_delta(const DriftParams& params) {
  double beta = params.beta();
  if (!(beta > 0.0))
    throw std::invalid_argument("default_delta: requires positive spare capacity");
  double m = static_cast<double>(params.m);
  double d = beta / (2.0 * m * (2.0 * beta + m));
  double ratio = 0.0;
  for (std::size_t i = 0; i < params.m; ++i)
    ratio = std::max(ratio, params.gamma[i] / params.mu[i]);
  if (ratio > 1.0) d = std::min(d, 1.0 / (ratio - 1.0));
  return 0.9 * std::min(d, 1.0);
}

struct LyapunovEval {
  double value;
  Vec gradient;
  std::vector<Vec> hessian;  // full (diagonal + rank-one) matrix
  double base;               // V_1 (or scripted V_{1,delta}) before the power
};

// Exact analytic value/gradient/hessian of the selected Lyapunov function.
// The base function is separable across coordinates; the power p introduces
// the rank-one Hessian correction.
inline LyapunovEval lyapunov_eval(const LyapunovSpec& spec, const Vec& x) {
  spec.validate();
  const std::size_t m = x.size();
  if (spec.mu.size() != m)
    throw std::invalid_argument("lyapunov_eval: dimension mismatch");

  double base = static_cast<double>(m) / spec.min_mu();
  Vec g(m), h(m);
  for (std::size_t i = 0; i < m; ++i) {
    ScalarDerivs pos, neg;
    double wneg;
    if (spec.variant == LyapunovVariant::Vp) {
      pos = psi(x[i]);
      neg = psi(-x[i]);
      wneg = spec.delta;
    } else {
      pos = psi_scaled(x[i], spec.delta);
      neg = psi(-x[i]);
      wneg = spec.delta * spec.delta;
    }
    base += (wneg * neg.value + pos.value) / spec.mu[i];
    g[i] = (-wneg * neg.d1 + pos.d1) / spec.mu[i];
    h[i] = (wneg * neg.d2 + pos.d2) / spec.mu[i];
  }

  LyapunovEval out;
  out.base = base;
  double bp1 = std::pow(base, spec.p - 1.0);
  out.value = bp1 * base;
  out.gradient.resize(m);
  for (std::size_t i = 0; i < m; ++i) out.gradient[i] = spec.p * bp1 * g[i];
  out.hessian.assign(m, Vec(m, 0.0));
  double bp2 = spec.p * (spec.p - 1.0) * std::pow(base, spec.p - 2.0);
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < m; ++j) out.hessian[i][j] = bp2 * g[i] * g[j];
    out.hessian[i][i] += spec.p * bp1 * h[i];
  }
  return out;
}

}  // namespace levyq
