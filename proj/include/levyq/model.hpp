#pragma once

#include <cmath>
#include <functional>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

#include "levyq/compound_poisson.hpp"

namespace levyq {

inline double inner(const Vec& a, const Vec& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

inline double sum(const Vec& a) { return std::accumulate(a.begin(), a.end(), 0.0); }

inline double norm2(const Vec& a) { return std::sqrt(inner(a, a)); }

inline double norm1(const Vec& a) {
  double s = 0.0;
  for (double v : a) s += std::fabs(v);
  return s;
}

// Drift data of the piecewise-affine model: ell, M = diag(mu), Gamma = diag(gamma).
struct DriftParams {
  std::size_t m = 0;
  Vec ell;
  Vec mu;
  Vec gamma;

  void validate() const {
    if (m == 0 || ell.size() != m || mu.size() != m || gamma.size() != m)
      throw std::invalid_argument("DriftParams: inconsistent dimensions");
    for (double v : mu)
      if (!(v > 0.0)) throw std::invalid_argument("DriftParams: mu must be positive");
    for (double v : gamma)
      if (v < 0.0) throw std::invalid_argument("DriftParams: gamma must be nonnegative");
  }

  // spare capacity beta = -<e, M^{-1} ell>
  double beta() const {
    double s = 0.0;
    for (std::size_t i = 0; i < m; ++i) s += ell[i] / mu[i];
    return -s;
  }

  double min_mu() const {
    double v = mu[0];
    for (double x : mu) v = std::min(v, x);
    return v;
  }
};

struct SimplexPoint {
  Vec u;

  void validate() const {
    double s = 0.0;
    for (double v : u) {
      if (v < -1e-12) throw std::invalid_argument("SimplexPoint: negative entry");
      s += v;
    }
    if (std::fabs(s - 1.0) > 1e-12)
      throw std::invalid_argument("SimplexPoint: entries must sum to 1");
  }
};

inline SimplexPoint vertex(std::size_t m, std::size_t i) {
  SimplexPoint p;
  p.u.assign(m, 0.0);
  p.u[i] = 1.0;
  return p;
}

// b(x,u) = ell - M(x - <e,x>^+ u) - <e,x>^+ Gamma u.
// On <e,x> <= 0 (including the boundary) the control-free branch ell - Mx is
// used; both branches agree there.
inline void drift_into(const Vec& x, const Vec& u, const DriftParams& p, Vec& b) {
  double ex = sum(x);
  if (ex <= 0.0) {
    for (std::size_t i = 0; i < p.m; ++i) b[i] = p.ell[i] - p.mu[i] * x[i];
  } else {
    for (std::size_t i = 0; i < p.m; ++i)
      b[i] = p.ell[i] - p.mu[i] * (x[i] - ex * u[i]) - ex * p.gamma[i] * u[i];
  }
}

inline Vec drift(const Vec& x, const SimplexPoint& u, const DriftParams& p) {
  Vec b(p.m);
  drift_into(x, u.u, p, b);
  return b;
}

struct RecenterResult {
  double beta;
  Vec zeta;              // zeta = (beta/m) e + M^{-1} ell
  DriftParams recentred; // same model with constant term -(beta/m) M e
};

inline RecenterResult spare_capacity_and_recenter(const DriftParams& p) {
  p.validate();
  RecenterResult r;
  r.beta = p.beta();
  r.zeta.resize(p.m);
  r.recentred = p;
  for (std::size_t i = 0; i < p.m; ++i) {
    r.zeta[i] = r.beta / static_cast<double>(p.m) + p.ell[i] / p.mu[i];
    r.recentred.ell[i] = -r.beta / static_cast<double>(p.m) * p.mu[i];
  }
  return r;
}

// Build an already-recentred model from (m, beta, mu, gamma).
inline DriftParams recentred_params(std::size_t m, double beta, Vec mu, Vec gamma) {
  DriftParams p;
  p.m = m;
  p.mu = std::move(mu);
  p.gamma = std::move(gamma);
  p.ell.resize(m);
  for (std::size_t i = 0; i < m; ++i)
    p.ell[i] = -beta / static_cast<double>(m) * p.mu[i];
  p.validate();
  return p;
}

enum class PolicyKind { Constant, StaticPriority, Custom };

// Stationary Markov control v : K_+ -> simplex.  Static priority lists the
// classes from first-served to last-served; all queue mass goes to the class
// served last, so the induced control is the vertex of the final class in the
// permutation.
struct ControlPolicy {
  PolicyKind kind = PolicyKind::Constant;
  SimplexPoint constant;                       // Constant
  std::vector<std::size_t> priority;           // StaticPriority permutation
  std::function<Vec(const Vec&)> custom;       // Custom map
  bool lipschitz_declared = true;              // declared regularity flag

  SimplexPoint evaluate(const Vec& x) const {
    switch (kind) {
      case PolicyKind::Constant:
        return constant;
      case PolicyKind::StaticPriority:
        return vertex(priority.size(), priority.back());
      case PolicyKind::Custom: {
        SimplexPoint p{custom(x)};
        p.validate();
        return p;
      }
    }
    throw std::logic_error("ControlPolicy: bad kind");
  }
};

inline ControlPolicy constant_policy(Vec u) {
  ControlPolicy p;
  p.kind = PolicyKind::Constant;
  p.constant = SimplexPoint{std::move(u)};
  p.constant.validate();
  return p;
}

enum class DriverVariant { Stable, BrownianCP, StableCP };

struct Driver {
  DriverVariant variant = DriverVariant::Stable;
  double alpha = 1.5;     // Stable / StableCP
  Vec xi;                 // per-coordinate Levy weights (Stable / StableCP)
  Vec skew;               // per-coordinate skewness in [-1,1]; empty = symmetric
  Vec sigma;              // diagonal diffusion entries (BrownianCP)
  CPMeasureSpec cp;       // BrownianCP / StableCP
  bool noise_free = false;  // test mode: every noise term suppressed

  bool has_stable() const {
    return !noise_free && (variant == DriverVariant::Stable || variant == DriverVariant::StableCP);
  }
  bool has_brownian() const { return !noise_free && variant == DriverVariant::BrownianCP; }
  bool has_cp() const {
    return !noise_free && variant != DriverVariant::Stable && cp.nu > 0.0;
  }
};

struct EffectiveParams {
  Vec ell_tilde;
  double beta_tilde = 0.0;
  double theta_c = std::numeric_limits<double>::infinity();
  bool large_jump_mean_finite = true;

  bool theta_in_Theta_c(double theta) const { return theta > 0.0 && theta < theta_c; }
};

// ell_tilde = ell + vartheta + int_{|y|>1} y eta(dy) when the integral is
// finite, otherwise ell + vartheta (flagged).
inline EffectiveParams effective_params(const DriftParams& p, const CPMeasureSpec& cp) {
  p.validate();
  cp.validate();
  EffectiveParams eff;
  eff.theta_c = cp.theta_c();
  eff.ell_tilde = p.ell;
  Vec vt = cp.vartheta.empty() ? Vec(p.m, 0.0) : cp.vartheta;
  for (std::size_t i = 0; i < p.m; ++i) eff.ell_tilde[i] += vt[i];
  double mr = cp.nu > 0.0 ? cp.mean_radius_above_one() : 0.0;
  if (std::isinf(mr)) {
    eff.large_jump_mean_finite = false;
  } else if (cp.nu > 0.0) {
    for (std::size_t i = 0; i < p.m; ++i)
      eff.ell_tilde[i] += cp.nu * mr * cp.direction[i];
  }
  double s = 0.0;
  for (std::size_t i = 0; i < p.m; ++i) s += eff.ell_tilde[i] / p.mu[i];
  eff.beta_tilde = -s;
  return eff;
}

}  // namespace levyq
