#pragma once

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

#include "levyq/model.hpp"
#include "levyq/stable.hpp"

namespace levyq {

struct SdePath {
  std::vector<double> times;
  std::vector<Vec> states;
  std::vector<Vec> controls;
  JumpSchedule jump_log;
  double dt = 0.0;
  std::uint64_t seed = 0;
  std::uint64_t stream_id = 0;
};

struct SimulationOverflow : std::runtime_error {
  SimulationOverflow(double t, double mag)
      : std::runtime_error("state overflow at t=" + std::to_string(t) +
                           ", |X|=" + std::to_string(mag)),
        time(t), magnitude(mag) {}
  double time;
  double magnitude;
};

namespace detail {

// Kahan-compensated state vector; keeps the recentring translation identity
// tight over long horizons.
struct CompensatedState {
  Vec x;
  Vec c;

  explicit CompensatedState(const Vec& x0) : x(x0), c(x0.size(), 0.0) {}

  void add(std::size_t i, double inc) {
    double y = inc - c[i];
    double t = x[i] + y;
    c[i] = (t - x[i]) - y;
    x[i] = t;
  }
};

}  // namespace detail

// Euler scheme with exact driver increments.  Fixed dt for the pure stable
// driver; jump-adapted grid (Euler substeps between exact jump epochs) when a
// compound Poisson component is present.  The CP drift vartheta is folded
// into the drift term here, never into the jump schedule.
//
// The observer is called at every grid point as observe(t, x, u).
template <class Observer>
void simulate_sde(const DriftParams& params, const ControlPolicy& policy,
                  const Driver& driver, const Vec& x0, double horizon, double dt,
                  RngStream& rng, Observer&& observe) {
  params.validate();
  if (!(dt > 0.0)) throw std::invalid_argument("simulate_sde: dt must be positive");
  if (!(horizon >= dt)) throw std::invalid_argument("simulate_sde: horizon < dt");
  const std::size_t m = params.m;
  if (x0.size() != m) throw std::invalid_argument("simulate_sde: bad x0 dimension");

  Vec stable_scale(m, 0.0);
  if (driver.has_stable()) {
    if (driver.xi.size() != m)
      throw std::invalid_argument("simulate_sde: xi dimension mismatch");
    for (std::size_t i = 0; i < m; ++i)
      stable_scale[i] = levy_weight_to_scale(driver.xi[i], driver.alpha);
    if (!driver.skew.empty() && driver.skew.size() != m)
      throw std::invalid_argument("simulate_sde: skew dimension mismatch");
  }
  const Vec skew = driver.skew.empty() ? Vec(m, 0.0) : driver.skew;
  Vec brown_scale(m, 0.0);
  if (driver.has_brownian()) {
    if (driver.sigma.size() != m)
      throw std::invalid_argument("simulate_sde: sigma dimension mismatch");
    brown_scale = driver.sigma;
  }
  Vec drift_extra(m, 0.0);
  if (!driver.noise_free && driver.variant != DriverVariant::Stable &&
      !driver.cp.vartheta.empty()) {
    drift_extra = driver.cp.vartheta;
  }

  JumpSchedule jumps;
  if (driver.has_cp()) jumps = sample_compound_poisson_path(driver.cp, horizon, rng);

  detail::CompensatedState state(x0);
  double t = 0.0;
  std::size_t next_jump = 0;
  const std::size_t n_steps = static_cast<std::size_t>(std::llround(horizon / dt));
  const bool constant_policy = policy.kind != PolicyKind::Custom;
  const double inv_alpha = driver.has_stable() ? 1.0 / driver.alpha : 0.0;
  const double dt_stable = driver.has_stable() ? std::pow(dt, inv_alpha) : 0.0;
  const double dt_brown = std::sqrt(dt);

  SimplexPoint u = policy.evaluate(state.x);
  Vec b(m, 0.0);
  observe(0.0, state.x, u);

  for (std::size_t k = 0; k < n_steps; ++k) {
    double t_end = (k + 1 == n_steps) ? horizon : (k + 1) * dt;
    // substep across any jump epochs inside (t, t_end]
    while (true) {
      double t_next = t_end;
      bool jump_now = false;
      if (next_jump < jumps.times.size() && jumps.times[next_jump] <= t_end) {
        t_next = jumps.times[next_jump];
        jump_now = true;
      }
      double h = t_next - t;
      if (h > 0.0) {
        bool regular = std::fabs(h - dt) < 1e-15 * (1.0 + dt);
        double hs = regular ? dt_stable
                            : (driver.has_stable() ? std::pow(h, inv_alpha) : 0.0);
        double hb = regular ? dt_brown : std::sqrt(h);
        if (!constant_policy) u = policy.evaluate(state.x);
        drift_into(state.x, u.u, params, b);
        for (std::size_t i = 0; i < m; ++i) {
          double inc = (b[i] + drift_extra[i]) * h;
          if (stable_scale[i] > 0.0)
            inc += stable_scale[i] * hs * stable_standard(driver.alpha, skew[i], rng);
          if (brown_scale[i] > 0.0) inc += brown_scale[i] * hb * rng.normal();
          state.add(i, inc);
        }
      }
      t = t_next;
      if (jump_now) {
        for (std::size_t i = 0; i < m; ++i)
          state.add(i, jumps.jumps[next_jump][i]);
        ++next_jump;
        if (t >= t_end) break;
      } else {
        break;
      }
    }
    double mag = norm2(state.x);
    if (!std::isfinite(mag) || mag > 1e12) throw SimulationOverflow(t, mag);
    if (!constant_policy) u = policy.evaluate(state.x);
    observe(t, state.x, u);
  }
}

inline SdePath simulate_path(const DriftParams& params, const ControlPolicy& policy,
                             const Driver& driver, const Vec& x0, double horizon,
                             double dt, RngStream& rng) {
  SdePath path;
  path.dt = dt;
  path.seed = rng.seed();
  path.stream_id = rng.stream_id();
  simulate_sde(params, policy, driver, x0, horizon, dt, rng,
               [&](double t, const Vec& x, const SimplexPoint& u) {
                 path.times.push_back(t);
                 path.states.push_back(x);
                 path.controls.push_back(u.u);
               });
  return path;
}

// Final state only; the workhorse for ensembles.
inline Vec simulate_endpoint(const DriftParams& params, const ControlPolicy& policy,
                             const Driver& driver, const Vec& x0, double horizon,
                             double dt, RngStream& rng) {
  Vec last = x0;
  simulate_sde(params, policy, driver, x0, horizon, dt, rng,
               [&](double, const Vec& x, const SimplexPoint&) { last = x; });
  return last;
}

}  // namespace levyq
