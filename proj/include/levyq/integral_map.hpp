#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <stdexcept>
#include <vector>

#include "levyq/model.hpp"
#include "levyq/sde.hpp"

namespace levyq {

// Cadlag input x(t) = x0 + int_0^t slope(s) ds + sum of jumps at jump_times.
// slope defaults to zero (piecewise-constant input between jumps).
struct PiecewisePath {
  Vec x0;
  std::vector<double> jump_times;
  std::vector<Vec> jumps;
  std::function<Vec(double)> slope;

  void validate() const {
    if (x0.empty()) throw std::invalid_argument("PiecewisePath: empty x0");
    if (jump_times.size() != jumps.size())
      throw std::invalid_argument("PiecewisePath: jump schedule mismatch");
    for (std::size_t k = 0; k + 1 < jump_times.size(); ++k)
      if (jump_times[k] > jump_times[k + 1])
        throw std::invalid_argument("PiecewisePath: jump times not sorted");
    for (const Vec& j : jumps)
      if (j.size() != x0.size())
        throw std::invalid_argument("PiecewisePath: jump dimension mismatch");
  }

  Vec value(double t) const {
    Vec v = x0;
    if (slope) {
      // trapezoid on a fine grid; inputs used in practice have affine slope
      std::size_t steps = 64;
      double h = t / steps;
      Vec prev = slope(0.0);
      for (std::size_t s = 1; s <= steps; ++s) {
        Vec cur = slope(h * s);
        for (std::size_t i = 0; i < v.size(); ++i)
          v[i] += 0.5 * h * (prev[i] + cur[i]);
        prev = cur;
      }
    }
    for (std::size_t k = 0; k < jump_times.size(); ++k)
      if (jump_times[k] <= t)
        for (std::size_t i = 0; i < v.size(); ++i) v[i] += jumps[k][i];
    return v;
  }
};

// Solves y(t) = x(t) + int_0^t h(y(s)) ds: between jumps of x this is the ODE
// y' = x' + h(y), integrated with classic RK4 plus one step-doubling accuracy
// check (refine on failure); jumps of x are applied to y instantly.
inline SdePath integral_map(const PiecewisePath& x,
                            const std::function<Vec(const Vec&)>& h, double horizon,
                            double dt, double tol = 1e-10) {
  x.validate();
  if (!(dt > 0.0) || !(horizon >= 0.0))
    throw std::invalid_argument("integral_map: need dt > 0, horizon >= 0");
  const std::size_t m = x.x0.size();

  auto rhs = [&](double t, const Vec& y) {
    Vec v = h ? h(y) : Vec(m, 0.0);
    if (x.slope) {
      Vec s = x.slope(t);
      for (std::size_t i = 0; i < m; ++i) v[i] += s[i];
    }
    return v;
  };
  auto rk4_step = [&](double t, const Vec& y, double hstep) {
    Vec k1 = rhs(t, y);
    Vec tmp(m);
    for (std::size_t i = 0; i < m; ++i) tmp[i] = y[i] + 0.5 * hstep * k1[i];
    Vec k2 = rhs(t + 0.5 * hstep, tmp);
    for (std::size_t i = 0; i < m; ++i) tmp[i] = y[i] + 0.5 * hstep * k2[i];
    Vec k3 = rhs(t + 0.5 * hstep, tmp);
    for (std::size_t i = 0; i < m; ++i) tmp[i] = y[i] + hstep * k3[i];
    Vec k4 = rhs(t + hstep, tmp);
    Vec out(m);
    for (std::size_t i = 0; i < m; ++i)
      out[i] = y[i] + hstep / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
    return out;
  };
  auto advance = [&](double t, Vec y, double hstep, int depth) {
    // step doubling: accept when full step and two half steps agree
    std::function<Vec(double, Vec, double, int)> go =
        [&](double t0, Vec y0, double hh, int d) -> Vec {
      Vec full = rk4_step(t0, y0, hh);
      Vec h1 = rk4_step(t0, y0, 0.5 * hh);
      Vec h2 = rk4_step(t0 + 0.5 * hh, h1, 0.5 * hh);
      double err = 0.0;
      for (std::size_t i = 0; i < m; ++i)
        err = std::max(err, std::fabs(full[i] - h2[i]));
      if (err <= tol || d >= 12) {
        for (double v : h2)
          if (!std::isfinite(v) || std::fabs(v) > 1e12)
            throw std::runtime_error("integral_map: divergence");
        return h2;
      }
      Vec mid = go(t0, std::move(y0), 0.5 * hh, d + 1);
      return go(t0 + 0.5 * hh, std::move(mid), 0.5 * hh, d + 1);
    };
    return go(t, std::move(y), hstep, depth);
  };

  SdePath path;
  Vec y = x.x0;
  std::size_t jk = 0;
  // apply any jumps at t = 0
  while (jk < x.jump_times.size() && x.jump_times[jk] <= 0.0) {
    for (std::size_t i = 0; i < m; ++i) y[i] += x.jumps[jk][i];
    ++jk;
  }
  path.times.push_back(0.0);
  path.states.push_back(y);
  path.controls.push_back(Vec(m, 0.0));

  std::size_t n_steps = static_cast<std::size_t>(std::ceil(horizon / dt - 1e-9));
  double t = 0.0;
  for (std::size_t s = 1; s <= n_steps; ++s) {
    double t_next = std::min(horizon, dt * s);
    while (t < t_next) {
      double t_stop = t_next;
      bool jump_here = false;
      if (jk < x.jump_times.size() && x.jump_times[jk] <= t_next) {
        t_stop = std::max(t, x.jump_times[jk]);
        jump_here = true;
      }
      if (t_stop > t) y = advance(t, std::move(y), t_stop - t, 0);
      t = t_stop;
      if (jump_here) {
        for (std::size_t i = 0; i < m; ++i) y[i] += x.jumps[jk][i];
        ++jk;
      }
    }
    t = t_next;
    path.times.push_back(t);
    path.states.push_back(y);
    path.controls.push_back(Vec(m, 0.0));
  }
  return path;
}

}  // namespace levyq
