#pragma once

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "levyq/parallel.hpp"
#include "levyq/queue.hpp"
#include "levyq/sde.hpp"
#include "levyq/stable.hpp"

namespace levyq {

// Two-sample Kolmogorov-Smirnov distance.
inline double ks_distance(std::vector<double> a, std::vector<double> b) {
  if (a.empty() || b.empty())
    throw std::invalid_argument("ks_distance: empty sample");
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  double na = static_cast<double>(a.size()), nb = static_cast<double>(b.size());
  std::size_t i = 0, j = 0;
  double d = 0.0;
  while (i < a.size() && j < b.size()) {
    if (a[i] <= b[j]) ++i; else ++j;
    d = std::max(d, std::fabs(i / na - j / nb));
  }
  return d;
}

// Energy distance 2E|X-Y| - E|X-X'| - E|Y-Y'| on a subsample (O(k^2)).
inline double energy_distance(const std::vector<Vec>& a, const std::vector<Vec>& b,
                              std::size_t max_points = 2000) {
  if (a.empty() || b.empty())
    throw std::invalid_argument("energy_distance: empty sample");
  auto thin = [&](const std::vector<Vec>& s) {
    if (s.size() <= max_points) return s;
    std::vector<Vec> out;
    out.reserve(max_points);
    double stride = static_cast<double>(s.size()) / max_points;
    for (std::size_t k = 0; k < max_points; ++k)
      out.push_back(s[static_cast<std::size_t>(k * stride)]);
    return out;
  };
  std::vector<Vec> xa = thin(a), xb = thin(b);
  auto dist = [](const Vec& p, const Vec& q) {
    double s = 0.0;
    for (std::size_t i = 0; i < p.size(); ++i) {
      double d = p[i] - q[i];
      s += d * d;
    }
    return std::sqrt(s);
  };
  double exy = 0.0, exx = 0.0, eyy = 0.0;
  for (const Vec& p : xa)
    for (const Vec& q : xb) exy += dist(p, q);
  exy /= static_cast<double>(xa.size()) * xb.size();
  for (std::size_t i = 0; i < xa.size(); ++i)
    for (std::size_t j = i + 1; j < xa.size(); ++j) exx += dist(xa[i], xa[j]);
  exx *= 2.0 / (static_cast<double>(xa.size()) * xa.size());
  for (std::size_t i = 0; i < xb.size(); ++i)
    for (std::size_t j = i + 1; j < xb.size(); ++j) eyy += dist(xb[i], xb[j]);
  eyy *= 2.0 / (static_cast<double>(xb.size()) * xb.size());
  return 2.0 * exy - exx - eyy;
}

// Monte Carlo calibration of the per-class Levy weight xi_i for the limit SDE:
// the scaled centered arrival count v = n^{-1/alpha}(A^n_i(1) - lambda^n_i) is
// approximately alpha-stable; its scale sigma is recovered from the modulus of
// the empirical characteristic function |E e^{iuv}| = e^{-(sigma u)^alpha}
// (valid for any skewness), then mapped back through the weight-to-scale
// convention.
inline double calibrate_xi(const QueueParams& params, std::size_t cls,
                           std::size_t reps = 4000, Count n_cal = 0,
                           std::uint64_t seed = 424242) {
  QueueParams p = params;
  if (n_cal > 0) p.n = n_cal;
  double rate = p.arrival_rate(cls);
  if (!(rate > 0.0)) return 0.0;
  RenewalSpec spec{p.family, rate, p.alpha};
  double scale_n = p.scale();

  std::vector<double> v(reps);
  RngStream rng(seed, 9000 + cls);
  for (std::size_t r = 0; r < reps; ++r) {
    double t = 0.0;
    std::size_t count = 0;
    for (;;) {
      t += spec.sample_gap(rng);
      if (t > 1.0) break;
      ++count;
    }
    v[r] = scale_n * (static_cast<double>(count) - rate);
  }

  // robust average over a few CF frequencies; u chosen so the CF stays well
  // away from both 1 and 0
  double iqr_scale = 0.0;
  {
    std::vector<double> sorted = v;
    std::sort(sorted.begin(), sorted.end());
    iqr_scale = std::max(sorted[3 * reps / 4] - sorted[reps / 4], 1e-8);
  }
  std::vector<double> freqs = {0.5 / iqr_scale, 1.0 / iqr_scale, 2.0 / iqr_scale};
  double acc = 0.0;
  std::size_t used = 0;
  for (double u : freqs) {
    double cr = 0.0, ci = 0.0;
    for (double x : v) {
      cr += std::cos(u * x);
      ci += std::sin(u * x);
    }
    double c = std::sqrt(cr * cr + ci * ci) / reps;
    if (c <= 0.05 || c >= 0.999) continue;
    double sigma = std::pow(-std::log(c), 1.0 / p.alpha) / u;
    acc += sigma;
    ++used;
  }
  if (used == 0)
    throw std::runtime_error("calibrate_xi: characteristic function degenerate");
  // invert sigma = (xi * c_alpha)^{1/alpha}
  double sigma = acc / used;
  return std::pow(sigma, p.alpha) / stable_levy_constant(p.alpha);
}

struct FcltRow {
  Count n = 0;
  std::vector<double> ks;  // per coordinate
  double energy = 0.0;
  double median_ks = 0.0;
};

struct FcltReport {
  std::vector<FcltRow> rows;
  Vec xi;          // calibrated weights used for the SDE
  double horizon;
  std::size_t replications;
};

// Limit-theorem comparison: for each n, N replications of the scaled queue
// state at time T against N endpoint samples of the limit SDE, started from
// matched initial laws (deterministic x0, prelimit state rounded to the
// lattice).
inline FcltReport fclt_compare(const QueueParams& base, const ControlPolicy& policy,
                               const std::vector<Count>& n_list, const Vec& x0,
                               double horizon, std::size_t replications, double dt,
                               std::uint64_t seed, std::size_t workers = 1) {
  base.validate();
  const std::size_t m = base.m;
  if (x0.size() != m) throw std::invalid_argument("fclt_compare: bad x0");

  FcltReport rep;
  rep.horizon = horizon;
  rep.replications = replications;
  rep.xi.resize(m);
  for (std::size_t i = 0; i < m; ++i)
    rep.xi[i] = calibrate_xi(base, i, 4000, 2000, seed + 17);

  // limit SDE shares (ell, mu, gamma, alpha); driver is the calibrated pure
  // stable one
  DriftParams sp;
  sp.m = m;
  sp.ell = base.ell;
  sp.mu = base.mu;
  sp.gamma = base.gamma;
  Driver driver;
  driver.variant = DriverVariant::Stable;
  driver.alpha = base.alpha;
  driver.xi = rep.xi;
  // heavy-tailed interarrival times make the count fluctuations spectrally
  // negative in the limit (a long gap removes many arrivals at once, while
  // upward surprises average out), so the matching limit driver is totally
  // skewed downward
  if (base.family == RenewalFamily::Pareto) driver.skew = Vec(m, -1.0);

  std::vector<Vec> sde_end(replications);
  parallel_for(replications, workers, [&](std::size_t r) {
    RngStream rng(seed, 500000 + r);
    try {
      sde_end[r] = simulate_endpoint(sp, policy, driver, x0, horizon, dt, rng);
    } catch (const SimulationOverflow&) {
      sde_end[r] = Vec(m, 1e12);  // kept: both ensembles see heavy tails
    }
  });

  for (std::size_t ni = 0; ni < n_list.size(); ++ni) {
    QueueParams qp = base;
    qp.n = n_list[ni];
    CountVec qx0(m);
    for (std::size_t i = 0; i < m; ++i)
      qx0[i] = std::max<Count>(
          0, static_cast<Count>(std::llround(
                 qp.rho_i(i) * static_cast<double>(qp.n) + x0[i] / qp.scale())));

    std::vector<Vec> q_end(replications);
    parallel_for(replications, workers, [&](std::size_t r) {
      RngStream rng(seed, (ni + 1) * 1000000 + r);
      QueueRunResult res = simulate_queue(qp, policy, qx0, horizon, rng);
      q_end[r] = qp.scaled_state(res.final_X);
    });

    FcltRow row;
    row.n = qp.n;
    row.ks.resize(m);
    for (std::size_t i = 0; i < m; ++i) {
      std::vector<double> a(replications), b(replications);
      for (std::size_t r = 0; r < replications; ++r) {
        a[r] = q_end[r][i];
        b[r] = sde_end[r][i];
      }
      row.ks[i] = ks_distance(std::move(a), std::move(b));
    }
    std::vector<double> sorted_ks = row.ks;
    std::sort(sorted_ks.begin(), sorted_ks.end());
    row.median_ks = m % 2 ? sorted_ks[m / 2]
                          : 0.5 * (sorted_ks[m / 2 - 1] + sorted_ks[m / 2]);
    row.energy = energy_distance(q_end, sde_end);
    rep.rows.push_back(std::move(row));
  }
  return rep;
}

}  // namespace levyq
