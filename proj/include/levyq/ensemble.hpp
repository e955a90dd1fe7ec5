#pragma once

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "levyq/parallel.hpp"
#include "levyq/sde.hpp"
#include "levyq/tv.hpp"

namespace levyq {

struct EnsembleSnapshot {
  std::vector<double> checkpoint_times;
  std::vector<std::vector<Vec>> states;  // states[t][sample]
  std::uint64_t seed = 0;
  std::size_t overflow_aborts = 0;
};

struct EnsembleConfig {
  DriftParams params;
  ControlPolicy policy;
  Driver driver;
  double dt = 1e-2;
  std::size_t workers = 1;
};

// Approximately-stationary sample: independent replications run past burn-in,
// then thinned along each trajectory until the target count is reached.
// Overflow aborts are counted and the replication restarted on a fresh stream.
inline EnsembleSnapshot stationary_sample(const EnsembleConfig& cfg, const Vec& x0,
                                          double burn_in, std::size_t target_n,
                                          double thinning, std::size_t replications,
                                          std::uint64_t seed) {
  if (replications == 0 || target_n == 0)
    throw std::invalid_argument("stationary_sample: empty request");
  std::size_t per_rep = (target_n + replications - 1) / replications;
  double horizon = burn_in + thinning * per_rep;

  std::vector<std::vector<Vec>> per_rep_states(replications);
  std::vector<std::size_t> aborts(replications, 0);

  parallel_for(replications, cfg.workers, [&](std::size_t r) {
    for (std::uint64_t attempt = 0;; ++attempt) {
      RngStream rng(seed, r + attempt * replications + (attempt ? 1000000 : 0));
      std::vector<Vec> collected;
      collected.reserve(per_rep);
      double next_take = burn_in + thinning;
      try {
        simulate_sde(cfg.params, cfg.policy, cfg.driver, x0, horizon, cfg.dt, rng,
                     [&](double t, const Vec& x, const SimplexPoint&) {
                       if (t + 1e-12 >= next_take && collected.size() < per_rep) {
                         collected.push_back(x);
                         next_take += thinning;
                       }
                     });
        per_rep_states[r] = std::move(collected);
        return;
      } catch (const SimulationOverflow&) {
        aborts[r]++;
        if (aborts[r] > 20)
          throw std::runtime_error("stationary_sample: replication keeps overflowing");
      }
    }
  });

  EnsembleSnapshot snap;
  snap.seed = seed;
  snap.checkpoint_times = {burn_in};
  snap.states.emplace_back();
  auto& pool = snap.states.back();
  for (std::size_t r = 0; r < replications; ++r) {
    for (auto& x : per_rep_states[r]) {
      if (pool.size() >= target_n) break;
      pool.push_back(std::move(x));
    }
    snap.overflow_aborts += aborts[r];
  }
  return snap;
}

// TV between the two halves of a sample; doubles as the estimator floor and
// as the stationarity self-consistency check.
inline TvEstimate split_half_tv(const std::vector<Vec>& sample) {
  std::size_t half = sample.size() / 2;
  std::vector<Vec> a(sample.begin(), sample.begin() + half);
  std::vector<Vec> b(sample.begin() + half, sample.end());
  return empirical_tv(a, b);
}

// Transient ensemble from a fixed start, recorded at every checkpoint.
inline EnsembleSnapshot transient_ensemble(const EnsembleConfig& cfg, const Vec& x0,
                                           const std::vector<double>& times,
                                           std::size_t n_paths, std::uint64_t seed) {
  if (times.empty()) throw std::invalid_argument("transient_ensemble: no checkpoints");
  double horizon = times.back();
  EnsembleSnapshot snap;
  snap.seed = seed;
  snap.checkpoint_times = times;
  snap.states.assign(times.size(), std::vector<Vec>(n_paths));
  std::vector<std::size_t> aborts(n_paths, 0);

  parallel_for(n_paths, cfg.workers, [&](std::size_t r) {
    for (std::uint64_t attempt = 0;; ++attempt) {
      RngStream rng(seed, r + attempt * n_paths + (attempt ? 2000000 : 0));
      std::size_t next_cp = 0;
      try {
        simulate_sde(cfg.params, cfg.policy, cfg.driver, x0, horizon, cfg.dt, rng,
                     [&](double t, const Vec& x, const SimplexPoint&) {
                       while (next_cp < times.size() &&
                              t + 1e-12 >= times[next_cp]) {
                         snap.states[next_cp][r] = x;
                         ++next_cp;
                       }
                     });
        return;
      } catch (const SimulationOverflow&) {
        aborts[r]++;
        if (aborts[r] > 20)
          throw std::runtime_error("transient_ensemble: replication keeps overflowing");
      }
    }
  });
  for (std::size_t s : aborts) snap.overflow_aborts += s;
  return snap;
}

// TV(P_t(x0, .), pi_hat) at each checkpoint, with the split-half floor.
inline TvCurve tv_decay_curve(const EnsembleConfig& cfg, const Vec& x0,
                              const std::vector<double>& times, std::size_t n_paths,
                              const std::vector<Vec>& stationary_reference,
                              std::uint64_t seed) {
  EnsembleSnapshot snap = transient_ensemble(cfg, x0, times, n_paths, seed);
  TvCurve curve;
  curve.times = times;
  curve.floor = split_half_tv(stationary_reference).tv;
  for (std::size_t k = 0; k < times.size(); ++k) {
    TvEstimate est = empirical_tv(snap.states[k], stationary_reference);
    curve.tv.push_back(est.tv);
    curve.err.push_back(est.error);
  }
  return curve;
}

struct StationaryIdentityReport {
  double beta_tilde;
  double sample_mean;   // mean of <e,X>^-
  double ci_halfwidth;  // 1.96 sigma / sqrt(N)
  bool consistent;
};

// Checks beta_tilde = E_pi <e,X>^-.  Requires Gamma v = 0: every class with
// positive abandonment rate must receive zero queue mass under the policy.
inline StationaryIdentityReport stationary_identity_check(
    const std::vector<Vec>& sample, const EffectiveParams& eff,
    const DriftParams& params, const ControlPolicy& policy) {
  if (!(eff.beta_tilde > 0.0))
    throw std::invalid_argument(
        "stationary_identity_check: beta_tilde <= 0, no invariant measure expected");
  bool gamma_zeroed = true;
  for (std::size_t i = 0; i < params.m; ++i) {
    if (params.gamma[i] > 0.0) {
      if (policy.kind == PolicyKind::Constant) {
        if (policy.constant.u[i] != 0.0) gamma_zeroed = false;
      } else {
        gamma_zeroed = false;  // cannot certify Gamma v = 0 for non-constant maps
      }
    }
  }
  if (!gamma_zeroed)
    throw std::invalid_argument(
        "stationary_identity_check: requires Gamma v = 0 (positive-gamma class "
        "receives queue mass)");

  double s = 0.0, s2 = 0.0;
  for (const Vec& x : sample) {
    double v = std::max(-sum(x), 0.0);
    s += v;
    s2 += v * v;
  }
  double n = static_cast<double>(sample.size());
  double mean = s / n;
  double var = std::max(s2 / n - mean * mean, 0.0);
  StationaryIdentityReport rep;
  rep.beta_tilde = eff.beta_tilde;
  rep.sample_mean = mean;
  rep.ci_halfwidth = 1.96 * std::sqrt(var / n);
  rep.consistent = std::fabs(mean - eff.beta_tilde) <=
                   std::max(rep.ci_halfwidth, 0.05 * std::fabs(eff.beta_tilde));
  return rep;
}

}  // namespace levyq
