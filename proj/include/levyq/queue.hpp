#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "levyq/model.hpp"
#include "levyq/renewal.hpp"
#include "levyq/rng.hpp"

namespace levyq {

using Count = long long;
using CountVec = std::vector<Count>;

// Prelimit n-server system in the modified Halfin-Whitt regime:
// lambda^n_i = n lambda_i + n^{1/alpha} ell_i, exponential services mu_i and
// patience gamma_i, renewal arrivals per class.
struct QueueParams {
  std::size_t m = 0;
  Count n = 0;
  Vec lambda;   // first-order rates, <e, lambda/mu> = 1
  Vec ell;      // second-order perturbation
  Vec mu;
  Vec gamma;
  double alpha = 1.5;
  RenewalFamily family = RenewalFamily::Pareto;

  void validate() const {
    if (m == 0 || lambda.size() != m || ell.size() != m || mu.size() != m ||
        gamma.size() != m)
      throw std::invalid_argument("QueueParams: inconsistent dimensions");
    if (n <= 0) throw std::invalid_argument("QueueParams: need n >= 1");
    for (double v : mu)
      if (!(v > 0.0)) throw std::invalid_argument("QueueParams: mu must be positive");
    for (double v : gamma)
      if (v < 0.0) throw std::invalid_argument("QueueParams: gamma must be nonnegative");
    bool no_arrivals = true;
    for (double v : lambda)
      if (v != 0.0) no_arrivals = false;
    if (!no_arrivals) {
      double rho = 0.0;
      for (std::size_t i = 0; i < m; ++i) rho += lambda[i] / mu[i];
      if (std::fabs(rho - 1.0) > 1e-9)
        throw std::invalid_argument("QueueParams: regime requires <e, lambda/mu> = 1");
      for (std::size_t i = 0; i < m; ++i)
        if (!(arrival_rate(i) > 0.0))
          throw std::invalid_argument("QueueParams: lambda^n_i must be positive");
    }
  }

  double arrival_rate(std::size_t i) const {
    return static_cast<double>(n) * lambda[i] +
           std::pow(static_cast<double>(n), 1.0 / alpha) * ell[i];
  }

  double rho_i(std::size_t i) const { return lambda[i] / mu[i]; }

  double scale() const { return std::pow(static_cast<double>(n), -1.0 / alpha); }

  Vec scaled_state(const CountVec& x) const {
    Vec out(m);
    double s = scale();
    for (std::size_t i = 0; i < m; ++i)
      out[i] = s * (static_cast<double>(x[i]) - rho_i(i) * static_cast<double>(n));
    return out;
  }
};

struct ScheduleResult {
  CountVec Z;
  CountVec Q;
};

namespace detail {

inline double schedule_cost(const CountVec& q, const Vec& target) {
  double c = 0.0;
  for (std::size_t i = 0; i < q.size(); ++i) {
    double d = static_cast<double>(q[i]) - target[i];
    c += d * d;
  }
  return c;
}

// cost-then-lexicographic comparison shared by the fast path and the
// brute-force oracle, so ties break identically
inline bool schedule_better(const CountVec& cand, double cand_cost,
                            const CountVec& best, double best_cost) {
  if (cand_cost < best_cost) return true;
  if (cand_cost > best_cost) return false;
  return cand < best;
}

}  // namespace detail

// Work-conserving action: queue total <e,x> - n distributed over classes to
// minimize |q - q_total * u|, lexicographically smallest q on ties.  Greedy
// rounding plus a +-2 box search around the greedy point; the box provably
// contains the integer argmin (separable convex proximity), and the box scan
// reuses the brute-force comparator, so the result matches exhaustive
// enumeration exactly.
ScheduleResult schedule_action(const CountVec& x, Count n, const Vec& u);

// Exhaustive argmin over all feasible integer queue vectors; test oracle.
ScheduleResult schedule_action_bruteforce(const CountVec& x, Count n, const Vec& u);

struct QueueEvent {
  double time;
  char type;  // 'A' arrival, 'S' service, 'R' abandonment
  std::size_t cls;
  CountVec X, Q, Z;
};

struct QueueOptions {
  bool check_invariants = false;
  bool record_log = false;
  double stats_start = 0.0;  // warmup excluded from wait-fraction statistics
};

struct QueueRunResult {
  std::size_t events = 0;
  std::size_t arrivals = 0;
  std::size_t arrivals_waiting = 0;  // arrivals finding every server busy
  CountVec final_X;
  std::vector<QueueEvent> log;

  double wait_fraction() const {
    return arrivals ? static_cast<double>(arrivals_waiting) / arrivals : 0.0;
  }
};

// Exact discrete-event simulation with full preemption: (Z,Q) re-solved via
// schedule_action after every event.  The policy sees the diffusion-scaled
// state.  Observer is called after every event as observe(t, X, Q, Z).
template <class Observer>
QueueRunResult simulate_queue_observed(const QueueParams& params,
                                       const ControlPolicy& policy, const CountVec& x0,
                                       double horizon, RngStream& rng,
                                       const QueueOptions& opt, Observer&& observe) {
  params.validate();
  const std::size_t m = params.m;
  if (x0.size() != m) throw std::invalid_argument("simulate_queue: bad x0");

  CountVec X = x0, Q(m, 0), Z(m, 0);
  auto reschedule = [&]() {
    Count total = 0;
    for (Count v : X) total += v;
    if (total <= params.n) {
      Z = X;
      std::fill(Q.begin(), Q.end(), 0);
    } else {
      SimplexPoint u = policy.evaluate(params.scaled_state(X));
      ScheduleResult sr = schedule_action(X, params.n, u.u);
      Z = std::move(sr.Z);
      Q = std::move(sr.Q);
    }
  };
  auto assert_invariants = [&](double t) {
    Count totX = 0, totZ = 0;
    for (std::size_t i = 0; i < m; ++i) {
      if (X[i] < 0 || Q[i] < 0 || Z[i] < 0 || X[i] != Q[i] + Z[i])
        throw std::logic_error("queue invariant violated (balance) at t=" +
                               std::to_string(t));
      totX += X[i];
      totZ += Z[i];
    }
    if (totZ != std::min(totX, params.n))
      throw std::logic_error("queue invariant violated (work conservation) at t=" +
                             std::to_string(t));
  };

  reschedule();

  // pre-scheduled renewal arrivals per class; service/abandonment via the
  // memoryless exponential race at aggregate rates mu_i Z_i, gamma_i Q_i
  std::vector<double> next_arrival(m, std::numeric_limits<double>::infinity());
  std::vector<RenewalSpec> arr_spec(m);
  for (std::size_t i = 0; i < m; ++i) {
    double rate = params.arrival_rate(i);
    if (rate > 0.0) {
      arr_spec[i] = RenewalSpec{params.family, rate, params.alpha};
      next_arrival[i] = arr_spec[i].sample_gap(rng);
    }
  }

  QueueRunResult res;
  double t = 0.0;
  while (true) {
    double ta = std::numeric_limits<double>::infinity();
    std::size_t ai = 0;
    for (std::size_t i = 0; i < m; ++i)
      if (next_arrival[i] < ta) { ta = next_arrival[i]; ai = i; }

    double total_rate = 0.0;
    for (std::size_t i = 0; i < m; ++i)
      total_rate += params.mu[i] * Z[i] + params.gamma[i] * Q[i];
    double td = total_rate > 0.0 ? t + rng.exponential() / total_rate
                                 : std::numeric_limits<double>::infinity();

    double tn = std::min(ta, td);
    if (tn > horizon) break;
    t = tn;
    char type;
    std::size_t cls;
    if (ta <= td) {
      type = 'A';
      cls = ai;
      Count busy = 0;
      for (Count v : X) busy += v;
      if (t >= opt.stats_start) {
        res.arrivals++;
        if (busy >= params.n) res.arrivals_waiting++;
      }
      X[ai]++;
      next_arrival[ai] = t + arr_spec[ai].sample_gap(rng);
    } else {
      // pick the departing category proportional to its rate
      double pick = rng.uniform() * total_rate;
      double acc = 0.0;
      type = 'S';
      cls = 0;
      for (std::size_t i = 0; i < m; ++i) {
        acc += params.mu[i] * Z[i];
        if (pick < acc) { type = 'S'; cls = i; break; }
        acc += params.gamma[i] * Q[i];
        if (pick < acc) { type = 'R'; cls = i; break; }
      }
      if (pick >= acc) { type = 'S'; cls = m - 1; }  // fp edge
      X[cls]--;
    }
    reschedule();
    if (opt.check_invariants) assert_invariants(t);
    res.events++;
    if (opt.record_log) res.log.push_back({t, type, cls, X, Q, Z});
    observe(t, X, Q, Z);
  }
  res.final_X = X;
  return res;
}

inline QueueRunResult simulate_queue(const QueueParams& params,
                                     const ControlPolicy& policy, const CountVec& x0,
                                     double horizon, RngStream& rng,
                                     const QueueOptions& opt = {}) {
  return simulate_queue_observed(params, policy, x0, horizon, rng, opt,
                                 [](double, const CountVec&, const CountVec&,
                                    const CountVec&) {});
}

struct ApproxBoundReport {
  double max_deviation = 0.0;
  double bound = 0.0;  // n^{-1/alpha}
  std::size_t samples = 0;
  bool within_bound = false;
};

// (E-approx): sampled lattice states inside the ball of radius
// 0.5 n^{1-1/alpha}; deviation |<e,xhat>(U^n[v] - v)| against n^{-1/alpha}.
ApproxBoundReport approx_bound_check(const QueueParams& params,
                                     const ControlPolicy& policy,
                                     std::size_t n_samples, std::uint64_t seed);

}  // namespace levyq
