#include "levyq/queue.hpp"

#include <limits>

namespace levyq {

namespace {

struct ScheduleProblem {
  const CountVec& x;
  Count q_total;
  Vec target;
};

// Scan a candidate set defined by offsets in [-2,2]^m around a center point.
void box_scan(const ScheduleProblem& pr, const CountVec& center, std::size_t i,
              CountVec& cand, Count partial, CountVec& best, double& best_cost) {
  std::size_t m = pr.x.size();
  if (i + 1 == m) {
    Count last = pr.q_total - partial;
    if (last < 0 || last > pr.x[i]) return;
    if (std::llabs(last - center[i]) > 2) return;
    cand[i] = last;
    double c = detail::schedule_cost(cand, pr.target);
    if (best.empty() || detail::schedule_better(cand, c, best, best_cost)) {
      best = cand;
      best_cost = c;
    }
    return;
  }
  for (Count d = -2; d <= 2; ++d) {
    Count q = center[i] + d;
    if (q < 0 || q > pr.x[i] || partial + q > pr.q_total) continue;
    cand[i] = q;
    box_scan(pr, center, i + 1, cand, partial + q, best, best_cost);
  }
}

void full_scan(const ScheduleProblem& pr, std::size_t i, CountVec& cand,
               Count partial, CountVec& best, double& best_cost) {
  std::size_t m = pr.x.size();
  if (i + 1 == m) {
    Count last = pr.q_total - partial;
    if (last < 0 || last > pr.x[i]) return;
    cand[i] = last;
    double c = detail::schedule_cost(cand, pr.target);
    if (best.empty() || detail::schedule_better(cand, c, best, best_cost)) {
      best = cand;
      best_cost = c;
    }
    return;
  }
  Count cap = std::min(pr.x[i], pr.q_total - partial);
  for (Count q = 0; q <= cap; ++q) {
    cand[i] = q;
    full_scan(pr, i + 1, cand, partial + q, best, best_cost);
  }
}

ScheduleResult finish(const CountVec& x, const CountVec& q) {
  ScheduleResult r;
  r.Q = q;
  r.Z.resize(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) r.Z[i] = x[i] - q[i];
  return r;
}

Count validated_total(const CountVec& x, Count n, const Vec& u) {
  if (x.size() != u.size())
    throw std::invalid_argument("schedule_action: dimension mismatch");
  Count total = 0;
  for (Count v : x) {
    if (v < 0) throw std::invalid_argument("schedule_action: negative state");
    total += v;
  }
  return total - n;
}

}  // namespace

ScheduleResult schedule_action(const CountVec& x, Count n, const Vec& u) {
  Count q_total = validated_total(x, n, u);
  std::size_t m = x.size();
  if (q_total <= 0) return finish(x, CountVec(m, 0));

  Vec target(m);
  for (std::size_t i = 0; i < m; ++i) target[i] = static_cast<double>(q_total) * u[i];

  // greedy: round-and-clamp, then allocate the remaining units at minimal
  // marginal cost (2(q_i - t_i) + 1 per increment of coordinate i)
  CountVec q(m);
  Count s = 0;
  for (std::size_t i = 0; i < m; ++i) {
    q[i] = std::clamp<Count>(static_cast<Count>(std::llround(target[i])), 0, x[i]);
    s += q[i];
  }
  while (s < q_total) {
    double best_mc = std::numeric_limits<double>::infinity();
    std::size_t bi = m;
    for (std::size_t i = 0; i < m; ++i) {
      if (q[i] >= x[i]) continue;
      double mc = 2.0 * (static_cast<double>(q[i]) - target[i]) + 1.0;
      if (mc < best_mc) { best_mc = mc; bi = i; }
    }
    q[bi]++;
    s++;
  }
  while (s > q_total) {
    double best_mc = std::numeric_limits<double>::infinity();
    std::size_t bi = m;
    for (std::size_t i = 0; i < m; ++i) {
      if (q[i] <= 0) continue;
      double mc = 1.0 - 2.0 * (static_cast<double>(q[i]) - target[i]);
      if (mc < best_mc) { best_mc = mc; bi = i; }
    }
    q[bi]--;
    s--;
  }

  // the integer argmin lies within +-2 of the greedy point per coordinate
  // (both are within 1 of the continuous projection), so a bounded box scan
  // with the shared comparator reproduces exhaustive enumeration exactly
  ScheduleProblem pr{x, q_total, target};
  CountVec best, cand(m);
  double best_cost = std::numeric_limits<double>::infinity();
  box_scan(pr, q, 0, cand, 0, best, best_cost);
  return finish(x, best);
}

ScheduleResult schedule_action_bruteforce(const CountVec& x, Count n, const Vec& u) {
  Count q_total = validated_total(x, n, u);
  std::size_t m = x.size();
  if (q_total <= 0) return finish(x, CountVec(m, 0));
  Vec target(m);
  for (std::size_t i = 0; i < m; ++i) target[i] = static_cast<double>(q_total) * u[i];
  ScheduleProblem pr{x, q_total, target};
  CountVec best, cand(m);
  double best_cost = std::numeric_limits<double>::infinity();
  full_scan(pr, 0, cand, 0, best, best_cost);
  return finish(x, best);
}

ApproxBoundReport approx_bound_check(const QueueParams& params,
                                     const ControlPolicy& policy,
                                     std::size_t n_samples, std::uint64_t seed) {
  params.validate();
  const std::size_t m = params.m;
  const double n = static_cast<double>(params.n);
  const double scale = params.scale();                       // n^{-1/alpha}
  const double radius = 0.5 * std::pow(n, 1.0 - 1.0 / params.alpha);

  ApproxBoundReport rep;
  rep.bound = scale;
  RngStream rng(seed, 0);
  while (rep.samples < n_samples) {
    // uniform lattice state with scaled norm inside the ball
    CountVec x(m);
    Vec xhat(m);
    bool ok = true;
    for (std::size_t i = 0; i < m; ++i) {
      double lo = params.rho_i(i) * n - radius / scale;
      double hi = params.rho_i(i) * n + radius / scale;
      double v = lo + rng.uniform() * (hi - lo);
      x[i] = std::max<Count>(0, static_cast<Count>(std::llround(v)));
      xhat[i] = scale * (static_cast<double>(x[i]) - params.rho_i(i) * n);
    }
    if (norm2(xhat) > radius) ok = false;
    if (!ok) continue;
    rep.samples++;

    Count total = 0;
    for (Count v : x) total += v;
    if (total <= params.n) continue;  // zero queue: both sides vanish
    SimplexPoint u = policy.evaluate(xhat);
    ScheduleResult sr = schedule_action(x, params.n, u.u);
    double q_total = static_cast<double>(total - params.n);
    double dev2 = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
      double d = scale * (static_cast<double>(sr.Q[i]) - q_total * u.u[i]);
      dev2 += d * d;
    }
    rep.max_deviation = std::max(rep.max_deviation, std::sqrt(dev2));
  }
  rep.within_bound = rep.max_deviation <= rep.bound;
  return rep;
}

}  // namespace levyq
