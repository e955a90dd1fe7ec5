#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

#include "levyq/rng.hpp"

namespace levyq {

using Vec = std::vector<double>;

enum class RadialLaw { PointMass, Exponential, Pareto };

// Finite Levy measure eta of total mass nu, supported on the ray {t w, t>=0}
// with |w| = 1, plus the driver drift vartheta.  The drift is consumed by the
// SDE integrator, never by the jump sampler.
struct CPMeasureSpec {
  double nu = 0.0;           // jump rate (total mass of eta)
  Vec direction;             // unit vector w
  RadialLaw radial = RadialLaw::PointMass;
  double radial_param = 1.0;  // point: atom radius r; exp: mean; pareto: scale x0
  double pareto_index = 2.5;  // pareto only (theta*)
  Vec vartheta;               // driver drift

  void validate() const {
    if (nu < 0.0) throw std::invalid_argument("CPMeasureSpec: nu must be >= 0");
    if (nu > 0.0) {
      double n2 = 0.0;
      for (double wi : direction) n2 += wi * wi;
      if (std::fabs(std::sqrt(n2) - 1.0) > 1e-9)
        throw std::invalid_argument("CPMeasureSpec: direction must be a unit vector");
      if (!(radial_param > 0.0))
        throw std::invalid_argument("CPMeasureSpec: radial parameter must be positive");
      if (radial == RadialLaw::Pareto && !(pareto_index > 0.0))
        throw std::invalid_argument("CPMeasureSpec: pareto index must be positive");
    }
  }

  std::size_t dim() const { return direction.empty() ? vartheta.size() : direction.size(); }

  double sample_radius(RngStream& rng) const {
    switch (radial) {
      case RadialLaw::PointMass:
        return radial_param;
      case RadialLaw::Exponential:
        return radial_param * rng.exponential();
      case RadialLaw::Pareto:
        return radial_param * std::pow(rng.uniform(), -1.0 / pareto_index);
    }
    return 0.0;
  }

  // sup of Theta_c: moment orders theta with int_{|y|>1} |y|^theta eta(dy) finite
  double theta_c() const {
    if (nu == 0.0) return std::numeric_limits<double>::infinity();
    if (radial == RadialLaw::Pareto) return pareto_index;
    return std::numeric_limits<double>::infinity();
  }

  // E[R ; R > 1] under the radial law, or +inf when the mean integral diverges.
  double mean_radius_above_one() const {
    switch (radial) {
      case RadialLaw::PointMass:
        return radial_param > 1.0 ? radial_param : 0.0;
      case RadialLaw::Exponential: {
        double lam = 1.0 / radial_param;
        return std::exp(-lam) * (1.0 + 1.0 / lam);
      }
      case RadialLaw::Pareto: {
        if (pareto_index <= 1.0) return std::numeric_limits<double>::infinity();
        double c = std::max(1.0, radial_param);
        return pareto_index * std::pow(radial_param, pareto_index) *
               std::pow(c, 1.0 - pareto_index) / (pareto_index - 1.0);
      }
    }
    return 0.0;
  }
};

struct JumpSchedule {
  std::vector<double> times;
  std::vector<Vec> jumps;
};

inline JumpSchedule sample_compound_poisson_path(const CPMeasureSpec& spec,
                                                 double horizon, RngStream& rng) {
  spec.validate();
  if (horizon < 0.0)
    throw std::invalid_argument("sample_compound_poisson_path: negative horizon");
  JumpSchedule sched;
  if (spec.nu == 0.0) return sched;
  double t = 0.0;
  for (;;) {
    t += rng.exponential() / spec.nu;
    if (t > horizon) break;
    double r = spec.sample_radius(rng);
    Vec jump(spec.direction.size());
    for (std::size_t i = 0; i < jump.size(); ++i) jump[i] = r * spec.direction[i];
    sched.times.push_back(t);
    sched.jumps.push_back(std::move(jump));
  }
  return sched;
}

}  // namespace levyq
