#pragma once

#include <cmath>
#include <stdexcept>
#include <vector>

#include "levyq/rng.hpp"

namespace levyq {

enum class RenewalFamily { Pareto, Exponential, Deterministic };

// Renewal interarrival specification.  The parameterization is fixed so the
// mean gap equals 1/rate exactly in every family.  For Pareto the survival is
// (x0/x)^{tail_index} for x >= x0 with x0 = (tail_index-1)/(tail_index*rate).
struct RenewalSpec {
  RenewalFamily family = RenewalFamily::Exponential;
  double rate = 1.0;
  double tail_index = 1.5;  // pareto only, must exceed 1

  void validate() const {
    if (!(rate > 0.0))
      throw std::invalid_argument("RenewalSpec: rate must be positive");
    if (family == RenewalFamily::Pareto && !(tail_index > 1.0))
      throw std::invalid_argument(
          "RenewalSpec: pareto tail index <= 1 has infinite mean");
  }

  double pareto_x0() const {
    return (tail_index - 1.0) / (tail_index * rate);
  }

  double sample_gap(RngStream& rng) const {
    switch (family) {
      case RenewalFamily::Deterministic:
        return 1.0 / rate;
      case RenewalFamily::Exponential:
        return rng.exponential() / rate;
      case RenewalFamily::Pareto:
        return pareto_x0() * std::pow(rng.uniform(), -1.0 / tail_index);
    }
    return 0.0;  // unreachable
  }
};

inline std::vector<double> sample_renewal_arrivals(const RenewalSpec& spec,
                                                   double horizon,
                                                   RngStream& rng) {
  spec.validate();
  if (horizon < 0.0)
    throw std::invalid_argument("sample_renewal_arrivals: negative horizon");
  std::vector<double> times;
  double t = 0.0;
  for (;;) {
    t += spec.sample_gap(rng);
    if (t > horizon) break;
    times.push_back(t);
  }
  return times;
}

}  // namespace levyq
