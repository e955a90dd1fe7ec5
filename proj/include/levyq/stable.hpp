#pragma once

#include <cmath>
#include <stdexcept>
#include <vector>

#include "levyq/rng.hpp"

namespace levyq {

// Symmetric alpha-stable law, characteristic function exp(-(scale*|u|)^alpha).
struct StableSpec {
  double alpha = 1.5;
  double scale = 1.0;

  void validate(bool allow_gaussian = false) const {
    double hi = allow_gaussian ? 2.0 + 1e-12 : 2.0;
    if (!(alpha > 1.0) || !(alpha < hi))
      throw std::invalid_argument("StableSpec: alpha must lie in (1,2)");
    if (!(scale > 0.0))
      throw std::invalid_argument("StableSpec: scale must be positive");
  }
};

// One draw from S(alpha, beta=0) with unit scale, Chambers-Mallows-Stuck.
inline double stable_standard(double alpha, RngStream& rng) {
  double theta = 3.14159265358979323846 * (rng.uniform() - 0.5);
  double w = rng.exponential();
  double a_theta = alpha * theta;
  double s = std::sin(a_theta) / std::pow(std::cos(theta), 1.0 / alpha);
  double t = std::pow(std::cos(theta - a_theta) / w, (1.0 - alpha) / alpha);
  return s * t;
}

// General skewed draw, S(alpha, beta) with |CF| = exp(-|u|^alpha) and zero
// mean (alpha > 1).  Weron's form of Chambers-Mallows-Stuck.
inline double stable_standard(double alpha, double beta, RngStream& rng) {
  if (beta == 0.0) return stable_standard(alpha, rng);
  double theta = 3.14159265358979323846 * (rng.uniform() - 0.5);
  double w = rng.exponential();
  double tan_half = std::tan(1.57079632679489661923 * alpha);
  double b0 = std::atan(beta * tan_half) / alpha;
  double s0 = std::pow(1.0 + beta * beta * tan_half * tan_half, 0.5 / alpha);
  double a_shift = alpha * (theta + b0);
  return s0 * std::sin(a_shift) / std::pow(std::cos(theta), 1.0 / alpha) *
         std::pow(std::cos(theta - a_shift) / w, (1.0 - alpha) / alpha);
}

inline std::vector<double> sample_stable(const StableSpec& spec, std::size_t count,
                                         RngStream& rng,
                                         bool allow_gaussian = false) {
  spec.validate(allow_gaussian);
  std::vector<double> out(count);
  for (std::size_t i = 0; i < count; ++i)
    out[i] = spec.scale * stable_standard(spec.alpha, rng);
  return out;
}

// c_alpha = int_R (1 - cos s) |s|^{-1-alpha} ds, the normalization linking the
// Levy density xi |y|^{-1-alpha} to the stable scale: a weight xi corresponds
// to scale sigma = (xi * c_alpha)^{1/alpha}.
//
// Levy-Khintchine closed form: c_alpha = 2 Gamma(2-alpha) |cos(pi alpha/2)| / (alpha (alpha-1)).
inline double stable_levy_constant(double alpha) {
  if (!(alpha > 1.0) || !(alpha < 2.0))
    throw std::invalid_argument("stable_levy_constant: alpha must lie in (1,2)");
  return 2.0 * std::tgamma(2.0 - alpha) *
         std::fabs(std::cos(1.57079632679489661923 * alpha)) /
         (alpha * (alpha - 1.0));
}

// Cross-check of the closed form by adaptive Simpson on [0, B] plus the
// monotone tail; used at startup in debug paths and by the tests.
double stable_levy_constant_quadrature(double alpha, double rel_tol = 1e-10);

inline double levy_weight_to_scale(double xi, double alpha) {
  if (!(xi > 0.0)) throw std::invalid_argument("levy weight must be positive");
  return std::pow(xi * stable_levy_constant(alpha), 1.0 / alpha);
}

}  // namespace levyq
