#include "levyq/stable.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>

namespace levyq {

// c_alpha = 2 int_0^inf (1 - cos s) s^{-1-alpha} ds, computed without the
// closed form.  The integrand oscillates, so the range is split at multiples
// of pi and summed until the alternating remainder is below tolerance; the
// small-s part uses the stable form 2 sin^2(s/2) to avoid cancellation.
double stable_levy_constant_quadrature(double alpha, double rel_tol) {
  if (!(alpha > 1.0) || !(alpha < 2.0))
    throw std::invalid_argument("stable_levy_constant_quadrature: alpha in (1,2)");
  using boost::math::quadrature::gauss_kronrod;
  auto f = [alpha](double s) {
    // 2 sin^2(s/2) s^{-1-alpha} written as (sin(s/2)/(s/2))^2 s^{1-alpha} / 2
    // so the integrand stays finite in floating point arbitrarily close to 0
    double ratio = s > 1e-8 ? std::sin(0.5 * s) / (0.5 * s) : 1.0;
    return 0.5 * ratio * ratio * std::pow(s, 1.0 - alpha);
  };
  const double pi = 3.14159265358979323846;
  // tanh-sinh absorbs the integrable s^{1-alpha} singularity at the origin
  boost::math::quadrature::tanh_sinh<double> ts;
  double total = ts.integrate(f, 0.0, pi, rel_tol);
  // beyond pi, integrate (1 - cos) piecewise over pi-intervals; the deviation
  // of each piece from the pure power-law piece alternates in sign and decays
  double tail_power = 0.0;  // int_pi^inf s^{-1-alpha} ds
  tail_power = std::pow(pi, -alpha) / alpha;
  double correction = 0.0;
  double prev_piece = 0.0;
  for (int k = 1; k < 4000; ++k) {
    double a = pi * k, b = pi * (k + 1);
    auto g = [alpha](double s) { return -std::cos(s) * std::pow(s, -1.0 - alpha); };
    double piece = gauss_kronrod<double, 31>::integrate(g, a, b, 10, rel_tol);
    correction += piece;
    if (k > 2 && std::fabs(piece) + std::fabs(prev_piece) <
                     rel_tol * std::fabs(total + tail_power))
      break;
    prev_piece = piece;
  }
  return 2.0 * (total + tail_power + correction);
}

}  // namespace levyq
