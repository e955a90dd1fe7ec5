#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <unordered_map>
#include <vector>

#include "levyq/model.hpp"

namespace levyq {

// Shared-binning histogram TV estimate.  Per-axis bin width by Scott's rule on
// the pooled sample, support clipped to [-50, 50] with overflow bins at the
// ends.  The estimate lower-bounds true total variation (discretization).
struct TvBinning {
  double lo = -50.0;
  double hi = 50.0;
  Vec width;  // per axis

  std::int64_t bin_index(const Vec& x) const {
    // mixed-radix encoding; overflow bins get indices 0 and n_bins+1 per axis
    std::int64_t key = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
      std::int64_t n = static_cast<std::int64_t>((hi - lo) / width[i]) + 1;
      std::int64_t b;
      if (x[i] < lo)
        b = 0;
      else if (x[i] >= hi)
        b = n + 1;
      else
        b = 1 + static_cast<std::int64_t>((x[i] - lo) / width[i]);
      key = key * (n + 2) + b;
    }
    return key;
  }
};

inline TvBinning scott_binning(const std::vector<Vec>& a, const std::vector<Vec>& b) {
  if (a.empty() || b.empty())
    throw std::invalid_argument("empirical_tv: empty sample set");
  std::size_t m = a[0].size();
  std::size_t n = a.size() + b.size();
  TvBinning bins;
  bins.width.resize(m);
  for (std::size_t i = 0; i < m; ++i) {
    double s = 0.0, s2 = 0.0;
    for (const Vec& x : a) { s += x[i]; s2 += x[i] * x[i]; }
    for (const Vec& x : b) { s += x[i]; s2 += x[i] * x[i]; }
    double mean = s / n;
    double var = std::max(s2 / n - mean * mean, 1e-12);
    bins.width[i] = std::max(3.49 * std::sqrt(var) * std::pow(double(n), -1.0 / 3.0),
                             1e-6);
    bins.width[i] = std::min(bins.width[i], 100.0);
  }
  return bins;
}

struct TvEstimate {
  double tv;
  double error;  // rough Monte Carlo error scale
};

inline TvEstimate empirical_tv(const std::vector<Vec>& a, const std::vector<Vec>& b,
                               const TvBinning& bins) {
  std::unordered_map<std::int64_t, std::pair<std::uint64_t, std::uint64_t>> counts;
  counts.reserve(a.size() / 4 + 16);
  for (const Vec& x : a) counts[bins.bin_index(x)].first++;
  for (const Vec& x : b) counts[bins.bin_index(x)].second++;
  double na = static_cast<double>(a.size());
  double nb = static_cast<double>(b.size());
  double tv = 0.0;
  std::size_t occupied = 0;
  for (const auto& kv : counts) {
    tv += std::fabs(kv.second.first / na - kv.second.second / nb);
    ++occupied;
  }
  tv *= 0.5;
  double err = 0.5 * std::sqrt(static_cast<double>(occupied)) *
               (1.0 / std::sqrt(na) + 1.0 / std::sqrt(nb)) / 2.0;
  return {std::min(tv, 1.0), err};
}

inline TvEstimate empirical_tv(const std::vector<Vec>& a, const std::vector<Vec>& b) {
  return empirical_tv(a, b, scott_binning(a, b));
}

struct TvCurve {
  std::vector<double> times;
  std::vector<double> tv;
  std::vector<double> err;
  double floor = 0.0;  // self-distance of the stationary reference
};

struct RateFit {
  double exponent = 0.0;   // log-log slope (polynomial) or -rate (exponential)
  double intercept = 0.0;
  double r_squared = 0.0;
  std::size_t used_points = 0;
  std::vector<std::size_t> censored;  // indices within 2 floors, excluded
};

namespace detail {

inline RateFit least_squares(const std::vector<double>& xs,
                             const std::vector<double>& ys) {
  RateFit fit;
  std::size_t n = xs.size();
  fit.used_points = n;
  double sx = 0, sy = 0, sxx = 0, sxy = 0, syy = 0;
  for (std::size_t i = 0; i < n; ++i) {
    sx += xs[i]; sy += ys[i];
    sxx += xs[i] * xs[i];
    sxy += xs[i] * ys[i];
    syy += ys[i] * ys[i];
  }
  double den = n * sxx - sx * sx;
  if (std::fabs(den) < 1e-30) {  // all abscissae equal: flat fit
    fit.exponent = 0.0;
    fit.intercept = sy / n;
    fit.r_squared = 1.0;
    return fit;
  }
  fit.exponent = (n * sxy - sx * sy) / den;
  fit.intercept = (sy - fit.exponent * sx) / n;
  double ss_res = 0.0;
  double mean_y = sy / n;
  double ss_tot = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    double r = ys[i] - (fit.intercept + fit.exponent * xs[i]);
    ss_res += r * r;
    ss_tot += (ys[i] - mean_y) * (ys[i] - mean_y);
  }
  fit.r_squared = ss_tot > 0.0 ? 1.0 - ss_res / ss_tot : 1.0;
  return fit;
}

}  // namespace detail

// Least-squares slope of log TV against log t; points within 2 floors of the
// estimator floor are censored.
inline RateFit fit_polynomial_rate(const TvCurve& curve) {
  RateFit fit;
  std::vector<double> xs, ys;
  for (std::size_t i = 0; i < curve.times.size(); ++i) {
    if (curve.tv[i] <= 2.0 * curve.floor || curve.tv[i] <= 0.0) {
      fit.censored.push_back(i);
      continue;
    }
    xs.push_back(std::log(curve.times[i]));
    ys.push_back(std::log(curve.tv[i]));
  }
  if (xs.size() < 2)
    throw std::runtime_error("fit_polynomial_rate: all points at estimator floor");
  auto censored = fit.censored;
  fit = detail::least_squares(xs, ys);
  fit.censored = censored;
  return fit;
}

// Semilog regression; exponent carries -rate, so rate = -exponent.
inline RateFit fit_exponential_rate(const TvCurve& curve) {
  RateFit fit;
  std::vector<double> xs, ys;
  for (std::size_t i = 0; i < curve.times.size(); ++i) {
    if (curve.tv[i] <= 2.0 * curve.floor || curve.tv[i] <= 0.0) {
      fit.censored.push_back(i);
      continue;
    }
    xs.push_back(curve.times[i]);
    ys.push_back(std::log(curve.tv[i]));
  }
  if (xs.size() < 2)
    throw std::runtime_error("fit_exponential_rate: all points at estimator floor");
  auto censored = fit.censored;
  fit = detail::least_squares(xs, ys);
  fit.censored = censored;
  return fit;
}

}  // namespace levyq
