#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "levyq/nonlocal.hpp"
#include "levyq/rng.hpp"

namespace levyq {

enum class Inequality {
  Lemma1KMinus,
  Lemma1KPlus,
  Thm2Foster,
  Lemma2Gamma,
  Thm3Full,
  Thm5Cp,
  EDrScaled,
  RemarkCombined,
};

inline Inequality inequality_from_string(const std::string& s) {
  static const std::map<std::string, Inequality> table = {
      {"lemma1_Kminus", Inequality::Lemma1KMinus},
      {"lemma1_Kplus", Inequality::Lemma1KPlus},
      {"thm2_foster", Inequality::Thm2Foster},
      {"lemma2_gamma", Inequality::Lemma2Gamma},
      {"thm3_full", Inequality::Thm3Full},
      {"thm5_cp", Inequality::Thm5Cp},
      {"e_dr_scaled", Inequality::EDrScaled},
      {"remark_combined", Inequality::RemarkCombined},
  };
  auto it = table.find(s);
  if (it == table.end())
    throw std::invalid_argument("unknown inequality id: " + s);
  return it->second;
}

inline std::string inequality_to_string(Inequality id) {
  switch (id) {
    case Inequality::Lemma1KMinus: return "lemma1_Kminus";
    case Inequality::Lemma1KPlus: return "lemma1_Kplus";
    case Inequality::Thm2Foster: return "thm2_foster";
    case Inequality::Lemma2Gamma: return "lemma2_gamma";
    case Inequality::Thm3Full: return "thm3_full";
    case Inequality::Thm5Cp: return "thm5_cp";
    case Inequality::EDrScaled: return "e_dr_scaled";
    case Inequality::RemarkCombined: return "remark_combined";
  }
  return "?";
}

struct GridSpec {
  int radius_doublings = 14;      // radii 0.5 * 2^k, k = 0..radius_doublings
  double base_radius = 0.5;
  int random_directions = 8;
  int band_points = 48;           // dense band |<e,x>| <= 1 near the switching plane
  std::uint64_t seed = 12345;
};

// The switching hyperplane <e,x>=0 and the e-direction are where the
// inequalities are tightest, so the grid always contains +-e_i, +-e/sqrt(m),
// random unit vectors, and a band of points straddling the hyperplane.
inline std::vector<Vec> build_grid(std::size_t m, const GridSpec& spec) {
  std::vector<Vec> dirs;
  for (std::size_t i = 0; i < m; ++i) {
    Vec d(m, 0.0);
    d[i] = 1.0;
    dirs.push_back(d);
    d[i] = -1.0;
    dirs.push_back(d);
  }
  Vec de(m, 1.0 / std::sqrt(static_cast<double>(m)));
  dirs.push_back(de);
  for (double& v : de) v = -v;
  dirs.push_back(de);

  RngStream rng(spec.seed, 0);
  for (int k = 0; k < spec.random_directions; ++k) {
    Vec d(m);
    double n2 = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
      d[i] = rng.normal();
      n2 += d[i] * d[i];
    }
    double n = std::sqrt(n2);
    for (double& v : d) v /= n;
    dirs.push_back(d);
  }

  std::vector<Vec> grid;
  for (int k = 0; k <= spec.radius_doublings; ++k) {
    double r = spec.base_radius * std::pow(2.0, k);
    for (const Vec& d : dirs) {
      Vec x(m);
      for (std::size_t i = 0; i < m; ++i) x[i] = r * d[i];
      grid.push_back(std::move(x));
    }
  }

  // band straddling <e,x> = 0
  for (int k = 0; k < spec.band_points; ++k) {
    Vec w(m);
    for (std::size_t i = 0; i < m; ++i) w[i] = 5.0 * (2.0 * rng.uniform() - 1.0);
    double target = -1.0 + 2.0 * (k + 0.5) / spec.band_points;
    double shift = (target - sum(w)) / static_cast<double>(m);
    for (double& v : w) v += shift;
    grid.push_back(std::move(w));
  }
  return grid;
}

struct DriftViolation {
  Vec x;
  std::size_t vertex;
  double margin;  // RHS - LHS, negative when violated
};

struct DriftReport {
  Inequality id;
  std::size_t grid_points = 0;
  double worst_margin = std::numeric_limits<double>::infinity();
  double fitted_constant = 0.0;        // C0(p), kappa~0, C~0... per inequality
  double fitted_rate = 0.0;            // kappa~1 / c1 for the exponential forms
  double compact_radius = 0.0;         // R0: all margins nonpositive excess beyond it
  bool compact_radius_found = true;
  std::vector<DriftViolation> violations;  // excess > 0 outside the compact set
  double quadrature_budget = 0.0;          // summed relative error estimates
  bool passed = false;
  std::string precondition_note;
};

namespace detail {

inline double lyap_power(const LyapunovSpec& spec, const Vec& x, double power) {
  LyapunovSpec s = spec;
  s.p = 1.0;
  return std::pow(lyapunov_eval(s, x).base, power);
}

}  // namespace detail

// Evaluates LHS and RHS of the selected inequality at every grid point and at
// all m simplex vertices (sufficient: the drift is affine in u, so a
// linear-in-drift inequality holds on the simplex iff it holds at vertices).
//
// Drift-only inequalities are pointwise exact.  Generator inequalities are
// checked as excess(x) = LHS + decay(x) <= C on the grid with excess <= 0 for
// |x| >= R0; the fitted C and R0 are reported.
DriftReport verify_drift_inequality(const GeneratorConfig& cfg, Inequality id,
                                    const GridSpec& grid_spec);

struct Lemma3Row {
  double radius;
  Vec direction;
  double scaled_value;  // |x|^{alpha-p} * I_alpha V_p(x)
};

struct Lemma3Table {
  std::vector<Lemma3Row> rows;
  double max_value;
  double min_value;
};

Lemma3Table lemma3_probe(const LyapunovSpec& spec, double alpha, const Vec& xi,
                         const std::vector<double>& radii,
                         const std::vector<Vec>& directions,
                         const QuadratureOptions& opt = {});

}  // namespace levyq
