#include "levyq/drift_check.hpp"

#include <algorithm>
#include <cmath>

namespace levyq {

namespace {

bool needs_generator(Inequality id) {
  switch (id) {
    case Inequality::Thm2Foster:
    case Inequality::Thm3Full:
    case Inequality::Thm5Cp:
    case Inequality::RemarkCombined:
      return true;
    default:
      return false;
  }
}

bool wants_scaled_variant(Inequality id) {
  return id == Inequality::Thm5Cp || id == Inequality::EDrScaled;
}

}  // namespace

DriftReport verify_drift_inequality(const GeneratorConfig& cfg, Inequality id,
                                    const GridSpec& grid_spec) {
  cfg.params.validate();
  cfg.lyapunov.validate();
  DriftReport report;
  report.id = id;

  const DriftParams& params = cfg.params;
  const LyapunovSpec& spec = cfg.lyapunov;
  const std::size_t m = params.m;
  const double p = spec.p;
  const double delta = spec.delta;
  const double beta = params.beta();
  const double md = static_cast<double>(m);

  // precondition screen
  if (wants_scaled_variant(id) != (spec.variant == LyapunovVariant::VpScaled)) {
    report.precondition_note = "lyapunov variant does not match inequality";
    return report;
  }
  if (id != Inequality::Lemma2Gamma && id != Inequality::Thm3Full) {
    DeltaAdmissibility adm = check_delta(params, delta);
    if (!adm.el1a_ok) {
      report.precondition_note = "delta violates the abandonment-ratio bound";
      return report;
    }
    if (id == Inequality::Thm2Foster && beta > 0.0 && !adm.et2a_ok) {
      report.precondition_note =
          "delta >= beta/(2m(2beta+m)) = " + std::to_string(adm.et2a_bound);
      return report;
    }
  }
  if ((id == Inequality::Lemma2Gamma || id == Inequality::Thm3Full)) {
    for (double g : params.gamma)
      if (!(g > 0.0)) {
        report.precondition_note = "requires Gamma > 0";
        return report;
      }
  }
  if (id == Inequality::Thm5Cp || id == Inequality::RemarkCombined) {
    if (!cfg.driver.has_cp()) {
      report.precondition_note = "requires a compound Poisson component";
      return report;
    }
    if (!(p < cfg.driver.cp.theta_c())) {
      report.precondition_note = "p outside Theta_c";
      return report;
    }
  }

  const std::vector<Vec> grid = build_grid(m, grid_spec);
  report.grid_points = grid.size();

  LyapunovField field(spec);
  const bool generator_form = needs_generator(id);
  const bool fitted_rate_form =
      id == Inequality::Lemma2Gamma || id == Inequality::Thm3Full;

  struct PointEval {
    double radius;
    double excess;       // generator forms
    const Vec* x;
    std::size_t vertex;
  };
  std::vector<PointEval> excesses;
  struct RatePoint {
    double radius;
    double lhs;
    double vp;
    const Vec* x;
    std::size_t vertex;
  };
  std::vector<RatePoint> rate_points;

  double worst = std::numeric_limits<double>::infinity();
  double max_quad = 0.0;
  std::vector<DriftViolation> hard_violations;

  for (const Vec& x : grid) {
    const LyapunovEval ev = lyapunov_eval(spec, x);
    const double vp_minus1 = std::pow(ev.base, p - 1.0);
    const double ex = sum(x);
    double x1 = 0.0, xneg1 = 0.0;
    for (double v : x) {
      x1 += std::fabs(v);
      xneg1 += std::max(-v, 0.0);
    }

    double nonlocal_part = 0.0;
    if (generator_form) {
      double qerr = 0.0;
      if (cfg.driver.has_brownian())
        for (std::size_t i = 0; i < m; ++i)
          nonlocal_part +=
              0.5 * cfg.driver.sigma[i] * cfg.driver.sigma[i] * ev.hessian[i][i];
      if (cfg.driver.has_stable()) {
        double e1 = 0.0;
        nonlocal_part += nonlocal_alpha(field, x, cfg.driver.alpha, cfg.driver.xi,
                                        cfg.quad, &e1);
        qerr += e1;
      }
      if (cfg.driver.has_cp()) {
        double e2 = 0.0;
        nonlocal_part += nonlocal_cp(field, x, cfg.driver.cp, cfg.quad, &e2);
        qerr += e2;
      }
      max_quad = std::max(max_quad, qerr);
    }

    // K^- points are control free: one evaluation suffices there.
    const std::size_t n_vertices = (ex <= 0.0) ? 1 : m;
    for (std::size_t j = 0; j < n_vertices; ++j) {
      SimplexPoint u = vertex(m, j);
      Vec b = drift(x, u, params);
      double drift_term = inner(b, ev.gradient);
      double lhs = drift_term + nonlocal_part;

      switch (id) {
        case Inequality::Lemma1KMinus: {
          if (ex > 0.0) continue;
          double rhs = p * (delta * beta + md / 2.0 * (1.0 + delta) - delta * x1) *
                       vp_minus1;
          double margin = rhs - drift_term;
          worst = std::min(worst, margin);
          if (margin < -1e-9 * (1.0 + std::fabs(rhs)))
            hard_violations.push_back({x, j, margin});
          break;
        }
        case Inequality::Lemma1KPlus: {
          if (ex <= 0.0) continue;
          double rhs = -p *
                       (beta / md - delta * beta - delta * md / 2.0 + delta * xneg1) *
                       vp_minus1;
          double margin = rhs - drift_term;
          worst = std::min(worst, margin);
          if (margin < -1e-9 * (1.0 + std::fabs(rhs)))
            hard_violations.push_back({x, j, margin});
          break;
        }
        case Inequality::EDrScaled: {
          double rhs;
          if (ex <= 0.0)
            rhs = p * delta *
                  (delta * beta + md / (2.0 * delta) * (1.0 + delta * delta) -
                   delta * x1) *
                  vp_minus1;
          else
            rhs = -p * delta *
                  (beta / md - delta * beta - delta * md / 2.0 + delta * xneg1) *
                  vp_minus1;
          double margin = rhs - drift_term;
          worst = std::min(worst, margin);
          if (margin < -1e-9 * (1.0 + std::fabs(rhs)))
            hard_violations.push_back({x, j, margin});
          break;
        }
        case Inequality::Thm2Foster: {
          // certified decay keeps a factor-two margin: deep in the all-negative
          // region the drift supplies exactly delta*|x^-|_1 of decay and
          // nothing more, so claiming the full rate plus the beta/(2m) offset
          // would leave a positive far-field excess of order V^{p-1}
          double decay =
              0.5 * p * (beta / (2.0 * md) + delta * xneg1) * vp_minus1;
          excesses.push_back({norm2(x), lhs + decay, &x, j});
          break;
        }
        case Inequality::Thm5Cp: {
          double decay = p * delta * beta / (2.0 * md) * vp_minus1;
          excesses.push_back({norm2(x), lhs + decay, &x, j});
          break;
        }
        case Inequality::RemarkCombined: {
          double decay = p * beta / (2.0 * md) * vp_minus1;
          excesses.push_back({norm2(x), lhs + decay, &x, j});
          break;
        }
        case Inequality::Lemma2Gamma:
          rate_points.push_back({norm2(x), drift_term, ev.value, &x, j});
          break;
        case Inequality::Thm3Full:
          rate_points.push_back({norm2(x), lhs, ev.value, &x, j});
          break;
      }
    }
  }

  report.quadrature_budget = max_quad;

  if (id == Inequality::Lemma1KMinus || id == Inequality::Lemma1KPlus ||
      id == Inequality::EDrScaled) {
    report.worst_margin = worst;
    report.violations = hard_violations;
    report.passed = hard_violations.empty();
    return report;
  }

  if (fitted_rate_form) {
    // kappa1 from the far field, kappa0 as the remaining excess
    double rate = std::numeric_limits<double>::infinity();
    for (const RatePoint& q : rate_points)
      if (q.radius >= 8.0) rate = std::min(rate, -q.lhs / q.vp);
    if (!std::isfinite(rate) || rate <= 0.0) {
      report.passed = false;
      report.fitted_rate = std::isfinite(rate) ? rate : 0.0;
      return report;
    }
    double c0 = 0.0;
    double worst_margin = std::numeric_limits<double>::infinity();
    for (const RatePoint& q : rate_points) {
      c0 = std::max(c0, q.lhs + rate * q.vp);
      worst_margin = std::min(worst_margin, -(q.lhs + rate * q.vp));
    }
    report.fitted_rate = rate;
    report.fitted_constant = c0;
    report.worst_margin = worst_margin;
    report.passed = true;
    return report;
  }

  // generator forms: fitted constant is the grid sup of the excess plus the
  // quadrature budget; R0 is the largest radius still carrying positive excess
  double tol = 1e-6;
  double c_fit = 0.0;
  double r0 = 0.0;
  double max_radius = 0.0;
  double worst_margin = std::numeric_limits<double>::infinity();
  for (const PointEval& q : excesses) {
    c_fit = std::max(c_fit, q.excess);
    max_radius = std::max(max_radius, q.radius);
    worst_margin = std::min(worst_margin, -q.excess);
    if (q.excess > tol) r0 = std::max(r0, q.radius);
  }
  report.fitted_constant = c_fit + max_quad * std::max(1.0, c_fit);
  report.compact_radius = r0;
  report.worst_margin = worst_margin;
  report.compact_radius_found = r0 < 0.99 * max_radius;
  if (!report.compact_radius_found) {
    for (const PointEval& q : excesses)
      if (q.excess > tol) report.violations.push_back({*q.x, q.vertex, -q.excess});
  }
  report.passed = report.compact_radius_found;
  return report;
}

Lemma3Table lemma3_probe(const LyapunovSpec& spec, double alpha, const Vec& xi,
                         const std::vector<double>& radii,
                         const std::vector<Vec>& directions,
                         const QuadratureOptions& opt) {
  spec.validate();
  if (!(spec.p > 0.0) || !(spec.p < alpha))
    throw std::invalid_argument("lemma3_probe: requires 0 < p < alpha");
  LyapunovField field(spec);
  Lemma3Table table;
  table.max_value = -std::numeric_limits<double>::infinity();
  table.min_value = std::numeric_limits<double>::infinity();
  for (double r : radii) {
    for (const Vec& d : directions) {
      Vec x(d.size());
      for (std::size_t i = 0; i < d.size(); ++i) x[i] = r * d[i];
      double val = nonlocal_alpha(field, x, alpha, xi, opt);
      double scaled = std::pow(norm2(x), alpha - spec.p) * val;
      table.rows.push_back({r, d, scaled});
      table.max_value = std::max(table.max_value, scaled);
      table.min_value = std::min(table.min_value, scaled);
    }
  }
  return table;
}

}  // namespace levyq
