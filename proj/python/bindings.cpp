#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "levyq/config.hpp"
#include "levyq/drift_check.hpp"
#include "levyq/ensemble.hpp"
#include "levyq/fclt.hpp"
#include "levyq/hill.hpp"
#include "levyq/integral_map.hpp"
#include "levyq/stable.hpp"

namespace py = pybind11;
using namespace levyq;

PYBIND11_MODULE(_levyq, mod) {
  mod.doc() = "simulation and verification toolkit for controlled Levy-driven SDEs";

  // ---- model ----
  py::class_<DriftParams>(mod, "DriftParams")
      .def(py::init<>())
      .def_readwrite("m", &DriftParams::m)
      .def_readwrite("ell", &DriftParams::ell)
      .def_readwrite("mu", &DriftParams::mu)
      .def_readwrite("gamma", &DriftParams::gamma)
      .def("beta", &DriftParams::beta)
      .def("validate", &DriftParams::validate);
  mod.def("recentred_params", &recentred_params, py::arg("m"), py::arg("beta"),
          py::arg("mu"), py::arg("gamma"));
  mod.def(
      "drift",
      [](const Vec& x, const Vec& u, const DriftParams& p) {
        return drift(x, SimplexPoint{u}, p);
      },
      py::arg("x"), py::arg("u"), py::arg("params"));

  py::class_<ControlPolicy>(mod, "ControlPolicy").def(py::init<>());
  mod.def("constant_policy", &constant_policy, py::arg("u"));
  mod.def(
      "static_priority_policy",
      [](std::vector<std::size_t> order) {
        ControlPolicy p;
        p.kind = PolicyKind::StaticPriority;
        p.priority = std::move(order);
        return p;
      },
      py::arg("priority"));

  py::enum_<DriverVariant>(mod, "DriverVariant")
      .value("Stable", DriverVariant::Stable)
      .value("BrownianCP", DriverVariant::BrownianCP)
      .value("StableCP", DriverVariant::StableCP);
  py::enum_<RadialLaw>(mod, "RadialLaw")
      .value("PointMass", RadialLaw::PointMass)
      .value("Exponential", RadialLaw::Exponential)
      .value("Pareto", RadialLaw::Pareto);
  py::class_<CPMeasureSpec>(mod, "CPMeasureSpec")
      .def(py::init<>())
      .def_readwrite("nu", &CPMeasureSpec::nu)
      .def_readwrite("direction", &CPMeasureSpec::direction)
      .def_readwrite("radial", &CPMeasureSpec::radial)
      .def_readwrite("radial_param", &CPMeasureSpec::radial_param)
      .def_readwrite("pareto_index", &CPMeasureSpec::pareto_index)
      .def_readwrite("vartheta", &CPMeasureSpec::vartheta);
  py::class_<Driver>(mod, "Driver")
      .def(py::init<>())
      .def_readwrite("variant", &Driver::variant)
      .def_readwrite("alpha", &Driver::alpha)
      .def_readwrite("xi", &Driver::xi)
      .def_readwrite("skew", &Driver::skew)
      .def_readwrite("sigma", &Driver::sigma)
      .def_readwrite("cp", &Driver::cp)
      .def_readwrite("noise_free", &Driver::noise_free);
  py::class_<EffectiveParams>(mod, "EffectiveParams")
      .def_readonly("ell_tilde", &EffectiveParams::ell_tilde)
      .def_readonly("beta_tilde", &EffectiveParams::beta_tilde)
      .def_readonly("theta_c", &EffectiveParams::theta_c)
      .def_readonly("large_jump_mean_finite", &EffectiveParams::large_jump_mean_finite);
  mod.def("effective_params", &effective_params, py::arg("params"), py::arg("cp"));

  // ---- levy sources ----
  mod.def("stable_levy_constant", &stable_levy_constant, py::arg("alpha"));
  mod.def("stable_levy_constant_quadrature", &stable_levy_constant_quadrature,
          py::arg("alpha"), py::arg("rel_tol") = 1e-10);
  mod.def(
      "sample_stable",
      [](double alpha, double scale, std::size_t count, std::uint64_t seed) {
        RngStream rng(seed, 0);
        return sample_stable(StableSpec{alpha, scale}, count, rng);
      },
      py::arg("alpha"), py::arg("scale"), py::arg("count"), py::arg("seed"));

  // ---- lyapunov ----
  py::class_<ScalarDerivs>(mod, "ScalarDerivs")
      .def_readonly("value", &ScalarDerivs::value)
      .def_readonly("d1", &ScalarDerivs::d1)
      .def_readonly("d2", &ScalarDerivs::d2);
  mod.def("psi", &psi, py::arg("t"));
  mod.def("psi_scaled", &psi_scaled, py::arg("t"), py::arg("delta"));
  py::enum_<LyapunovVariant>(mod, "LyapunovVariant")
      .value("Vp", LyapunovVariant::Vp)
      .value("VpScaled", LyapunovVariant::VpScaled);
  py::class_<LyapunovSpec>(mod, "LyapunovSpec")
      .def(py::init<>())
      .def_readwrite("p", &LyapunovSpec::p)
      .def_readwrite("delta", &LyapunovSpec::delta)
      .def_readwrite("variant", &LyapunovSpec::variant)
      .def_readwrite("mu", &LyapunovSpec::mu);
  py::class_<LyapunovEval>(mod, "LyapunovEval")
      .def_readonly("value", &LyapunovEval::value)
      .def_readonly("gradient", &LyapunovEval::gradient)
      .def_readonly("hessian", &LyapunovEval::hessian)
      .def_readonly("base", &LyapunovEval::base);
  mod.def("lyapunov_eval", &lyapunov_eval, py::arg("spec"), py::arg("x"));
  mod.def("default_delta", &default_delta, py::arg("params"));

  // ---- drift verification ----
  py::class_<GridSpec>(mod, "GridSpec")
      .def(py::init<>())
      .def_readwrite("radius_doublings", &GridSpec::radius_doublings)
      .def_readwrite("base_radius", &GridSpec::base_radius)
      .def_readwrite("random_directions", &GridSpec::random_directions)
      .def_readwrite("band_points", &GridSpec::band_points)
      .def_readwrite("seed", &GridSpec::seed);
  py::class_<QuadratureOptions>(mod, "QuadratureOptions")
      .def(py::init<>())
      .def_readwrite("rel_tol", &QuadratureOptions::rel_tol)
      .def_readwrite("inner_r", &QuadratureOptions::inner_r)
      .def_readwrite("outer_R", &QuadratureOptions::outer_R)
      .def_readwrite("max_depth", &QuadratureOptions::max_depth);
  py::class_<GeneratorConfig>(mod, "GeneratorConfig")
      .def(py::init<>())
      .def_readwrite("params", &GeneratorConfig::params)
      .def_readwrite("driver", &GeneratorConfig::driver)
      .def_readwrite("lyapunov", &GeneratorConfig::lyapunov)
      .def_readwrite("quad", &GeneratorConfig::quad);
  py::class_<DriftViolation>(mod, "DriftViolation")
      .def_readonly("x", &DriftViolation::x)
      .def_readonly("vertex", &DriftViolation::vertex)
      .def_readonly("margin", &DriftViolation::margin);
  py::class_<DriftReport>(mod, "DriftReport")
      .def_readonly("grid_points", &DriftReport::grid_points)
      .def_readonly("worst_margin", &DriftReport::worst_margin)
      .def_readonly("fitted_constant", &DriftReport::fitted_constant)
      .def_readonly("fitted_rate", &DriftReport::fitted_rate)
      .def_readonly("compact_radius", &DriftReport::compact_radius)
      .def_readonly("violations", &DriftReport::violations)
      .def_readonly("quadrature_budget", &DriftReport::quadrature_budget)
      .def_readonly("passed", &DriftReport::passed)
      .def_readonly("precondition_note", &DriftReport::precondition_note);
  mod.def(
      "verify_drift_inequality",
      [](const GeneratorConfig& cfg, const std::string& id, const GridSpec& grid) {
        return verify_drift_inequality(cfg, inequality_from_string(id), grid);
      },
      py::arg("config"), py::arg("inequality"), py::arg("grid") = GridSpec{});
  py::class_<Lemma3Row>(mod, "Lemma3Row")
      .def_readonly("radius", &Lemma3Row::radius)
      .def_readonly("direction", &Lemma3Row::direction)
      .def_readonly("scaled_value", &Lemma3Row::scaled_value);
  py::class_<Lemma3Table>(mod, "Lemma3Table")
      .def_readonly("rows", &Lemma3Table::rows)
      .def_readonly("max_value", &Lemma3Table::max_value)
      .def_readonly("min_value", &Lemma3Table::min_value);
  mod.def("lemma3_probe", &lemma3_probe, py::arg("spec"), py::arg("alpha"),
          py::arg("xi"), py::arg("radii"), py::arg("directions"),
          py::arg("quad") = QuadratureOptions{});

  // ---- SDE simulation and ensembles ----
  mod.def(
      "simulate_endpoint",
      [](const DriftParams& p, const ControlPolicy& pol, const Driver& d,
         const Vec& x0, double horizon, double dt, std::uint64_t seed,
         std::uint64_t stream) {
        RngStream rng(seed, stream);
        return simulate_endpoint(p, pol, d, x0, horizon, dt, rng);
      },
      py::arg("params"), py::arg("policy"), py::arg("driver"), py::arg("x0"),
      py::arg("horizon"), py::arg("dt"), py::arg("seed"), py::arg("stream") = 0);
  py::class_<EnsembleConfig>(mod, "EnsembleConfig")
      .def(py::init<>())
      .def_readwrite("params", &EnsembleConfig::params)
      .def_readwrite("policy", &EnsembleConfig::policy)
      .def_readwrite("driver", &EnsembleConfig::driver)
      .def_readwrite("dt", &EnsembleConfig::dt)
      .def_readwrite("workers", &EnsembleConfig::workers);
  py::class_<EnsembleSnapshot>(mod, "EnsembleSnapshot")
      .def_readonly("checkpoint_times", &EnsembleSnapshot::checkpoint_times)
      .def_readonly("states", &EnsembleSnapshot::states)
      .def_readonly("overflow_aborts", &EnsembleSnapshot::overflow_aborts);
  mod.def("stationary_sample", &stationary_sample, py::arg("config"), py::arg("x0"),
          py::arg("burn_in"), py::arg("target_n"), py::arg("thinning"),
          py::arg("replications"), py::arg("seed"));
  mod.def("transient_ensemble", &transient_ensemble, py::arg("config"),
          py::arg("x0"), py::arg("times"), py::arg("n_paths"), py::arg("seed"));

  // ---- ergodicity lab ----
  py::class_<TvCurve>(mod, "TvCurve")
      .def_readonly("times", &TvCurve::times)
      .def_readonly("tv", &TvCurve::tv)
      .def_readonly("err", &TvCurve::err)
      .def_readonly("floor", &TvCurve::floor);
  py::class_<RateFit>(mod, "RateFit")
      .def_readonly("exponent", &RateFit::exponent)
      .def_readonly("intercept", &RateFit::intercept)
      .def_readonly("r_squared", &RateFit::r_squared)
      .def_readonly("used_points", &RateFit::used_points)
      .def_readonly("censored", &RateFit::censored);
  mod.def(
      "empirical_tv",
      [](const std::vector<Vec>& a, const std::vector<Vec>& b) {
        TvEstimate est = empirical_tv(a, b);
        return py::make_tuple(est.tv, est.error);
      },
      py::arg("a"), py::arg("b"));
  mod.def("tv_decay_curve", &tv_decay_curve, py::arg("config"), py::arg("x0"),
          py::arg("times"), py::arg("n_paths"), py::arg("stationary_reference"),
          py::arg("seed"));
  mod.def("fit_polynomial_rate", &fit_polynomial_rate, py::arg("curve"));
  mod.def("fit_exponential_rate", &fit_exponential_rate, py::arg("curve"));
  py::class_<HillEstimate>(mod, "HillEstimate")
      .def_readonly("index", &HillEstimate::index)
      .def_readonly("ci_lo", &HillEstimate::ci_lo)
      .def_readonly("ci_hi", &HillEstimate::ci_hi)
      .def_readonly("k", &HillEstimate::k)
      .def_readonly("stable_tail", &HillEstimate::stable_tail);
  mod.def("hill_tail_index", &hill_tail_index, py::arg("values"), py::arg("k") = 0,
          py::arg("boot_seed") = 7777, py::arg("boot_reps") = 200);

  // ---- queue ----
  py::enum_<RenewalFamily>(mod, "RenewalFamily")
      .value("Exponential", RenewalFamily::Exponential)
      .value("Pareto", RenewalFamily::Pareto);
  py::class_<QueueParams>(mod, "QueueParams")
      .def(py::init<>())
      .def_readwrite("m", &QueueParams::m)
      .def_readwrite("n", &QueueParams::n)
      .def_readwrite("lambda_", &QueueParams::lambda)
      .def_readwrite("mu", &QueueParams::mu)
      .def_readwrite("gamma", &QueueParams::gamma)
      .def_readwrite("ell", &QueueParams::ell)
      .def_readwrite("alpha", &QueueParams::alpha)
      .def_readwrite("family", &QueueParams::family)
      .def("arrival_rate", &QueueParams::arrival_rate)
      .def("scale", &QueueParams::scale)
      .def("scaled_state", &QueueParams::scaled_state)
      .def("validate", &QueueParams::validate);
  py::class_<ScheduleResult>(mod, "ScheduleResult")
      .def_readonly("Q", &ScheduleResult::Q)
      .def_readonly("Z", &ScheduleResult::Z);
  mod.def("schedule_action", &schedule_action, py::arg("x"), py::arg("n"),
          py::arg("u"));
  mod.def(
      "simulate_queue",
      [](const QueueParams& qp, const ControlPolicy& pol, const CountVec& x0,
         double horizon, std::uint64_t seed, double stats_start) {
        RngStream rng(seed, 0);
        QueueOptions opt;
        opt.stats_start = stats_start;
        QueueRunResult res = simulate_queue(qp, pol, x0, horizon, rng, opt);
        py::dict out;
        out["events"] = res.events;
        out["final_X"] = res.final_X;
        out["wait_fraction"] = res.wait_fraction();
        return out;
      },
      py::arg("params"), py::arg("policy"), py::arg("x0"), py::arg("horizon"),
      py::arg("seed"), py::arg("stats_start") = 0.0);
  mod.def("calibrate_xi", &calibrate_xi, py::arg("params"), py::arg("cls"),
          py::arg("reps") = 4000, py::arg("n_cal") = 0, py::arg("seed") = 424242);
  py::class_<FcltRow>(mod, "FcltRow")
      .def_readonly("n", &FcltRow::n)
      .def_readonly("ks", &FcltRow::ks)
      .def_readonly("energy", &FcltRow::energy)
      .def_readonly("median_ks", &FcltRow::median_ks);
  py::class_<FcltReport>(mod, "FcltReport")
      .def_readonly("rows", &FcltReport::rows)
      .def_readonly("xi", &FcltReport::xi)
      .def_readonly("horizon", &FcltReport::horizon)
      .def_readonly("replications", &FcltReport::replications);
  mod.def("fclt_compare", &fclt_compare, py::arg("base"), py::arg("policy"),
          py::arg("n_list"), py::arg("x0"), py::arg("horizon"),
          py::arg("replications"), py::arg("dt"), py::arg("seed"),
          py::arg("workers") = 1);

  // ---- integral map ----
  py::class_<PiecewisePath>(mod, "PiecewisePath")
      .def(py::init<>())
      .def_readwrite("x0", &PiecewisePath::x0)
      .def_readwrite("jump_times", &PiecewisePath::jump_times)
      .def_readwrite("jumps", &PiecewisePath::jumps);
  mod.def(
      "integral_map",
      [](const PiecewisePath& x, const std::function<Vec(const Vec&)>& h,
         double horizon, double dt) {
        SdePath p = integral_map(x, h, horizon, dt);
        return py::make_tuple(p.times, p.states);
      },
      py::arg("path"), py::arg("h"), py::arg("horizon"), py::arg("dt"));

  // ---- config ----
  mod.def(
      "parse_config",
      [](const std::string& text) {
        ExperimentConfig cfg = parse_config(Json::parse(text));
        py::dict out;
        out["kind"] = cfg.kind;
        out["seed"] = cfg.seed;
        out["warnings"] = cfg.warnings;
        out["hash"] = config_hash(cfg.resolved);
        out["resolved"] = cfg.resolved.dump(2);
        return out;
      },
      py::arg("json_text"));

  py::register_exception<ConfigError>(mod, "ConfigError");
  py::register_exception<QuadratureError>(mod, "QuadratureError");
  mod.attr("__version__") = code_version();
}
