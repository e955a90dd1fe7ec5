#include "levyq/config.hpp"

#include <fstream>
#include <sstream>

namespace levyq {

namespace {

struct Collector {
  std::vector<std::string> errors;

  void fail(const std::string& path, const std::string& what) {
    errors.push_back(path + ": " + what);
  }
  bool ok() const { return errors.empty(); }
};

Vec get_vec(const Json& j, const std::string& key, const std::string& path,
            std::size_t m, Collector& errs) {
  if (!j.contains(key)) {
    errs.fail(path + "." + key, "missing");
    return Vec(m, 0.0);
  }
  if (!j[key].is_array()) {
    errs.fail(path + "." + key, "must be an array of numbers");
    return Vec(m, 0.0);
  }
  Vec v = j[key].get<Vec>();
  if (m != 0 && v.size() != m)
    errs.fail(path + "." + key, "expected " + std::to_string(m) + " entries");
  return v;
}

DriftParams parse_model(const Json& j, Collector& errs) {
  DriftParams p;
  if (!j.is_object()) {
    errs.fail("model", "missing or not an object");
    return p;
  }
  p.m = j.value("m", 0u);
  if (p.m == 0) errs.fail("model.m", "must be a positive integer");
  p.mu = get_vec(j, "mu", "model", p.m, errs);
  p.gamma = j.contains("gamma") ? get_vec(j, "gamma", "model", p.m, errs)
                                : Vec(p.m, 0.0);
  if (j.contains("ell")) {
    p.ell = get_vec(j, "ell", "model", p.m, errs);
  } else if (j.contains("beta")) {
    // recentred shorthand: ell_i = -(beta/m) mu_i
    double beta = j["beta"].get<double>();
    p.ell.resize(p.m);
    for (std::size_t i = 0; i < p.m; ++i)
      p.ell[i] = -beta / static_cast<double>(p.m) * (i < p.mu.size() ? p.mu[i] : 1.0);
  } else {
    errs.fail("model", "needs either ell or beta");
    p.ell.assign(p.m, 0.0);
  }
  for (std::size_t i = 0; i < p.mu.size(); ++i)
    if (!(p.mu[i] > 0.0)) errs.fail("model.mu", "entries must be positive");
  for (std::size_t i = 0; i < p.gamma.size(); ++i)
    if (p.gamma[i] < 0.0) errs.fail("model.gamma", "entries must be nonnegative");
  return p;
}

CPMeasureSpec parse_cp(const Json& j, std::size_t m, Collector& errs) {
  CPMeasureSpec cp;
  cp.nu = j.value("nu", 0.0);
  if (cp.nu < 0.0) errs.fail("driver.cp.nu", "must be nonnegative");
  if (cp.nu > 0.0) cp.direction = get_vec(j, "direction", "driver.cp", m, errs);
  std::string radial = j.value("radial", "point");
  if (radial == "point") cp.radial = RadialLaw::PointMass;
  else if (radial == "exponential") cp.radial = RadialLaw::Exponential;
  else if (radial == "pareto") cp.radial = RadialLaw::Pareto;
  else errs.fail("driver.cp.radial", "must be point|exponential|pareto");
  cp.radial_param = j.value("radial_param", 1.0);
  cp.pareto_index = j.value("pareto_index", 2.5);
  if (j.contains("vartheta")) cp.vartheta = get_vec(j, "vartheta", "driver.cp", m, errs);
  return cp;
}

Driver parse_driver(const Json& j, std::size_t m, Collector& errs) {
  Driver d;
  if (!j.is_object()) {
    errs.fail("driver", "missing or not an object");
    return d;
  }
  std::string variant = j.value("variant", "stable");
  if (variant == "stable") d.variant = DriverVariant::Stable;
  else if (variant == "brownian_cp") d.variant = DriverVariant::BrownianCP;
  else if (variant == "stable_cp") d.variant = DriverVariant::StableCP;
  else errs.fail("driver.variant", "must be stable|brownian_cp|stable_cp");
  d.alpha = j.value("alpha", 1.5);
  d.noise_free = j.value("noise_free", false);
  if (d.variant != DriverVariant::BrownianCP) {
    if (!(d.alpha > 1.0 && d.alpha < 2.0))
      errs.fail("driver.alpha", "must lie in (1,2)");
    d.xi = get_vec(j, "xi", "driver", m, errs);
    for (double v : d.xi)
      if (!(v > 0.0)) errs.fail("driver.xi", "entries must be positive");
  }
  if (d.variant == DriverVariant::BrownianCP)
    d.sigma = get_vec(j, "sigma", "driver", m, errs);
  if (d.variant != DriverVariant::Stable && j.contains("cp"))
    d.cp = parse_cp(j["cp"], m, errs);
  return d;
}

ControlPolicy parse_policy(const Json& j, std::size_t m, Collector& errs) {
  ControlPolicy p;
  if (!j.is_object()) {
    errs.fail("policy", "missing or not an object");
    return p;
  }
  std::string kind = j.value("kind", "constant");
  if (kind == "constant") {
    p.kind = PolicyKind::Constant;
    p.constant.u = get_vec(j, "u", "policy", m, errs);
    double s = 0.0;
    bool neg = false;
    for (double v : p.constant.u) {
      s += v;
      if (v < 0.0) neg = true;
    }
    if (neg || std::fabs(s - 1.0) > 1e-9)
      errs.fail("policy.u", "must be a point of the simplex");
  } else if (kind == "static_priority") {
    p.kind = PolicyKind::StaticPriority;
    if (!j.contains("priority") || !j["priority"].is_array()) {
      errs.fail("policy.priority", "missing permutation");
    } else {
      p.priority = j["priority"].get<std::vector<std::size_t>>();
      std::vector<bool> seen(m, false);
      bool bad = p.priority.size() != m;
      for (std::size_t v : p.priority) {
        if (v >= m || seen[v]) bad = true;
        else seen[v] = true;
      }
      if (bad) errs.fail("policy.priority", "must be a permutation of 0..m-1");
    }
  } else {
    errs.fail("policy.kind", "must be constant|static_priority");
  }
  p.lipschitz_declared = j.value("lipschitz", true);
  return p;
}

QueueParams parse_queue(const Json& j, const DriftParams& model, double alpha,
                        Collector& errs) {
  QueueParams q;
  q.m = model.m;
  q.mu = model.mu;
  q.gamma = model.gamma;
  q.ell = model.ell;
  q.alpha = j.value("alpha", alpha);
  q.n = j.value("n", 100);
  if (q.n <= 0) errs.fail("experiment.queue.n", "must be positive");
  q.lambda = get_vec(j, "lambda", "experiment.queue", q.m, errs);
  std::string fam = j.value("family", "pareto");
  if (fam == "pareto") q.family = RenewalFamily::Pareto;
  else if (fam == "exponential") q.family = RenewalFamily::Exponential;
  else if (fam == "deterministic") q.family = RenewalFamily::Deterministic;
  else errs.fail("experiment.queue.family", "must be pareto|exponential|deterministic");
  bool any = false;
  for (double v : q.lambda) any = any || v != 0.0;
  if (any && q.lambda.size() == q.m) {
    double rho = 0.0;
    for (std::size_t i = 0; i < q.m; ++i) rho += q.lambda[i] / q.mu[i];
    if (std::fabs(rho - 1.0) > 1e-9)
      errs.fail("experiment.queue.lambda",
                "regime requires <e, lambda/mu> = 1 (got " + std::to_string(rho) + ")");
  }
  return q;
}

}  // namespace

ExperimentConfig parse_config(const Json& j) {
  Collector errs;
  ExperimentConfig cfg;
  if (!j.is_object()) throw ConfigError({"top level: not a JSON object"});

  cfg.model = parse_model(j.value("model", Json()), errs);
  std::size_t m = cfg.model.m;
  cfg.driver = parse_driver(j.value("driver", Json()), m, errs);
  cfg.policy = parse_policy(j.value("policy", Json()), m, errs);

  // lyapunov section
  Json jl = j.value("lyapunov", Json::object());
  cfg.lyapunov.p = jl.value("p", 1.2);
  cfg.lyapunov.mu = cfg.model.mu;
  std::string lv = jl.value("variant", "vp");
  if (lv == "vp") cfg.lyapunov.variant = LyapunovVariant::Vp;
  else if (lv == "vp_scaled") cfg.lyapunov.variant = LyapunovVariant::VpScaled;
  else errs.fail("lyapunov.variant", "must be vp|vp_scaled");
  if (!(cfg.lyapunov.p > 0.0)) errs.fail("lyapunov.p", "must be positive");
  double beta = m && cfg.model.mu.size() == m ? cfg.model.beta() : 0.0;
  if (!jl.contains("delta") || (jl["delta"].is_string() && jl["delta"] == "auto")) {
    cfg.delta_was_auto = true;
    if (beta > 0.0 && errs.ok()) {
      cfg.lyapunov.delta = default_delta(cfg.model);
    } else if (errs.ok()) {
      errs.fail("lyapunov.delta", "auto requires positive spare capacity beta");
    }
  } else if (jl["delta"].is_number()) {
    cfg.lyapunov.delta = jl["delta"].get<double>();
    if (!(cfg.lyapunov.delta > 0.0) || cfg.lyapunov.delta > 1.0) {
      errs.fail("lyapunov.delta", "must lie in (0,1]");
    } else if (errs.ok()) {
      DeltaAdmissibility adm = check_delta(cfg.model, cfg.lyapunov.delta);
      if (!adm.el1a_ok)
        errs.fail("lyapunov.delta", "violates the patience admissibility bound");
      if (beta > 0.0 && !adm.et2a_ok)
        errs.fail("lyapunov.delta",
                  "violates the safety-staffing bound delta < " +
                      std::to_string(adm.et2a_bound));
    }
  } else {
    errs.fail("lyapunov.delta", "must be a number or \"auto\"");
  }

  // experiment section
  Json je = j.value("experiment", Json::object());
  cfg.kind = je.value("kind", "sde-sim");
  static const std::vector<std::string> kinds = {
      "verify", "sde-sim", "tv-rate", "tail", "queue-sim", "fclt", "approx-check"};
  if (std::find(kinds.begin(), kinds.end(), cfg.kind) == kinds.end())
    errs.fail("experiment.kind", "unknown kind '" + cfg.kind + "'");
  if (je.contains("horizons")) cfg.horizons = je["horizons"].get<std::vector<double>>();
  cfg.N = je.value("N", 1000u);
  cfg.dt = je.value("dt", 1e-2);
  cfg.burn_in = je.value("burn_in", 100.0);
  cfg.thinning = je.value("thinning", 5.0);
  cfg.replications = je.value("replications", 100u);
  cfg.inequality = je.value("inequality", "thm2_foster");
  if (cfg.kind == "verify") {
    try {
      inequality_from_string(cfg.inequality);
    } catch (const std::exception& e) {
      errs.fail("experiment.inequality", e.what());
    }
  }
  if (!(cfg.dt > 0.0)) errs.fail("experiment.dt", "must be positive");
  if (je.contains("x0")) cfg.x0 = get_vec(je, "x0", "experiment", m, errs);
  else cfg.x0.assign(m, 0.0);
  if (je.contains("grid")) {
    const Json& jg = je["grid"];
    cfg.grid.radius_doublings = jg.value("radius_doublings", cfg.grid.radius_doublings);
    cfg.grid.base_radius = jg.value("base_radius", cfg.grid.base_radius);
    cfg.grid.random_directions =
        jg.value("random_directions", cfg.grid.random_directions);
    cfg.grid.band_points = jg.value("band_points", cfg.grid.band_points);
    cfg.grid.seed = jg.value("seed", cfg.grid.seed);
  }
  bool needs_queue = cfg.kind == "queue-sim" || cfg.kind == "fclt" ||
                     cfg.kind == "approx-check";
  if (je.contains("queue")) {
    cfg.queue = parse_queue(je["queue"], cfg.model, cfg.driver.alpha, errs);
  } else if (needs_queue) {
    errs.fail("experiment.queue", "required for kind '" + cfg.kind + "'");
  }
  if (je.contains("n_list")) cfg.n_list = je["n_list"].get<std::vector<Count>>();

  if (j.contains("seed")) {
    cfg.seed = j["seed"].get<std::uint64_t>();
    cfg.seed_from_config = true;
  }

  if (!errs.ok()) throw ConfigError(std::move(errs.errors));

  // advisory warnings that do not block execution
  if (cfg.model.beta() <= 0.0 && cfg.kind != "queue-sim" && cfg.kind != "approx-check")
    cfg.warnings.push_back("spare capacity beta <= 0: no stability guarantee");
  if (cfg.N < 1000 && (cfg.kind == "tv-rate" || cfg.kind == "tail"))
    cfg.warnings.push_back("N < 1000: confidence intervals will be wide");

  // canonical resolved echo
  Json r = j;
  r["lyapunov"]["p"] = cfg.lyapunov.p;
  r["lyapunov"]["delta"] = cfg.lyapunov.delta;
  r["lyapunov"]["variant"] = lv;
  r["experiment"]["kind"] = cfg.kind;
  r["experiment"]["N"] = cfg.N;
  r["experiment"]["dt"] = cfg.dt;
  if (!cfg.seed_from_config) r["seed"] = nullptr;
  cfg.resolved = std::move(r);
  return cfg;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError({"file not readable: " + path});
  Json j;
  try {
    in >> j;
  } catch (const std::exception& e) {
    throw ConfigError({std::string("JSON parse error: ") + e.what()});
  }
  return parse_config(j);
}

std::string config_hash(const Json& resolved) {
  std::string dump = resolved.dump();
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : dump) {
    h ^= c;
    h *= 1099511628211ull;
  }
  std::ostringstream os;
  os << std::hex << h;
  return os.str();
}

Json RunManifest::to_json() const {
  Json j;
  j["config_hash"] = config_hash;
  j["code_version"] = code_version;
  j["wall_seconds"] = wall_seconds;
  j["outputs"] = outputs;
  j["warnings"] = warnings;
  return j;
}

}  // namespace levyq
