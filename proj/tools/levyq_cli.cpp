#include <algorithm>
#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>

#include <CLI11.hpp>

#include "levyq/config.hpp"
#include "levyq/drift_check.hpp"
#include "levyq/ensemble.hpp"
#include "levyq/fclt.hpp"
#include "levyq/hill.hpp"
#include "levyq/queue.hpp"
#include "levyq/sde.hpp"

namespace fs = std::filesystem;
using namespace levyq;

namespace {

struct RunContext {
  ExperimentConfig cfg;
  std::string hash;
  fs::path out_dir;
  std::size_t workers = 1;
  RunManifest manifest;

  std::ofstream open_csv(const std::string& name, const std::string& header) {
    fs::path p = out_dir / name;
    std::ofstream f(p);
    f << "# config_hash=" << hash << "\n" << header << "\n";
    manifest.outputs.push_back(name);
    return f;
  }

  void write_json(const std::string& name, Json j) {
    j["config_hash"] = hash;
    std::ofstream f(out_dir / name);
    f << j.dump(2) << "\n";
    manifest.outputs.push_back(name);
  }
};

std::uint64_t resolve_seed(const ExperimentConfig& cfg, std::uint64_t cli_seed,
                           bool cli_seed_set) {
  if (cfg.seed_from_config) return cfg.seed;  // config wins over CLI and env
  if (cli_seed_set) return cli_seed;
  if (const char* env = std::getenv("LEVYQ_SEED")) return std::strtoull(env, nullptr, 10);
  return 0;
}

int run_verify(RunContext& ctx, std::uint64_t) {
  GeneratorConfig gc;
  gc.params = ctx.cfg.model;
  gc.driver = ctx.cfg.driver;
  gc.lyapunov = ctx.cfg.lyapunov;
  DriftReport rep =
      verify_drift_inequality(gc, inequality_from_string(ctx.cfg.inequality),
                              ctx.cfg.grid);
  Json j;
  j["inequality"] = inequality_to_string(rep.id);
  j["grid_points"] = rep.grid_points;
  j["worst_margin"] = rep.worst_margin;
  j["fitted_constant"] = rep.fitted_constant;
  j["fitted_rate"] = rep.fitted_rate;
  j["compact_radius"] = rep.compact_radius;
  j["compact_radius_found"] = rep.compact_radius_found;
  j["quadrature_budget"] = rep.quadrature_budget;
  j["passed"] = rep.passed;
  j["precondition_note"] = rep.precondition_note;
  j["violations"] = Json::array();
  for (const auto& v : rep.violations) {
    Json jv;
    jv["x"] = v.x;
    jv["vertex"] = v.vertex;
    jv["margin"] = v.margin;
    j["violations"].push_back(jv);
  }
  ctx.write_json("drift_report.json", j);
  std::cout << "inequality " << inequality_to_string(rep.id)
            << (rep.passed ? " PASSED" : " FAILED") << ", violations "
            << rep.violations.size() << "\n";
  return rep.passed ? 0 : 1;
}

int run_sde_sim(RunContext& ctx, std::uint64_t seed) {
  const auto& cfg = ctx.cfg;
  double horizon = cfg.horizons.empty() ? 10.0 : cfg.horizons.back();
  std::ostringstream header;
  header << "path,t";
  for (std::size_t i = 0; i < cfg.model.m; ++i) header << ",x" << i;
  for (std::size_t i = 0; i < cfg.model.m; ++i) header << ",u" << i;
  std::ofstream csv = ctx.open_csv("sde_paths.csv", header.str());
  csv.precision(12);

  std::vector<SdePath> paths(cfg.replications);
  parallel_for(cfg.replications, ctx.workers, [&](std::size_t r) {
    RngStream rng(seed, r);
    paths[r] = simulate_path(cfg.model, cfg.policy, cfg.driver, cfg.x0, horizon,
                             cfg.dt, rng);
  });
  for (std::size_t r = 0; r < paths.size(); ++r)
    for (std::size_t k = 0; k < paths[r].times.size(); ++k) {
      csv << r << "," << paths[r].times[k];
      for (double v : paths[r].states[k]) csv << "," << v;
      for (double v : paths[r].controls[k]) csv << "," << v;
      csv << "\n";
    }
  std::cout << "wrote " << paths.size() << " paths\n";
  return 0;
}

EnsembleConfig make_ensemble(const RunContext& ctx) {
  EnsembleConfig ec;
  ec.params = ctx.cfg.model;
  ec.policy = ctx.cfg.policy;
  ec.driver = ctx.cfg.driver;
  ec.dt = ctx.cfg.dt;
  ec.workers = ctx.workers;
  return ec;
}

int run_tv_rate(RunContext& ctx, std::uint64_t seed) {
  const auto& cfg = ctx.cfg;
  EnsembleConfig ec = make_ensemble(ctx);
  Vec origin(cfg.model.m, 0.0);
  EnsembleSnapshot ref = stationary_sample(ec, origin, cfg.burn_in, cfg.N,
                                           cfg.thinning, cfg.replications, seed + 1);
  std::vector<double> times =
      cfg.horizons.empty() ? std::vector<double>{2, 4, 8, 16, 32} : cfg.horizons;
  TvCurve curve = tv_decay_curve(ec, cfg.x0, times, cfg.N, ref.states[0], seed + 2);

  std::ofstream csv = ctx.open_csv("tv_curve.csv", "t,tv,err");
  csv.precision(12);
  for (std::size_t k = 0; k < curve.times.size(); ++k)
    csv << curve.times[k] << "," << curve.tv[k] << "," << curve.err[k] << "\n";

  Json j;
  j["floor"] = curve.floor;
  bool any_gamma = false;
  for (double g : cfg.model.gamma) any_gamma = any_gamma || g > 0.0;
  try {
    RateFit fit = any_gamma ? fit_exponential_rate(curve) : fit_polynomial_rate(curve);
    j["fit_kind"] = any_gamma ? "exponential" : "polynomial";
    j["exponent"] = fit.exponent;
    j["intercept"] = fit.intercept;
    j["r_squared"] = fit.r_squared;
    j["used_points"] = fit.used_points;
    j["censored"] = fit.censored;
    if (fit.used_points < 3)
      ctx.manifest.warnings.push_back("tv-rate: fewer than 3 usable points");
  } catch (const std::exception& e) {
    j["fit_error"] = e.what();
    ctx.manifest.warnings.push_back(std::string("tv-rate fit failed: ") + e.what());
  }
  if (cfg.N < 1000)
    ctx.manifest.warnings.push_back("tv-rate: N small, wide confidence intervals");
  ctx.write_json("fits.json", j);
  std::cout << "tv curve written, floor " << curve.floor << "\n";
  return 0;
}

int run_tail(RunContext& ctx, std::uint64_t seed) {
  const auto& cfg = ctx.cfg;
  EnsembleConfig ec = make_ensemble(ctx);
  Vec origin(cfg.model.m, 0.0);
  EnsembleSnapshot snap = stationary_sample(ec, origin, cfg.burn_in, cfg.N,
                                            cfg.thinning, cfg.replications, seed + 3);
  std::vector<double> pos;
  for (const Vec& x : snap.states[0]) {
    double s = 0.0;
    for (std::size_t i = 0; i < cfg.model.m; ++i) s += x[i] / cfg.model.mu[i];
    if (s > 0.0) pos.push_back(s);
  }
  {
    std::vector<double> sorted = pos;
    std::sort(sorted.begin(), sorted.end(), std::greater<double>());
    std::ofstream csv = ctx.open_csv("tail.csv", "rank,value");
    csv.precision(12);
    for (std::size_t r = 0; r < sorted.size(); ++r)
      csv << (r + 1) << "," << sorted[r] << "\n";
  }
  Json j;
  j["samples"] = snap.states[0].size();
  j["positive_part_samples"] = pos.size();
  j["overflow_aborts"] = snap.overflow_aborts;
  try {
    HillEstimate h = hill_tail_index(pos);
    j["hill_index"] = h.index;
    j["ci"] = {h.ci_lo, h.ci_hi};
    j["k"] = h.k;
    j["stable_tail"] = h.stable_tail;
    std::cout << "hill index " << h.index << " [" << h.ci_lo << ", " << h.ci_hi
              << "]\n";
  } catch (const std::exception& e) {
    j["hill_error"] = e.what();
  }
  ctx.write_json("tail.json", j);
  return 0;
}

int run_queue_sim(RunContext& ctx, std::uint64_t seed) {
  const auto& cfg = ctx.cfg;
  const QueueParams& qp = *cfg.queue;
  double horizon = cfg.horizons.empty() ? 10.0 : cfg.horizons.back();
  CountVec x0(qp.m);
  for (std::size_t i = 0; i < qp.m; ++i)
    x0[i] = std::llround(qp.rho_i(i) * static_cast<double>(qp.n));
  RngStream rng(seed, 0);
  QueueOptions opt;
  opt.check_invariants = true;
  opt.record_log = cfg.N <= 100000;

  std::ostringstream header;
  header << "t,event,class";
  for (std::size_t i = 0; i < qp.m; ++i) header << ",X" << i;
  for (std::size_t i = 0; i < qp.m; ++i) header << ",Q" << i;
  for (std::size_t i = 0; i < qp.m; ++i) header << ",Z" << i;
  std::ofstream csv = ctx.open_csv("queue_events.csv", header.str());
  csv.precision(12);

  QueueRunResult res = simulate_queue(qp, cfg.policy, x0, horizon, rng, opt);
  for (const auto& ev : res.log) {
    csv << ev.time << "," << ev.type << "," << ev.cls;
    for (Count v : ev.X) csv << "," << v;
    for (Count v : ev.Q) csv << "," << v;
    for (Count v : ev.Z) csv << "," << v;
    csv << "\n";
  }
  Json j;
  j["events"] = res.events;
  j["arrivals"] = res.arrivals;
  j["wait_fraction"] = res.wait_fraction();
  j["final_scaled_state"] = qp.scaled_state(res.final_X);
  ctx.write_json("queue.json", j);
  std::cout << res.events << " events, wait fraction " << res.wait_fraction() << "\n";
  return 0;
}

int run_fclt(RunContext& ctx, std::uint64_t seed) {
  const auto& cfg = ctx.cfg;
  std::vector<Count> ns = cfg.n_list.empty() ? std::vector<Count>{50, 200, 800}
                                             : cfg.n_list;
  double horizon = cfg.horizons.empty() ? 1.0 : cfg.horizons.back();
  FcltReport rep = fclt_compare(*cfg.queue, cfg.policy, ns, cfg.x0, horizon,
                                cfg.replications, cfg.dt, seed, ctx.workers);
  Json j;
  j["xi"] = rep.xi;
  j["horizon"] = rep.horizon;
  j["replications"] = rep.replications;
  j["rows"] = Json::array();
  for (const auto& row : rep.rows) {
    Json jr;
    jr["n"] = row.n;
    jr["ks"] = row.ks;
    jr["median_ks"] = row.median_ks;
    jr["energy"] = row.energy;
    j["rows"].push_back(jr);
    std::cout << "n=" << row.n << " median KS " << row.median_ks << " energy "
              << row.energy << "\n";
  }
  ctx.write_json("fclt.json", j);
  return 0;
}

int run_approx_check(RunContext& ctx, std::uint64_t seed) {
  const auto& cfg = ctx.cfg;
  std::vector<Count> ns = cfg.n_list.empty() ? std::vector<Count>{16, 256, 4096}
                                             : cfg.n_list;
  Json j;
  j["rows"] = Json::array();
  bool all_ok = true;
  for (Count n : ns) {
    QueueParams qp = *cfg.queue;
    qp.n = n;
    ApproxBoundReport rep = approx_bound_check(qp, cfg.policy, cfg.N, seed + n);
    Json jr;
    jr["n"] = n;
    jr["max_deviation"] = rep.max_deviation;
    jr["bound"] = rep.bound;
    jr["samples"] = rep.samples;
    jr["within_bound"] = rep.within_bound;
    j["rows"].push_back(jr);
    all_ok = all_ok && rep.within_bound;
    std::cout << "n=" << n << " max deviation " << rep.max_deviation << " bound "
              << rep.bound << (rep.within_bound ? " ok" : " EXCEEDED") << "\n";
  }
  ctx.write_json("approx.json", j);
  return all_ok ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"simulation and verification toolkit for controlled Levy-driven "
               "SDE limits of multiclass many-server queues"};
  app.require_subcommand(1);

  std::string config_path, out_dir = ".";
  std::uint64_t cli_seed = 0;
  bool cli_seed_set = false;
  std::size_t workers = 1;
  app.add_option("--config", config_path, "configuration file (JSON)")->required();
  app.add_option("--seed", cli_seed, "RNG seed (config value wins when set there)")
      ->each([&](const std::string&) { cli_seed_set = true; });
  app.add_option("--workers", workers, "worker threads (never affects results)");
  app.add_option("--out", out_dir, "output directory");

  std::vector<std::pair<std::string, int (*)(RunContext&, std::uint64_t)>> cmds = {
      {"check-config", nullptr},      {"verify-lyapunov", run_verify},
      {"simulate-sde", run_sde_sim},  {"tv-rate", run_tv_rate},
      {"tail", run_tail},             {"simulate-queue", run_queue_sim},
      {"fclt", run_fclt},             {"approx-check", run_approx_check}};
  for (auto& [name, fn] : cmds) app.add_subcommand(name);

  CLI11_PARSE(app, argc, argv);
  std::string sub = app.get_subcommands().front()->get_name();

  ExperimentConfig cfg;
  try {
    cfg = load_config(config_path);
  } catch (const ConfigError& e) {
    std::cerr << e.what() << "\n";
    return 2;
  }

  if (sub == "check-config") {
    std::cout << cfg.resolved.dump(2) << "\n";
    for (const auto& w : cfg.warnings) std::cout << "warning: " << w << "\n";
    std::cout << "config ok, hash " << config_hash(cfg.resolved) << "\n";
    return 0;
  }

  RunContext ctx;
  ctx.cfg = std::move(cfg);
  ctx.hash = config_hash(ctx.cfg.resolved);
  ctx.out_dir = out_dir;
  ctx.workers = std::max<std::size_t>(workers, 1);
  ctx.manifest.config_hash = ctx.hash;
  ctx.manifest.code_version = code_version();
  ctx.manifest.warnings = ctx.cfg.warnings;
  fs::create_directories(ctx.out_dir);

  std::uint64_t seed = resolve_seed(ctx.cfg, cli_seed, cli_seed_set);
  auto t0 = std::chrono::steady_clock::now();
  int rc = 1;
  try {
    for (auto& [name, fn] : cmds)
      if (name == sub && fn) rc = fn(ctx, seed);
  } catch (const std::exception& e) {
    std::cerr << sub << " failed: " << e.what() << "\n";
    ctx.manifest.warnings.push_back(std::string("error: ") + e.what());
    rc = 3;
  }
  ctx.manifest.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  {
    std::ofstream mf(ctx.out_dir / "manifest.json");
    mf << ctx.manifest.to_json().dump(2) << "\n";
  }
  return rc;
}
