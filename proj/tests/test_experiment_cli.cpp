#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "levyq/config.hpp"

using namespace levyq;

namespace {

Json base_config() {
  return Json{
      {"model",
       {{"m", 2}, {"mu", {1.0, 1.0}}, {"gamma", {0.0, 0.0}}, {"beta", 1.0}}},
      {"driver", {{"variant", "stable"}, {"alpha", 1.5}, {"xi", {1.0, 1.0}}}},
      {"policy", {{"kind", "constant"}, {"u", {0.5, 0.5}}}},
      {"lyapunov", {{"p", 1.2}, {"delta", "auto"}}},
      {"experiment", {{"kind", "verify"}, {"inequality", "thm2_foster"}}},
  };
}

bool mentions(const ConfigError& e, const std::string& needle) {
  for (const auto& msg : e.errors)
    if (msg.find(needle) != std::string::npos) return true;
  return false;
}

}  // namespace

TEST_CASE("valid config resolves with the automatic delta") {
  ExperimentConfig cfg = parse_config(base_config());
  CHECK(cfg.model.m == 2);
  CHECK(cfg.model.beta() == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(cfg.delta_was_auto);
  // 0.9 x beta/(2m(2beta+m)) with m=2, beta=1
  CHECK(cfg.lyapunov.delta == doctest::Approx(0.9 / 16.0).epsilon(1e-12));
  CHECK(cfg.kind == "verify");
  CHECK(!cfg.seed_from_config);
  CHECK(cfg.warnings.empty());
}

TEST_CASE("beta shorthand matches an explicit recentred ell") {
  Json ja = base_config();
  Json jb = base_config();
  jb["model"].erase("beta");
  jb["model"]["ell"] = {-0.5, -0.5};
  ExperimentConfig a = parse_config(ja);
  ExperimentConfig b = parse_config(jb);
  REQUIRE(a.model.ell.size() == 2);
  for (std::size_t i = 0; i < 2; ++i)
    CHECK(a.model.ell[i] == doctest::Approx(b.model.ell[i]).epsilon(1e-12));
}

TEST_CASE("inadmissible delta is rejected with a field path") {
  Json j = base_config();
  j["lyapunov"]["delta"] = 0.1;  // bound is 1/16 for m=2, beta=1
  try {
    parse_config(j);
    FAIL("expected ConfigError");
  } catch (const ConfigError& e) {
    CHECK(mentions(e, "lyapunov.delta"));
    CHECK(mentions(e, "0.0625"));
  }
}

TEST_CASE("schema violations are collected with field paths") {
  Json j = base_config();
  j["model"]["mu"] = {1.0, -1.0};
  j["policy"]["u"] = {0.7, 0.7};
  j["experiment"]["kind"] = "frobnicate";
  try {
    parse_config(j);
    FAIL("expected ConfigError");
  } catch (const ConfigError& e) {
    CHECK(e.errors.size() >= 3);
    CHECK(mentions(e, "model.mu"));
    CHECK(mentions(e, "policy.u"));
    CHECK(mentions(e, "experiment.kind"));
  }
}

TEST_CASE("queue section is validated") {
  Json j = base_config();
  j["experiment"]["kind"] = "queue-sim";
  // missing queue section
  CHECK_THROWS_AS(parse_config(j), ConfigError);

  j["experiment"]["queue"] = {{"n", 100}, {"lambda", {0.7, 0.5}}};  // rho = 1.2
  try {
    parse_config(j);
    FAIL("expected ConfigError");
  } catch (const ConfigError& e) {
    CHECK(mentions(e, "experiment.queue.lambda"));
  }

  j["experiment"]["queue"]["lambda"] = {0.5, 0.5};
  ExperimentConfig cfg = parse_config(j);
  REQUIRE(cfg.queue.has_value());
  CHECK(cfg.queue->n == 100);
  CHECK(cfg.queue->alpha == doctest::Approx(1.5));
  CHECK_NOTHROW(cfg.queue->validate());
}

TEST_CASE("static priority policy must be a permutation") {
  Json j = base_config();
  j["policy"] = {{"kind", "static_priority"}, {"priority", {0, 0}}};
  try {
    parse_config(j);
    FAIL("expected ConfigError");
  } catch (const ConfigError& e) {
    CHECK(mentions(e, "policy.priority"));
  }
  j["policy"]["priority"] = {1, 0};
  CHECK(parse_config(j).policy.kind == PolicyKind::StaticPriority);
}

TEST_CASE("seed precedence flag and warnings") {
  Json j = base_config();
  j["seed"] = 12345;
  ExperimentConfig cfg = parse_config(j);
  CHECK(cfg.seed_from_config);
  CHECK(cfg.seed == 12345);

  Json w = base_config();
  w["model"]["beta"] = -0.5;
  w["lyapunov"]["delta"] = 0.05;  // auto delta needs beta > 0
  ExperimentConfig neg = parse_config(w);
  REQUIRE(!neg.warnings.empty());
  CHECK(neg.warnings[0].find("beta") != std::string::npos);
}

TEST_CASE("negative beta blocks the automatic delta") {
  Json j = base_config();
  j["model"]["beta"] = -1.0;
  j["lyapunov"].erase("delta");
  try {
    parse_config(j);
    FAIL("expected ConfigError");
  } catch (const ConfigError& e) {
    CHECK(mentions(e, "lyapunov.delta"));
  }
}

TEST_CASE("config hash is stable and content sensitive") {
  ExperimentConfig a = parse_config(base_config());
  ExperimentConfig b = parse_config(base_config());
  CHECK(config_hash(a.resolved) == config_hash(b.resolved));

  Json j = base_config();
  j["experiment"]["N"] = 2000;
  ExperimentConfig c = parse_config(j);
  CHECK(config_hash(c.resolved) != config_hash(a.resolved));
}

TEST_CASE("manifest serialization") {
  RunManifest man;
  man.config_hash = "deadbeef";
  man.code_version = code_version();
  man.wall_seconds = 1.25;
  man.outputs = {"tv_curve.csv", "fits.json"};
  Json j = man.to_json();
  CHECK(j["config_hash"] == "deadbeef");
  CHECK(j["code_version"] == "0.1.0");
  CHECK(j["outputs"].size() == 2);
}

TEST_CASE("unreadable file and malformed JSON raise ConfigError") {
  CHECK_THROWS_AS(load_config("/nonexistent/path.json"), ConfigError);
}
