#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "levyq/drift_check.hpp"
#include "levyq/model.hpp"
#include "levyq/queue.hpp"

namespace levyq {

using Json = nlohmann::json;

// Fully resolved experiment description: model + driver + policy + lyapunov +
// experiment sections, with "auto" delta already replaced by the default rule
// and all cross-field invariants checked.
struct ExperimentConfig {
  DriftParams model;
  Driver driver;
  ControlPolicy policy;
  LyapunovSpec lyapunov;
  bool delta_was_auto = false;

  std::string kind;  // verify | sde-sim | tv-rate | tail | queue-sim | fclt | approx-check
  std::vector<double> horizons;
  std::size_t N = 1000;
  double dt = 1e-2;
  double burn_in = 100.0;
  double thinning = 5.0;
  std::size_t replications = 100;
  GridSpec grid;
  std::string inequality = "thm2_foster";
  Vec x0;

  std::optional<QueueParams> queue;
  std::vector<Count> n_list;

  std::uint64_t seed = 0;
  bool seed_from_config = false;
  std::vector<std::string> warnings;

  Json resolved;  // canonical echo of the resolved configuration
};

struct ConfigError : std::runtime_error {
  explicit ConfigError(std::vector<std::string> errs)
      : std::runtime_error(join(errs)), errors(std::move(errs)) {}
  std::vector<std::string> errors;

  static std::string join(const std::vector<std::string>& errs) {
    std::string s = "configuration invalid:";
    for (const auto& e : errs) s += "\n  - " + e;
    return s;
  }
};

// Parse + validate.  Collects every violation (with its field path) before
// throwing ConfigError.
ExperimentConfig parse_config(const Json& j);
ExperimentConfig load_config(const std::string& path);

// Stable content hash (FNV-1a over the canonical dump) used to stamp every
// artifact file.
std::string config_hash(const Json& resolved);

struct RunManifest {
  std::string config_hash;
  std::string code_version;
  double wall_seconds = 0.0;
  std::vector<std::string> outputs;
  std::vector<std::string> warnings;

  Json to_json() const;
};

inline const char* code_version() { return "0.1.0"; }

}  // namespace levyq
