#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "kwc/analysis.hpp"
#include "kwc/stepper.hpp"

namespace kwc {

struct AuditConfig {
  double range_tolerance = 1e-9;
  bool omega = false;  // also run the long-time checks in `audit`
  OmegaOptions omega_options;
};

struct OutputConfig {
  int snapshot_every = 0;  // 0: initial and final state only
};

struct GammaConfig {
  int cells = 64;
  double beta = 1.0;
  std::vector<double> nus{0.1, 0.01, 0.001};
};

struct RefineConfig {
  std::vector<RefinementPair> pairs{{0.1, 0.05}, {0.05, 0.025}, {0.025, 0.0125}};
  double horizon = 1.0;
};

struct AppConfig {
  RunConfig run;
  AuditConfig audit;
  OutputConfig output;
  GammaConfig gamma;
  RefineConfig refine;
};

// A JSON document with sections grid, model, regularizer, time, solver,
// initial, audit, output, gamma and refine. Missing keys take their defaults;
// unknown keys are rejected. Overrides are "dotted.key=value" where value is
// JSON (bare words are taken as strings) and the key must already exist.
// All failures throw ConfigError.
AppConfig parse_config(const std::string& json_text, const std::vector<std::string>& overrides = {});
AppConfig load_config(const std::filesystem::path& path,
                      const std::vector<std::string>& overrides = {});
/// The fully resolved configuration, pretty-printed.
std::string to_json(const AppConfig& config);
std::string default_config_json();

}  // namespace kwc
