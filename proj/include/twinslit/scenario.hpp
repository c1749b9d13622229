#pragma once

#include <optional>
#include <string>

#include <nlohmann/json_fwd.hpp>

#include "twinslit/ensemble.hpp"
#include "twinslit/sqm.hpp"

namespace twinslit {

struct RunManifest {
  Scenario scenario = Scenario::Fig1Entangled;
  PhysicalConfig config;
  SourceSpec source;
  std::size_t n = 10000;  ///< >= 100
  double tol = 1e-9;
  bool selective = false;
  bool strict_regime = false;
  std::string out_dir = ".";
  int workers = 0;
  double bin_width = 0.0;       ///< 0: default 0.1 sigma0
  double peak_fraction = 0.05;  ///< gap detection threshold
  bool dump_trajectories = false;

  void validate() const;  ///< throws ConfigError
};

/// Built-in presets pinning the reference conditions of the three scenarios.
RunManifest scenario_preset(Scenario scenario);

enum class RunMode { Simulate, Predict, Compare };

struct RunOutcome {
  int exit_code = 0;          ///< 0 ok, 3 regime (strict), 4 abort quota, 5 io
  nlohmann::json* summary = nullptr;
};

/// Orchestrates sampling -> integration -> optional selective filter ->
/// histograms -> SQM patterns on the same grid -> divergences, oracle values,
/// regime findings, abort statistics. Writes records.csv, pattern CSVs and
/// summary.json into manifest.out_dir. Returns the process exit code.
int run_scenario(const RunManifest& manifest, RunMode mode, nlohmann::json* summary_out = nullptr);

/// Histogram range wide enough for both the SQM support and the displaced
/// Bohmian arrivals.
std::pair<double, double> arrival_range(const WaveFunctionSpec& spec, const SourceSpec& source);

Scenario scenario_from_string(const std::string& name);  ///< throws ConfigError

}  // namespace twinslit
