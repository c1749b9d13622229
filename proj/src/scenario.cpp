#include "twinslit/scenario.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <filesystem>

#include <nlohmann/json.hpp>

#include "twinslit/errors.hpp"
#include "twinslit/io.hpp"
#include "twinslit/oracles.hpp"

namespace twinslit {

void RunManifest::validate() const {
  config.validate();
  if (n < 100) throw ConfigError("ensemble size must be >= 100");
  if (!(tol >= 1e-12 && tol <= 1e-3)) throw ConfigError("tol must lie in [1e-12, 1e-3]");
  if (!(peak_fraction > 0 && peak_fraction < 1))
    throw ConfigError("peak_fraction must lie in (0, 1)");
  if (bin_width < 0) throw ConfigError("bin_width must be >= 0");
  if (source.y0_spread < 0) throw ConfigError("y0_spread must be >= 0");
  if (out_dir.empty()) throw ConfigError("output directory must be set");
  if (workers < 0) throw ConfigError("workers must be >= 0");
}

RunManifest scenario_preset(Scenario scenario) {
  RunManifest m;
  m.scenario = scenario;
  switch (scenario) {
    case Scenario::Fig1Entangled:
      // Defaults: Y = sigma0, tau(t_D) = 1, pair emitted on the axis.
      m.source.wave_kind = WaveKind::EntangledSymmetric;
      m.source.y0_mean = 0.0;
      m.source.y0_spread = 0.0;
      break;
    case Scenario::Fig2UnentangledSymmetric:
      m.config.slit_offset_Y = 0.05;
      m.source.wave_kind = WaveKind::UnentangledProduct;
      m.selective = true;
      break;
    case Scenario::Fig3UnentangledShifted:
      m.config.slit_offset_Y = 0.05;
      m.config.screen_distance_D = 40.0;  // tau(t_D) = 20
      m.source.wave_kind = WaveKind::UnentangledProduct;
      m.source.y0_mean = 20.0;
      m.source.shift_mode = SourceShift::SplitPair;
      m.selective = true;
      break;
    case Scenario::Custom:
      break;
  }
  return m;
}

Scenario scenario_from_string(const std::string& name) {
  std::string s;
  for (char c : name) s.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
  if (s == "fig1" || s == "fig1-entangled") return Scenario::Fig1Entangled;
  if (s == "fig2" || s == "fig2-unentangled-symmetric") return Scenario::Fig2UnentangledSymmetric;
  if (s == "fig3" || s == "fig3-unentangled-shifted") return Scenario::Fig3UnentangledShifted;
  if (s == "custom") return Scenario::Custom;
  throw ConfigError("unknown scenario: " + name);
}

std::pair<double, double> arrival_range(const WaveFunctionSpec& spec, const SourceSpec& source) {
  const PhysicalConfig& c = spec.config;
  const double scale = std::sqrt(1.0 + spec.kin.tau * spec.kin.tau);
  const double half = (c.slit_offset_Y + 8.0 * c.sigma0) * scale +
                      std::abs(spec.kin.u_y) * spec.kin.t_D;
  // Source displacements travel ballistically: an initial offset s arrives
  // near s * sqrt(1 + tau^2).
  double smin = 0.0, smax = 0.0;
  if (spec.kind == WaveKind::UnentangledProduct) {
    if (source.shift_mode == SourceShift::SplitPair) {
      smin = std::min(0.0, 2.0 * source.y0_mean);
      smax = std::max(0.0, 2.0 * source.y0_mean);
    } else {
      smin = smax = source.y0_mean;
    }
  } else {
    smin = source.y0_mean - 4.0 * source.y0_spread;
    smax = source.y0_mean + 4.0 * source.y0_spread;
  }
  return {-half + std::min(0.0, smin * scale), half + std::max(0.0, smax * scale)};
}

namespace {

nlohmann::json config_to_json(const PhysicalConfig& c) {
  return {{"hbar", c.hbar},
          {"mass", c.mass},
          {"sigma0", c.sigma0},
          {"slit_offset_Y", c.slit_offset_Y},
          {"k_x", c.k_x},
          {"k_y", c.k_y},
          {"screen_distance_D", c.screen_distance_D},
          {"detector_width_Delta", c.detector_width_Delta}};
}

nlohmann::json source_to_json(const SourceSpec& s) {
  return {{"wave_kind", to_string(s.wave_kind)},
          {"y0_mean", s.y0_mean},
          {"y0_spread", s.y0_spread},
          {"rng_seed", s.rng_seed},
          {"shift_mode", s.shift_mode == SourceShift::SplitPair ? "split-pair" : "translate"}};
}

nlohmann::json oracle_values(const WaveFunctionSpec& spec, const SourceSpec& source) {
  const PhysicalConfig& c = spec.config;
  nlohmann::json j;
  j["de_broglie_wavelength"] = de_broglie_wavelength(c);
  j["fringe_spacing"] = fringe_spacing(c, spec.kin.t_D);
  j["com_path_at_t_D"] = com_path(c, source.y0_mean, spec.kin.t_D);
  j["quantum_potential_com_at_0"] = quantum_potential_com(c, source.y0_mean, 0.0);
  if (spec.kin.tau >= 10.0)
    j["empty_interval"] = empty_interval(c, source.y0_mean, spec.kin.t_D);
  return j;
}

}  // namespace

int run_scenario(const RunManifest& manifest, RunMode mode, nlohmann::json* summary_out) {
  manifest.validate();

  const WaveFunctionSpec spec = make_wavefunction_spec(manifest.source.wave_kind, manifest.config);
  const double t_D = spec.kin.t_D;

  nlohmann::json summary;
  summary["schema_version"] = kSchemaVersion;
  summary["scenario"] = to_string(manifest.scenario);
  summary["mode"] = mode == RunMode::Simulate ? "simulate"
                    : mode == RunMode::Predict ? "predict"
                                               : "compare";
  summary["config"] = config_to_json(manifest.config);
  summary["source"] = source_to_json(manifest.source);
  summary["n"] = manifest.n;
  summary["selective"] = manifest.selective;
  summary["oracles"] = oracle_values(spec, manifest.source);
  if (manifest.selective) summary["sqm_alternative_ii_silent"] = true;

  const std::vector<RegimeFinding> findings =
      validate_regime(manifest.config, spec.kin, manifest.source, manifest.scenario);
  summary["regime"] = regime_to_json(findings);
  const bool regime_ok =
      std::all_of(findings.begin(), findings.end(), [](const auto& f) { return f.satisfied; });
  summary["regime_satisfied"] = regime_ok;

  int exit_code = 0;
  try {
    std::filesystem::create_directories(manifest.out_dir);
    const auto out_path = [&](const char* name) {
      return (std::filesystem::path(manifest.out_dir) / name).string();
    };

    if (manifest.strict_regime && !regime_ok) {
      write_json_file(out_path("summary.json"), summary);
      if (summary_out) *summary_out = summary;
      return 3;
    }

    const double bin_width =
        manifest.bin_width > 0 ? manifest.bin_width : 0.1 * manifest.config.sigma0;
    const auto [lo, hi] = arrival_range(spec, manifest.source);
    const Pattern grid = empty_pattern(bin_width, lo, hi);

    // SQM side (predict and compare; cheap enough to include in simulate too).
    const Pattern sqm_marginal = marginal_pattern(spec, t_D, grid.edges);
    write_pattern_csv(out_path("sqm_marginal.csv"), sqm_marginal);
    Pattern sqm_conditional;
    if (manifest.selective) {
      sqm_conditional = conditional_pattern_selective(spec, t_D, grid.edges);
      write_pattern_csv(out_path("sqm_conditional.csv"), sqm_conditional);
    }
    summary["sqm"] = {{"normalization", normalization(spec, t_D)},
                      {"measured_fringe_period", measured_fringe_period(spec, t_D)}};

    if (mode != RunMode::Predict) {
      EnsembleOptions eopts;
      eopts.tol = manifest.tol;
      eopts.workers = manifest.workers;
      EnsembleResult ens;
      try {
        ens = run_ensemble(spec, manifest.source, manifest.n, eopts);
      } catch (const AbortQuotaExceeded& e) {
        summary["error"] = e.what();
        write_json_file(out_path("summary.json"), summary);
        if (summary_out) *summary_out = summary;
        return 4;
      }
      summary["ensemble"] = {{"completed", ens.completed},
                             {"node_aborts", ens.node_aborts},
                             {"step_limit_aborts", ens.step_limit_aborts}};

      const std::vector<DetectionRecord>* kept = &ens.records;
      std::vector<DetectionRecord> selected;
      if (manifest.selective) {
        selected = selective_filter(ens.records);
        kept = &selected;
        summary["ensemble"]["selective_kept"] = selected.size();
      }
      write_records_csv(out_path("records.csv"), *kept);

      double max_sym = 0.0;
      int crossings = 0;
      for (const auto& r : ens.records) {
        if (r.status != TrajectoryStatus::Completed) continue;
        max_sym = std::max(max_sym, std::abs(r.y1_final + r.y2_final));
        crossings += r.sign_changes_y1 + r.sign_changes_y2;
      }
      summary["ensemble"]["max_abs_y1_plus_y2"] = max_sym;
      summary["ensemble"]["axis_crossings"] = crossings;

      const Pattern bqm =
          make_histogram(*kept, PatternProjection::BothPooled, bin_width, lo, hi);
      write_pattern_csv(out_path("bqm_pattern.csv"), bqm);

      if (manifest.selective) {
        const GapInterval gap = measure_gap(bqm, manifest.peak_fraction);
        summary["gap"] = {{"length", gap.length}, {"center", gap.center}};
        if (spec.kin.tau >= 10.0) {
          summary["gap"]["oracle_length"] =
              empty_interval(manifest.config, manifest.source.y0_mean, t_D);
        }
        if (gap.length > 0) {
          // SQM density inside the BQM-empty interval, relative to its peak.
          const Eigen::ArrayXd dens = sqm_conditional.normalized_density();
          const double peak = dens.maxCoeff();
          double max_in_gap = 0.0;
          for (int i = 0; i < sqm_conditional.bins(); ++i) {
            const double c = sqm_conditional.center(i);
            if (std::abs(c - gap.center) <= 0.5 * gap.length)
              max_in_gap = std::max(max_in_gap, dens[i]);
          }
          summary["gap"]["sqm_conditional_max_in_gap_over_peak"] =
              peak > 0 ? max_in_gap / peak : 0.0;
        }
      }

      if (mode == RunMode::Compare) {
        const Pattern& expected = manifest.selective ? sqm_conditional : sqm_marginal;
        summary["divergence"] = divergence_to_json(compare_patterns(bqm, expected));
      }

      if (manifest.dump_trajectories) {
        const std::size_t n_dump = std::min<std::size_t>(manifest.n, 100);
        const auto inits = sample_initial(spec, manifest.source, n_dump);
        IntegratorOptions iopts;
        iopts.tol = manifest.tol;
        std::vector<Trajectory> trajs;
        trajs.reserve(n_dump);
        for (const auto& init : inits)
          trajs.push_back(integrate_trajectory(spec, {init.y1, init.y2, 0.0}, t_D, iopts));
        write_trajectories_csv(out_path("trajectories.csv"), spec, trajs);
      }
    }

    write_json_file(out_path("summary.json"), summary);
  } catch (const IoError& e) {
    summary["error"] = e.what();
    exit_code = 5;
  } catch (const std::filesystem::filesystem_error& e) {
    summary["error"] = e.what();
    exit_code = 5;
  }

  if (summary_out) *summary_out = summary;
  return exit_code;
}

}  // namespace twinslit
