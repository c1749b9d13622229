#include <cstdlib>
#include <iostream>
#include <string>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "twinslit/errors.hpp"
#include "twinslit/io.hpp"
#include "twinslit/oracles.hpp"
#include "twinslit/scenario.hpp"

namespace {

constexpr const char* kBuildVersion = "0.1.0";

twinslit::WaveKind wave_from_string(const std::string& name) {
  if (name == "entangled-symmetric") return twinslit::WaveKind::EntangledSymmetric;
  if (name == "entangled-antisymmetric") return twinslit::WaveKind::EntangledAntisymmetric;
  if (name == "unentangled") return twinslit::WaveKind::UnentangledProduct;
  throw twinslit::ConfigError("unknown wave kind: " + name);
}

struct CliState {
  std::string scenario = "fig1";
  std::string config_file;
  std::string wave;
  std::uint64_t seed = 0;
  bool seed_set = false;
  std::size_t n = 0;
  bool selective = false;
  bool selective_set = false;
  bool strict_regime = false;
  std::string out_dir;
  double tol = 0.0;
  int workers = -1;
  double y0_mean = 0.0;
  bool y0_mean_set = false;
  double y0_spread = 0.0;
  bool y0_spread_set = false;
  bool split_pair = false;
  double bin_width = 0.0;
  double peak_fraction = 0.0;
  bool dump_trajectories = false;
};

void add_common(CLI::App* cmd, CliState& s) {
  cmd->add_option("--scenario", s.scenario, "fig1 | fig2 | fig3 | custom");
  cmd->add_option("--config", s.config_file, "JSON physical-config file");
  cmd->add_option("--wave", s.wave,
                  "entangled-symmetric | entangled-antisymmetric | unentangled");
  cmd->add_option("--seed", s.seed, "master RNG seed")->each([&](const std::string&) {
    s.seed_set = true;
  });
  cmd->add_option("--n", s.n, "ensemble size (>= 100)");
  cmd->add_flag("--selective,!--no-selective", s.selective, "selective detection filter")
      ->each([&](const std::string&) { s.selective_set = true; });
  cmd->add_flag("--strict-regime", s.strict_regime, "fail (exit 3) on regime violations");
  cmd->add_option("--out", s.out_dir, "output directory (default: $TWINSLIT_OUT or .)");
  cmd->add_option("--tol", s.tol, "integrator relative tolerance");
  cmd->add_option("--workers", s.workers, "worker threads (0 = hardware)");
  cmd->add_option("--y0-mean", s.y0_mean, "source center offset")->each([&](const std::string&) {
    s.y0_mean_set = true;
  });
  cmd->add_option("--y0-spread", s.y0_spread, "source center spread")
      ->each([&](const std::string&) { s.y0_spread_set = true; });
  cmd->add_flag("--split-pair", s.split_pair,
                "realize y0-mean by displacing particle 2 only (unentangled)");
  cmd->add_option("--bin-width", s.bin_width, "histogram bin width (default 0.1 sigma0)");
  cmd->add_option("--peak-fraction", s.peak_fraction, "gap-detection threshold (default 0.05)");
  cmd->add_flag("--dump-trajectories", s.dump_trajectories, "write sampled trajectory paths");
}

twinslit::RunManifest build_manifest(const CliState& s) {
  twinslit::RunManifest m = twinslit::scenario_preset(twinslit::scenario_from_string(s.scenario));
  if (!s.config_file.empty()) {
    m.config = twinslit::load_config_file(s.config_file);
    m.scenario = twinslit::Scenario::Custom;
  }
  if (!s.wave.empty()) m.source.wave_kind = wave_from_string(s.wave);
  if (s.seed_set) m.source.rng_seed = s.seed;
  if (s.n > 0) m.n = s.n;
  if (s.selective_set) m.selective = s.selective;
  m.strict_regime = s.strict_regime;
  if (!s.out_dir.empty()) {
    m.out_dir = s.out_dir;
  } else if (const char* env = std::getenv("TWINSLIT_OUT")) {
    m.out_dir = env;
  }
  if (s.tol > 0) m.tol = s.tol;
  if (s.workers >= 0) m.workers = s.workers;
  if (s.y0_mean_set) m.source.y0_mean = s.y0_mean;
  if (s.y0_spread_set) m.source.y0_spread = s.y0_spread;
  if (s.split_pair) m.source.shift_mode = twinslit::SourceShift::SplitPair;
  if (s.bin_width > 0) m.bin_width = s.bin_width;
  if (s.peak_fraction > 0) m.peak_fraction = s.peak_fraction;
  m.dump_trajectories = s.dump_trajectories;
  return m;
}

int run_mode(const CliState& s, twinslit::RunMode mode) {
  const twinslit::RunManifest manifest = build_manifest(s);
  nlohmann::json summary;
  const int code = twinslit::run_scenario(manifest, mode, &summary);
  std::cout << summary.dump(2) << '\n';
  return code;
}

int run_validate(const CliState& s) {
  const twinslit::RunManifest m = build_manifest(s);
  const twinslit::WaveFunctionSpec spec =
      twinslit::make_wavefunction_spec(m.source.wave_kind, m.config);
  const auto findings = twinslit::validate_regime(m.config, spec.kin, m.source, m.scenario);
  std::cout << twinslit::regime_to_json(findings).dump(2) << '\n';
  for (const auto& f : findings)
    if (!f.satisfied && m.strict_regime) return 3;
  return 0;
}

int run_oracles(const CliState& s) {
  const twinslit::RunManifest m = build_manifest(s);
  const twinslit::WaveFunctionSpec spec =
      twinslit::make_wavefunction_spec(m.source.wave_kind, m.config);
  nlohmann::json j;
  j["schema_version"] = twinslit::kSchemaVersion;
  j["t_D"] = spec.kin.t_D;
  j["tau"] = spec.kin.tau;
  j["de_broglie_wavelength"] = twinslit::de_broglie_wavelength(m.config);
  j["fringe_spacing"] = twinslit::fringe_spacing(m.config, spec.kin.t_D);
  j["com_path_at_t_D"] = twinslit::com_path(m.config, m.source.y0_mean, spec.kin.t_D);
  j["quantum_potential_com_at_0"] =
      twinslit::quantum_potential_com(m.config, m.source.y0_mean, 0.0);
  if (spec.kin.tau >= 10.0)
    j["empty_interval"] = twinslit::empty_interval(m.config, m.source.y0_mean, spec.kin.t_D);
  std::cout << j.dump(2) << '\n';
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"twinslit: two-particle double-slit trajectory and detection-statistics simulator"};
  app.set_version_flag("--version", std::string("twinslit ") + kBuildVersion + " (schema " +
                                        twinslit::kSchemaVersion + ")");
  app.require_subcommand(1);

  CliState s;
  CLI::App* simulate = app.add_subcommand("simulate", "run a trajectory ensemble");
  CLI::App* predict = app.add_subcommand("predict", "detection statistics from |psi|^2 only");
  CLI::App* compare = app.add_subcommand("compare", "ensemble + |psi|^2 + divergence report");
  CLI::App* validate = app.add_subcommand("validate", "check regime conditions only");
  CLI::App* oracles = app.add_subcommand("oracles", "print closed-form reference values");
  for (CLI::App* cmd : {simulate, predict, compare, validate, oracles}) add_common(cmd, s);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }

  try {
    if (simulate->parsed()) return run_mode(s, twinslit::RunMode::Simulate);
    if (predict->parsed()) return run_mode(s, twinslit::RunMode::Predict);
    if (compare->parsed()) return run_mode(s, twinslit::RunMode::Compare);
    if (validate->parsed()) return run_validate(s);
    if (oracles->parsed()) return run_oracles(s);
  } catch (const twinslit::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return 2;
  } catch (const twinslit::AbortQuotaExceeded& e) {
    std::cerr << "abort quota exceeded: " << e.what() << '\n';
    return 4;
  } catch (const twinslit::IoError& e) {
    std::cerr << "i/o error: " << e.what() << '\n';
    return 5;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
