#include "twinslit/config.hpp"

#include <cmath>
#include <fstream>
#include <set>

#include <nlohmann/json.hpp>

#include "twinslit/errors.hpp"

namespace twinslit {

void PhysicalConfig::validate() const {
  auto require = [](bool ok, const char* what) {
    if (!ok) throw ConfigError(std::string("invalid physical config: ") + what);
  };
  require(std::isfinite(hbar) && hbar > 0, "hbar must be > 0");
  require(std::isfinite(mass) && mass > 0, "mass must be > 0");
  require(std::isfinite(sigma0) && sigma0 > 0, "sigma0 must be > 0");
  require(std::isfinite(slit_offset_Y) && slit_offset_Y > 0, "slit_offset_Y must be > 0");
  require(std::isfinite(screen_distance_D) && screen_distance_D > 0,
          "screen_distance_D must be > 0");
  require(std::isfinite(detector_width_Delta) && detector_width_Delta > 0,
          "detector_width_Delta must be > 0");
  require(std::isfinite(k_x) && k_x > 0, "k_x must be > 0 (propagation toward the screen)");
  require(std::isfinite(k_y), "k_y must be finite");
}

Kinematics derive_kinematics(const PhysicalConfig& config) {
  config.validate();
  Kinematics kin;
  kin.u_x = config.hbar * config.k_x / config.mass;
  kin.u_y = config.hbar * config.k_y / config.mass;
  if (!(kin.u_x > 0)) throw ConfigError("derived u_x must be positive");
  kin.E_x = 0.5 * config.mass * kin.u_x * kin.u_x;
  kin.t_D = config.screen_distance_D / kin.u_x;
  kin.tau = tau_at(config, kin.t_D);
  return kin;
}

double tau_at(const PhysicalConfig& config, double t) {
  return config.hbar * t / (2.0 * config.mass * config.sigma0 * config.sigma0);
}

namespace {

RegimeFinding ratio_finding(std::string name, double value, double threshold, std::string detail) {
  RegimeFinding f;
  f.name = std::move(name);
  f.value = value;
  f.threshold = threshold;
  f.satisfied = value <= threshold;
  f.detail = std::move(detail);
  return f;
}

RegimeFinding window_finding(std::string name, double value, double lo, double hi,
                             std::string detail) {
  RegimeFinding f;
  f.name = std::move(name);
  f.value = value;
  f.threshold = hi;
  f.satisfied = value >= lo && value <= hi;
  f.detail = std::move(detail);
  return f;
}

}  // namespace

std::vector<RegimeFinding> validate_regime(const PhysicalConfig& config, const Kinematics& kin,
                                           const SourceSpec& source, Scenario scenario,
                                           double strictness) {
  std::vector<RegimeFinding> out;
  const double s0 = config.sigma0;
  const double fringe = M_PI * config.hbar * kin.t_D / (config.slit_offset_Y * config.mass);

  switch (scenario) {
    case Scenario::Fig1Entangled: {
      out.push_back(ratio_finding("dy0 << pi*hbar*t/(Y*m)", source.y0_spread / fringe, strictness,
                                  "center-of-mass spread vs fringe scale"));
      out.push_back(window_finding("tau ~ 1", kin.tau, 0.5, 2.0, "spreading parameter window"));
      out.push_back(window_finding("Y ~ sigma0", config.slit_offset_Y / s0, 0.5, 2.0,
                                   "slit offset comparable to slit width"));
      break;
    }
    case Scenario::Fig2UnentangledSymmetric: {
      out.push_back(ratio_finding("Y << 2*pi*sigma0", config.slit_offset_Y / (2.0 * M_PI * s0),
                                  strictness, "symmetric detection at side maxima"));
      out.push_back(window_finding("tau ~ 1", kin.tau, 0.5, 2.0, "spreading parameter window"));
      out.push_back(ratio_finding("k_y ~ 0", std::abs(config.k_y) * s0, strictness,
                                  "transverse wave number negligible"));
      break;
    }
    case Scenario::Fig3UnentangledShifted: {
      const double y0 = std::abs(source.y0_mean);
      out.push_back(ratio_finding("Y << sigma0", config.slit_offset_Y / s0, strictness,
                                  "slit offset small against slit width"));
      out.push_back(ratio_finding("sigma0 << <y0>", y0 > 0 ? s0 / y0 : 1e30, strictness,
                                  "source displacement dominates slit width"));
      {
        RegimeFinding f;
        f.name = "tau >> 1";
        f.value = kin.tau;
        f.threshold = 10.0;
        f.satisfied = kin.tau >= 10.0;
        f.detail = "far-field spreading";
        out.push_back(f);
      }
      out.push_back(ratio_finding("k_y ~ 0", std::abs(config.k_y) * s0, strictness,
                                  "transverse wave number negligible"));
      // dy << L: unentangled com spread is fixed at sigma0/sqrt(2) by the
      // wave function itself.
      const double dy = s0 / std::sqrt(2.0) * std::sqrt(1.0 + kin.tau * kin.tau);
      const double L = config.hbar * kin.t_D * y0 / (config.mass * s0 * s0);
      out.push_back(ratio_finding("dy << L", L > 0 ? dy / L : 1e30, strictness,
                                  "com smearing small against the empty interval"));
      break;
    }
    case Scenario::Custom:
      break;
  }
  return out;
}

PhysicalConfig config_from_json(const nlohmann::json& j) {
  if (!j.is_object()) throw ConfigError("config file must contain a JSON object");
  static const std::set<std::string> known = {
      "hbar", "mass", "sigma0", "slit_offset_Y", "k_x", "k_y", "screen_distance_D",
      "detector_width_Delta"};
  for (auto it = j.begin(); it != j.end(); ++it) {
    if (!known.count(it.key())) throw ConfigError("unknown config key: " + it.key());
    if (!it.value().is_number()) throw ConfigError("config key is not a number: " + it.key());
  }
  PhysicalConfig c;
  c.hbar = j.value("hbar", c.hbar);
  c.mass = j.value("mass", c.mass);
  c.sigma0 = j.value("sigma0", c.sigma0);
  c.slit_offset_Y = j.value("slit_offset_Y", c.slit_offset_Y);
  c.k_x = j.value("k_x", c.k_x);
  c.k_y = j.value("k_y", c.k_y);
  c.screen_distance_D = j.value("screen_distance_D", c.screen_distance_D);
  c.detector_width_Delta = j.value("detector_width_Delta", c.detector_width_Delta);
  c.validate();
  return c;
}

PhysicalConfig load_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file: " + path);
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("config parse error: ") + e.what());
  }
  return config_from_json(j);
}

const char* to_string(WaveKind kind) {
  switch (kind) {
    case WaveKind::EntangledSymmetric: return "entangled-symmetric";
    case WaveKind::EntangledAntisymmetric: return "entangled-antisymmetric";
    case WaveKind::UnentangledProduct: return "unentangled-product";
  }
  return "?";
}

const char* to_string(Scenario scenario) {
  switch (scenario) {
    case Scenario::Fig1Entangled: return "fig1-entangled";
    case Scenario::Fig2UnentangledSymmetric: return "fig2-unentangled-symmetric";
    case Scenario::Fig3UnentangledShifted: return "fig3-unentangled-shifted";
    case Scenario::Custom: return "custom";
  }
  return "?";
}

}  // namespace twinslit
