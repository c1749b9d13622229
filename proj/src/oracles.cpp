#include "twinslit/oracles.hpp"

#include <cmath>

#include "twinslit/errors.hpp"

namespace twinslit {

namespace {

double spread_rate(const PhysicalConfig& c) {
  return c.hbar / (2.0 * c.mass * c.sigma0 * c.sigma0);
}

}  // namespace

double com_path(const PhysicalConfig& config, double y0, double t) {
  const double at = spread_rate(config) * t;
  return y0 * std::sqrt(1.0 + at * at);
}

double quantum_potential_com(const PhysicalConfig& config, double y0, double t) {
  if (y0 == 0.0) return 0.0;
  const double a = spread_rate(config);
  const double at = a * t;
  return 0.5 * config.mass * y0 * y0 * a * a / (1.0 + at * at);
}

double quantum_potential_com_at(const PhysicalConfig& config, double y0, double y) {
  if (y == 0.0) throw ConfigError("quantum_potential_com_at requires y != 0");
  const double a = spread_rate(config);
  return config.mass * y0 * y0 * y0 * y0 * a * a / (2.0 * y * y);
}

double fringe_spacing(const PhysicalConfig& config, double t) {
  if (!(t > 0)) throw ConfigError("fringe_spacing requires t > 0");
  if (!(config.slit_offset_Y > 0)) throw ConfigError("fringe_spacing requires Y > 0");
  return M_PI * config.hbar * t / (config.slit_offset_Y * config.mass);
}

double de_broglie_wavelength(const PhysicalConfig& config) {
  const double u_x = config.hbar * config.k_x / config.mass;
  if (!(u_x > 0)) throw ConfigError("de_broglie_wavelength requires forward motion");
  return 2.0 * M_PI * config.hbar / (config.mass * u_x);
}

double empty_interval(const PhysicalConfig& config, double y0_char, double t) {
  if (tau_at(config, t) < 10.0)
    throw RegimeViolation("empty_interval is a far-field result; requires tau >= 10");
  return config.hbar * t * y0_char / (config.mass * config.sigma0 * config.sigma0);
}

}  // namespace twinslit
