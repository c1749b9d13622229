#pragma once

#include "twinslit/config.hpp"

namespace twinslit {

/// Center-of-mass path y0 * sqrt(1 + (hbar t / 2 m sigma0^2)^2).
double com_path(const PhysicalConfig& config, double y0, double t);

/// Center-of-mass quantum potential
/// (1/2) m y0^2 (hbar/2m sigma0^2)^2 / (1 + (hbar t/2m sigma0^2)^2);
/// zero when y0 = 0.
double quantum_potential_com(const PhysicalConfig& config, double y0, double t);

/// First printed form, parameterized by the com position y:
/// m y0^4 (hbar/2m sigma0^2)^2 / (2 y^2). Requires y != 0.
double quantum_potential_com_at(const PhysicalConfig& config, double y0, double y);

/// Fringe spacing pi hbar t / (Y m). Requires t > 0.
double fringe_spacing(const PhysicalConfig& config, double t);

/// de Broglie wavelength of the forward motion, 2 pi hbar / (m u_x).
double de_broglie_wavelength(const PhysicalConfig& config);

/// Empty-interval length hbar t y0_char / (m sigma0^2). Throws
/// RegimeViolation unless tau(t) >= 10.
double empty_interval(const PhysicalConfig& config, double y0_char, double t);

}  // namespace twinslit
