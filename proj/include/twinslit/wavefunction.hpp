#pragma once

#include <complex>

#include "twinslit/config.hpp"

namespace twinslit {

using Complex = std::complex<double>;

/// Two-particle configuration (y1, y2) at time t. The x motion is
/// deterministic (x1 = x2 = u_x * t) and is carried by the phases.
struct ConfigurationPoint {
  double y1 = 0.0;
  double y2 = 0.0;
  double t = 0.0;
};

struct WaveFunctionSpec {
  WaveKind kind = WaveKind::EntangledSymmetric;
  PhysicalConfig config;
  Kinematics kin;
};

WaveFunctionSpec make_wavefunction_spec(WaveKind kind, const PhysicalConfig& config);

/// Complex packet width sigma0 * (1 + i hbar t / (2 m sigma0^2)).
Complex sigma_t(const PhysicalConfig& config, double t);

enum class Slit { A, B };

/// Per-time factors shared by every packet evaluation at the same t.
/// Building one of these per velocity call keeps the inner loop to a single
/// complex exp per packet.
struct PacketCache {
  Complex sig_t;        ///< sigma_t
  Complex inv_4ss;      ///< 1 / (4 sigma0 sigma_t)
  Complex inv_2ss;      ///< 1 / (2 sigma0 sigma_t)
  Complex log_prefactor;///< -(1/4) log(2 pi sigma_t^2), principal branch
  double center;        ///< Y + u_y t (drifted packet center, slit A side)
  double common_phase;  ///< k_x u_x t - E_x t / hbar
  double k_y;
  double Y;
  double uy_t;
  double peak_amplitude;///< (2 pi sigma0^2 (1+tau^2))^(-1/4), single packet
};

PacketCache make_packet_cache(const WaveFunctionSpec& spec, double t);

/// Single-slit Gaussian packet at time t, overall constant a = 1.
/// The Gaussian exponent, the prefactor log, and the phase are summed in the
/// complex log domain and exponentiated once.
Complex packet(const PacketCache& c, Slit slit, double y);
Complex packet(const WaveFunctionSpec& spec, Slit slit, double y, double t);

/// d/dy log(packet): -(y -+ (Y + u_y t)) / (2 sigma0 sigma_t) +- i k_y.
Complex packet_dlog(const PacketCache& c, Slit slit, double y);

/// Unnormalized composite two-particle amplitude for the spec's kind.
Complex psi(const WaveFunctionSpec& spec, const ConfigurationPoint& p);

/// |psi|^2, unnormalized.
double density(const WaveFunctionSpec& spec, const ConfigurationPoint& p);

/// Reference amplitude scale for node detection: twice the squared
/// single-packet peak amplitude at time t.
double peak_composite_amplitude(const WaveFunctionSpec& spec, double t);

}  // namespace twinslit
