#include "twinslit/wavefunction.hpp"

#include <cmath>

namespace twinslit {

WaveFunctionSpec make_wavefunction_spec(WaveKind kind, const PhysicalConfig& config) {
  WaveFunctionSpec spec;
  spec.kind = kind;
  spec.config = config;
  spec.kin = derive_kinematics(config);
  return spec;
}

Complex sigma_t(const PhysicalConfig& config, double t) {
  return config.sigma0 * Complex(1.0, tau_at(config, t));
}

PacketCache make_packet_cache(const WaveFunctionSpec& spec, double t) {
  const PhysicalConfig& c = spec.config;
  PacketCache pc;
  pc.sig_t = sigma_t(c, t);
  pc.inv_4ss = 1.0 / (4.0 * c.sigma0 * pc.sig_t);
  pc.inv_2ss = 2.0 * pc.inv_4ss;
  pc.log_prefactor = -0.25 * std::log(2.0 * M_PI * pc.sig_t * pc.sig_t);
  pc.center = c.slit_offset_Y + spec.kin.u_y * t;
  pc.common_phase = c.k_x * spec.kin.u_x * t - spec.kin.E_x * t / c.hbar;
  pc.k_y = c.k_y;
  pc.Y = c.slit_offset_Y;
  pc.uy_t = spec.kin.u_y * t;
  const double tau = tau_at(c, t);
  pc.peak_amplitude = std::pow(2.0 * M_PI * c.sigma0 * c.sigma0 * (1.0 + tau * tau), -0.25);
  return pc;
}

Complex packet(const PacketCache& c, Slit slit, double y) {
  // Entire exponent assembled in the complex log domain; one exp call.
  Complex log_amp;
  double phase;
  if (slit == Slit::A) {
    const double d = y - c.center;
    log_amp = -(d * d) * c.inv_4ss;
    phase = c.common_phase + c.k_y * (y - c.Y - 0.5 * c.uy_t);
  } else {
    const double d = y + c.center;
    log_amp = -(d * d) * c.inv_4ss;
    phase = c.common_phase - c.k_y * (y + c.Y + 0.5 * c.uy_t);
  }
  return std::exp(c.log_prefactor + log_amp + Complex(0.0, phase));
}

Complex packet(const WaveFunctionSpec& spec, Slit slit, double y, double t) {
  return packet(make_packet_cache(spec, t), slit, y);
}

Complex packet_dlog(const PacketCache& c, Slit slit, double y) {
  if (slit == Slit::A) return -(y - c.center) * c.inv_2ss + Complex(0.0, c.k_y);
  return -(y + c.center) * c.inv_2ss - Complex(0.0, c.k_y);
}

Complex psi(const WaveFunctionSpec& spec, const ConfigurationPoint& p) {
  const PacketCache c = make_packet_cache(spec, p.t);
  const Complex a1 = packet(c, Slit::A, p.y1);
  const Complex b1 = packet(c, Slit::B, p.y1);
  const Complex a2 = packet(c, Slit::A, p.y2);
  const Complex b2 = packet(c, Slit::B, p.y2);
  switch (spec.kind) {
    case WaveKind::EntangledSymmetric: return a1 * b2 + a2 * b1;
    case WaveKind::EntangledAntisymmetric: return a1 * b2 - a2 * b1;
    case WaveKind::UnentangledProduct: return (a1 + b1) * (a2 + b2);
  }
  return {};
}

double density(const WaveFunctionSpec& spec, const ConfigurationPoint& p) {
  return std::norm(psi(spec, p));
}

double peak_composite_amplitude(const WaveFunctionSpec& spec, double t) {
  const double pp = make_packet_cache(spec, t).peak_amplitude;
  return 2.0 * pp * pp;
}

}  // namespace twinslit
