#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

namespace twinslit {

enum class WaveKind { EntangledSymmetric, EntangledAntisymmetric, UnentangledProduct };

enum class Scenario { Fig1Entangled, Fig2UnentangledSymmetric, Fig3UnentangledShifted, Custom };

/// All physical symbols of the device, in natural units (hbar = m = sigma0 = 1
/// by default). Lengths are in units of sigma0 once the defaults are used.
struct PhysicalConfig {
  double hbar = 1.0;
  double mass = 1.0;
  double sigma0 = 1.0;               ///< slit half-width
  double slit_offset_Y = 1.0;        ///< slit centers at +-Y
  double k_x = 1.0;
  double k_y = 0.0;
  double screen_distance_D = 2.0;
  double detector_width_Delta = 0.1;

  /// Throws ConfigError if any invariant fails (positivity, k_x > 0).
  void validate() const;
};

/// Quantities derived from PhysicalConfig. Derivation is exact.
struct Kinematics {
  double u_x = 0.0;
  double u_y = 0.0;
  double E_x = 0.0;
  double t_D = 0.0;   ///< screen arrival time D / u_x
  double tau = 0.0;   ///< hbar * t_D / (2 m sigma0^2)
};

Kinematics derive_kinematics(const PhysicalConfig& config);

/// Spreading parameter hbar * t / (2 m sigma0^2) at an arbitrary time.
double tau_at(const PhysicalConfig& config, double t);

/// How a nonzero y0_mean displaces the unentangled source.
///   Translate: both single-particle densities move by y0_mean.
///   SplitPair: particle 1 stays at the slits, particle 2 moves by 2*y0_mean,
///              so the pair mean is y0_mean and opposite-side pairs survive
///              selective detection (Figure-3 scenario).
enum class SourceShift { Translate, SplitPair };

struct SourceSpec {
  WaveKind wave_kind = WaveKind::EntangledSymmetric;
  double y0_mean = 0.0;
  double y0_spread = 0.0;  ///< 0 means y0 is deterministic
  std::uint64_t rng_seed = 0;
  SourceShift shift_mode = SourceShift::Translate;
};

struct RegimeFinding {
  std::string name;       ///< e.g. "Y << 2*pi*sigma0"
  double value = 0.0;     ///< the checked ratio (or tau for window checks)
  double threshold = 0.0; ///< strictness bound, or window edge
  bool satisfied = false;
  std::string detail;
};

/// One finding per inequality the scenario relies on. "a << b" is read as
/// a/b <= strictness; "tau ~ 1" as tau in [0.5, 2]; "tau >> 1" as tau >= 10.
std::vector<RegimeFinding> validate_regime(const PhysicalConfig& config, const Kinematics& kin,
                                           const SourceSpec& source, Scenario scenario,
                                           double strictness = 0.1);

/// Parses a JSON config file. All keys optional; unknown keys are an error.
PhysicalConfig config_from_json(const nlohmann::json& j);
PhysicalConfig load_config_file(const std::string& path);

const char* to_string(WaveKind kind);
const char* to_string(Scenario scenario);

}  // namespace twinslit
