#pragma once

#include <optional>
#include <vector>

#include "twinslit/wavefunction.hpp"

namespace twinslit {

struct VelocityPair {
  double v1 = 0.0;
  double v2 = 0.0;
};

/// Analytic Bohmian velocities (hbar/m) Im(d_{y_i} psi / psi) from the
/// closed-form log-derivatives. Returns nullopt near a node, detected as
/// destructive cancellation: the superposition's magnitude falling below
/// node_epsilon times the summed magnitudes of its terms.
std::optional<VelocityPair> try_velocity(const WaveFunctionSpec& spec, const ConfigurationPoint& p,
                                         double node_epsilon = 1e-6);

/// Throwing wrapper around try_velocity (raises NodeProximity).
VelocityPair velocity(const WaveFunctionSpec& spec, const ConfigurationPoint& p,
                      double node_epsilon = 1e-6);

/// Closed-form center-of-mass velocity a^2 y t / (1 + a^2 t^2) with
/// a = hbar / (2 m sigma0^2). Exact for the entangled kinds; for the
/// unentangled kind it requires k_y ~ 0 and Y << sigma0 and throws
/// RegimeViolation otherwise.
double com_velocity(const WaveFunctionSpec& spec, double y, double t);

enum class TrajectoryStatus { Completed, NodeAbort, StepLimitAbort };

struct Trajectory {
  std::vector<ConfigurationPoint> samples;  ///< strictly increasing in t
  TrajectoryStatus status = TrajectoryStatus::Completed;
  double min_density_seen = 1.0;  ///< min |psi|^2 / peak^2 along the path
  int node_events = 0;            ///< velocity refusals encountered
  int sign_changes_y1 = 0;        ///< sign flips of y1 across accepted steps
  int sign_changes_y2 = 0;
  ConfigurationPoint terminal() const { return samples.back(); }
};

struct IntegratorOptions {
  double tol = 1e-9;          ///< relative local error per step, in [1e-12, 1e-3]
  int output_samples = 200;   ///< evenly spaced samples plus the terminal point
  long max_steps = 1000000;
  bool record_samples = true; ///< false: keep only initial + terminal sample
  double node_epsilon = 1e-6;
};

/// Integrates dy/dt = velocity from t=0 to t_end with an embedded
/// Dormand-Prince 4(5) pair and proportional step control. Minimum step
/// 1e-12 * t_end, maximum step t_end / 100.
Trajectory integrate_trajectory(const WaveFunctionSpec& spec, const ConfigurationPoint& initial,
                                double t_end, const IntegratorOptions& opts = {});

const char* to_string(TrajectoryStatus status);

}  // namespace twinslit
