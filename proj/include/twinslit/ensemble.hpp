#pragma once

#include <cstdint>
#include <vector>

#include <Eigen/Dense>

#include "twinslit/guidance.hpp"
#include "twinslit/stats.hpp"

namespace twinslit {

struct InitialSample {
  double y1 = 0.0;
  double y2 = 0.0;
  double y0 = 0.0;  ///< (y1 + y2) / 2 at t = 0
};

struct DetectionRecord {
  std::uint64_t trajectory_id = 0;
  TrajectoryStatus status = TrajectoryStatus::Completed;
  double y0_initial = 0.0;
  double y1_initial = 0.0;
  double y2_initial = 0.0;
  double y1_final = 0.0;
  double y2_final = 0.0;
  double t_arrival = 0.0;  ///< == t_D for Completed records
  int sign_changes_y1 = 0;
  int sign_changes_y2 = 0;
  double min_density_seen = 1.0;
};

/// Draws n initial configurations at t=0.
/// Entangled kinds: y0 ~ Normal(y0_mean, y0_spread), then y1 from the
/// conditional density ~ |psi(y1, 2 y0 - y1, 0)|^2 and y2 = 2 y0 - y1.
/// Unentangled: y1, y2 iid from |packet_A + packet_B|^2 at t=0, displaced
/// per the source's shift mode.
std::vector<InitialSample> sample_initial(const WaveFunctionSpec& spec, const SourceSpec& source,
                                          std::size_t n);

struct EnsembleOptions {
  double tol = 1e-9;
  int workers = 0;           ///< 0: hardware concurrency
  double abort_quota = 0.01; ///< hard failure above this aborted fraction
  double node_epsilon = 1e-6;
};

struct EnsembleResult {
  std::vector<DetectionRecord> records;
  std::size_t completed = 0;
  std::size_t node_aborts = 0;
  std::size_t step_limit_aborts = 0;
};

/// Integrates n trajectories to t_D. Deterministic given source.rng_seed,
/// independent of worker count. Throws AbortQuotaExceeded when more than
/// abort_quota of the trajectories fail to complete.
EnsembleResult run_ensemble(const WaveFunctionSpec& spec, const SourceSpec& source, std::size_t n,
                            const EnsembleOptions& opts = {});

/// Keeps exactly the Completed records detected on opposite sides of the
/// x-axis (y1 * y2 < 0); pairs with a coordinate exactly on the axis drop.
std::vector<DetectionRecord> selective_filter(const std::vector<DetectionRecord>& records);

struct Pattern {
  Eigen::ArrayXd edges;   ///< strictly increasing, size = bins + 1
  Eigen::ArrayXd counts;  ///< arrivals (or probability mass) per bin
  double bin_width = 0.0;
  double total_weight = 0.0;

  int bins() const { return static_cast<int>(counts.size()); }
  double center(int i) const { return 0.5 * (edges[i] + edges[i + 1]); }
  /// counts / (total * bin_width); zero pattern stays zero.
  Eigen::ArrayXd normalized_density() const;
};

enum class PatternProjection { Y1, Y2, BothPooled };

/// Bins arrival coordinates of Completed records; BothPooled pools y1 and y2
/// (each pair contributes two arrivals). Arrivals outside [lo, hi) are
/// ignored.
Pattern make_histogram(const std::vector<DetectionRecord>& records, PatternProjection projection,
                       double bin_width, double lo, double hi);

Pattern empty_pattern(double bin_width, double lo, double hi);

struct DivergenceReport {
  double ks = 0.0;
  double tv = 0.0;
  double chi2 = 0.0;
  int chi2_dof = 0;
  double chi2_p_value = 1.0;
};

/// KS, total variation and per-bin chi^2 between two patterns on identical
/// grids. Throws GridMismatch otherwise.
DivergenceReport compare_patterns(const Pattern& observed, const Pattern& expected);

struct GapInterval {
  double length = 0.0;
  double center = 0.0;
};

/// Widest contiguous run of bins below peak_fraction * max(density), lying
/// strictly between two bins at or above that level. Zero-length when none.
GapInterval measure_gap(const Pattern& pattern, double peak_fraction);

}  // namespace twinslit
