#pragma once

#include <Eigen/Dense>

#include "twinslit/ensemble.hpp"
#include "twinslit/wavefunction.hpp"

namespace twinslit {

struct QuadratureGrid {
  double y_min = 0.0;
  double y_max = 0.0;
  int n_points = 1024;  ///< >= 64
  enum class Rule { Trapezoid, GaussLegendreComposite } rule = Rule::GaussLegendreComposite;
};

/// Grid whose half-width extends 8 sigma0 sqrt(1+tau^2) beyond the outermost
/// drifted packet center (tail truncation below 1e-14).
QuadratureGrid default_grid(const WaveFunctionSpec& spec, double t);

/// Z(t) = integral of |psi|^2 over the grid. Checked by doubling the
/// resolution; throws NonConvergence above 1e-8 relative change.
double normalization(const WaveFunctionSpec& spec, double t);
double normalization(const WaveFunctionSpec& spec, double t, const QuadratureGrid& grid);

/// Probability of simultaneous detection in
/// [yM, yM+Delta] x [yN, yN+Delta], normalized by Z(t). Direct 2D tensor
/// quadrature over the bin.
double joint_probability(const WaveFunctionSpec& spec, double yM, double yN, double Delta,
                         double t);

/// Normalized single-arm marginal density p(y1) = int |psi|^2 dy2 / Z,
/// evaluated at the given points. For the entangled kinds the pooled screen
/// density equals the marginal by exchange symmetry; for the unentangled
/// product both marginals coincide.
Eigen::ArrayXd marginal_density(const WaveFunctionSpec& spec, double t,
                                const Eigen::ArrayXd& y_points);

/// Marginal screen pattern as probability mass per bin (pooled over the two
/// particles), on the given bin edges.
Pattern marginal_pattern(const WaveFunctionSpec& spec, double t, const Eigen::ArrayXd& edges);

/// SQM reading (i) of selective detection: restrict |psi|^2/Z to the
/// quadrants y1*y2 < 0, renormalize, pool the two conditional marginals.
/// Throws DegenerateSupport when the opposite-side mass is below 1e-12.
Pattern conditional_pattern_selective(const WaveFunctionSpec& spec, double t,
                                      const Eigen::ArrayXd& edges);

/// Pooled conditional density curve (same construction, at points).
Eigen::ArrayXd conditional_density_selective(const WaveFunctionSpec& spec, double t,
                                             const Eigen::ArrayXd& y_points);

/// Local maxima and minima of a tabulated curve (three-point test), for
/// fringe inspection.
std::vector<double> local_maxima(const Eigen::ArrayXd& y, const Eigen::ArrayXd& f);
std::vector<double> local_minima(const Eigen::ArrayXd& y, const Eigen::ArrayXd& f);

/// Fringe period of the marginal measured from adjacent dark fringes
/// (minima). Dark-fringe positions are phase-locked, while bright maxima are
/// displaced by the Gaussian envelope when the period is comparable to the
/// envelope width. Returns 0 when fewer than two minima exist.
double measured_fringe_period(const WaveFunctionSpec& spec, double t);

}  // namespace twinslit
