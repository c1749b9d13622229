#pragma once

#include <functional>

#include <Eigen/Dense>

#include "twinslit/rng.hpp"

namespace twinslit {

/// Tabulated inverse-CDF sampler over a uniform grid, linear interpolation
/// within cells. Bimodal slit densities defeat naive rejection envelopes, so
/// this is the production sampling path.
class TabulatedInverseCdf {
 public:
  /// density values must be non-negative; grid strictly increasing, uniform.
  TabulatedInverseCdf(Eigen::ArrayXd grid, const Eigen::ArrayXd& density);

  /// Maps a uniform u in (0,1) to a sample.
  double sample(double u) const;

  const Eigen::ArrayXd& grid() const { return grid_; }

 private:
  Eigen::ArrayXd grid_;
  Eigen::ArrayXd cdf_;
};

/// Rejection sampler under a constant envelope, kept as a cross-check of the
/// inverse-CDF path. Throws SamplingFailure when the acceptance rate falls
/// below floor_rate (signals a mis-specified envelope).
double sample_rejection(const std::function<double(double)>& density, double lo, double hi,
                        double envelope_max, SubstreamRng& rng, double floor_rate = 1e-4);

}  // namespace twinslit
