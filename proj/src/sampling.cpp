#include "twinslit/sampling.hpp"

#include <algorithm>
#include <cmath>

#include "twinslit/errors.hpp"

namespace twinslit {

TabulatedInverseCdf::TabulatedInverseCdf(Eigen::ArrayXd grid, const Eigen::ArrayXd& density)
    : grid_(std::move(grid)) {
  const Eigen::Index n = grid_.size();
  if (n < 2 || density.size() != n) throw SamplingFailure("inverse-CDF table needs >= 2 points");
  if ((density < 0).any()) throw SamplingFailure("negative density in inverse-CDF table");
  cdf_.resize(n);
  cdf_[0] = 0.0;
  for (Eigen::Index i = 1; i < n; ++i) {
    const double dx = grid_[i] - grid_[i - 1];
    if (!(dx > 0)) throw SamplingFailure("inverse-CDF grid must be strictly increasing");
    cdf_[i] = cdf_[i - 1] + 0.5 * (density[i] + density[i - 1]) * dx;
  }
  const double total = cdf_[n - 1];
  if (!(total > 0)) throw SamplingFailure("inverse-CDF density integrates to zero");
  cdf_ /= total;
}

double TabulatedInverseCdf::sample(double u) const {
  const double* begin = cdf_.data();
  const double* end = begin + cdf_.size();
  const double* it = std::upper_bound(begin, end, u);
  Eigen::Index hi = std::clamp<Eigen::Index>(it - begin, 1, cdf_.size() - 1);
  const Eigen::Index lo = hi - 1;
  const double span = cdf_[hi] - cdf_[lo];
  const double frac = span > 0 ? (u - cdf_[lo]) / span : 0.5;
  return grid_[lo] + frac * (grid_[hi] - grid_[lo]);
}

double sample_rejection(const std::function<double(double)>& density, double lo, double hi,
                        double envelope_max, SubstreamRng& rng, double floor_rate) {
  const long max_tries = std::max<long>(100, static_cast<long>(1.0 / floor_rate));
  for (long i = 0; i < max_tries; ++i) {
    const double y = lo + (hi - lo) * rng.uniform();
    const double v = envelope_max * rng.uniform();
    const double d = density(y);
    if (d > envelope_max)
      throw SamplingFailure("rejection envelope below density");
    if (v <= d) return y;
  }
  throw SamplingFailure("rejection sampling acceptance rate below floor");
}

}  // namespace twinslit
