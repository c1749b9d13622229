#pragma once

#include <Eigen/Dense>

namespace twinslit {

/// Kolmogorov-Smirnov statistic between two binned distributions on the same
/// grid: max absolute difference of the normalized cumulative sums.
double ks_statistic(const Eigen::ArrayXd& p_counts, const Eigen::ArrayXd& q_counts);

/// Total-variation distance 0.5 * sum |p - q| on normalized bins.
double total_variation(const Eigen::ArrayXd& p_counts, const Eigen::ArrayXd& q_counts);

struct ChiSquareResult {
  double statistic = 0.0;
  int dof = 0;
  double p_value = 1.0;
};

/// Pearson chi^2 of observed counts against expected probabilities.
/// Adjacent bins are pooled until the expected count reaches min_expected.
ChiSquareResult chi_square_gof(const Eigen::ArrayXd& observed_counts,
                               const Eigen::ArrayXd& expected_probs, double min_expected = 5.0);

/// Regularized upper incomplete gamma Q(a, x); chi^2 survival is
/// Q(dof/2, x/2).
double gammq(double a, double x);

double chi_square_sf(double statistic, int dof);

}  // namespace twinslit
