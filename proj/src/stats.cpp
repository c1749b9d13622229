#include "twinslit/stats.hpp"

#include <cmath>
#include <limits>

#include "twinslit/errors.hpp"

namespace twinslit {

namespace {

void check_same_size(const Eigen::ArrayXd& p, const Eigen::ArrayXd& q) {
  if (p.size() != q.size()) throw GridMismatch("bin count mismatch");
}

Eigen::ArrayXd normalize(const Eigen::ArrayXd& counts) {
  const double total = counts.sum();
  if (total <= 0) return Eigen::ArrayXd::Zero(counts.size());
  return counts / total;
}

}  // namespace

double ks_statistic(const Eigen::ArrayXd& p_counts, const Eigen::ArrayXd& q_counts) {
  check_same_size(p_counts, q_counts);
  const Eigen::ArrayXd p = normalize(p_counts);
  const Eigen::ArrayXd q = normalize(q_counts);
  double cp = 0.0, cq = 0.0, d = 0.0;
  for (Eigen::Index i = 0; i < p.size(); ++i) {
    cp += p[i];
    cq += q[i];
    d = std::max(d, std::abs(cp - cq));
  }
  return d;
}

double total_variation(const Eigen::ArrayXd& p_counts, const Eigen::ArrayXd& q_counts) {
  check_same_size(p_counts, q_counts);
  return 0.5 * (normalize(p_counts) - normalize(q_counts)).abs().sum();
}

ChiSquareResult chi_square_gof(const Eigen::ArrayXd& observed_counts,
                               const Eigen::ArrayXd& expected_probs, double min_expected) {
  check_same_size(observed_counts, expected_probs);
  const double n = observed_counts.sum();
  ChiSquareResult r;
  if (n <= 0) return r;
  const Eigen::ArrayXd probs = normalize(expected_probs);

  // Pool adjacent bins until the expected count reaches min_expected.
  double chi2 = 0.0;
  int groups = 0;
  double obs_acc = 0.0, exp_acc = 0.0;
  for (Eigen::Index i = 0; i < observed_counts.size(); ++i) {
    obs_acc += observed_counts[i];
    exp_acc += n * probs[i];
    if (exp_acc >= min_expected) {
      const double d = obs_acc - exp_acc;
      chi2 += d * d / exp_acc;
      ++groups;
      obs_acc = exp_acc = 0.0;
    }
  }
  if (exp_acc > 0 && groups > 0) {
    // fold the remainder into the last group
    const double d = obs_acc - exp_acc;
    chi2 += d * d / exp_acc;
  }
  r.statistic = chi2;
  r.dof = std::max(1, groups - 1);
  r.p_value = chi_square_sf(chi2, r.dof);
  return r;
}

namespace {

// Regularized lower incomplete gamma by series expansion.
double gamma_p_series(double a, double x) {
  double sum = 1.0 / a;
  double term = sum;
  for (int n = 1; n < 1000; ++n) {
    term *= x / (a + n);
    sum += term;
    if (std::abs(term) < std::abs(sum) * 1e-16) break;
  }
  return sum * std::exp(-x + a * std::log(x) - std::lgamma(a));
}

// Regularized upper incomplete gamma by Lentz continued fraction.
double gamma_q_cf(double a, double x) {
  const double tiny = std::numeric_limits<double>::min() / 1e-30;
  double b = x + 1.0 - a;
  double c = 1.0 / tiny;
  double d = 1.0 / b;
  double h = d;
  for (int i = 1; i < 1000; ++i) {
    const double an = -static_cast<double>(i) * (i - a);
    b += 2.0;
    d = an * d + b;
    if (std::abs(d) < tiny) d = tiny;
    c = b + an / c;
    if (std::abs(c) < tiny) c = tiny;
    d = 1.0 / d;
    const double del = d * c;
    h *= del;
    if (std::abs(del - 1.0) < 1e-16) break;
  }
  return std::exp(-x + a * std::log(x) - std::lgamma(a)) * h;
}

}  // namespace

double gammq(double a, double x) {
  if (x < 0 || a <= 0) return std::numeric_limits<double>::quiet_NaN();
  if (x == 0) return 1.0;
  if (x < a + 1.0) return 1.0 - gamma_p_series(a, x);
  return gamma_q_cf(a, x);
}

double chi_square_sf(double statistic, int dof) {
  return gammq(0.5 * dof, 0.5 * statistic);
}

}  // namespace twinslit
