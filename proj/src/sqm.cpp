#include "twinslit/sqm.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <vector>

#include "twinslit/errors.hpp"

namespace twinslit {

namespace {

constexpr int kPanelOrder = 32;

struct GlRule {
  Eigen::ArrayXd x;  // nodes on [-1, 1]
  Eigen::ArrayXd w;
};

GlRule make_gl(int n) {
  GlRule r;
  r.x.resize(n);
  r.w.resize(n);
  for (int i = 0; i < (n + 1) / 2; ++i) {
    double x = std::cos(M_PI * (i + 0.75) / (n + 0.5));
    double pp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      pp = n * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / pp;
      x -= dx;
      if (std::abs(dx) < 1e-15) break;
    }
    r.x[i] = -x;
    r.x[n - 1 - i] = x;
    const double w = 2.0 / ((1.0 - x * x) * pp * pp);
    r.w[i] = w;
    r.w[n - 1 - i] = w;
  }
  return r;
}

const GlRule& gl32() {
  static const GlRule rule = make_gl(kPanelOrder);
  return rule;
}

/// Quadrature nodes and weights for [a, b] under the grid's rule.
void quad_rule(double a, double b, int n_points, QuadratureGrid::Rule rule, Eigen::ArrayXd& pts,
               Eigen::ArrayXd& wts) {
  if (!(b > a)) throw ConfigError("quadrature interval must have positive length");
  if (rule == QuadratureGrid::Rule::Trapezoid) {
    const int n = std::max(2, n_points);
    pts = Eigen::ArrayXd::LinSpaced(n, a, b);
    const double h = (b - a) / (n - 1);
    wts = Eigen::ArrayXd::Constant(n, h);
    wts[0] = wts[n - 1] = 0.5 * h;
    return;
  }
  const int panels = std::max(1, n_points / kPanelOrder);
  const GlRule& gl = gl32();
  pts.resize(panels * kPanelOrder);
  wts.resize(panels * kPanelOrder);
  const double pw = (b - a) / panels;
  for (int p = 0; p < panels; ++p) {
    const double lo = a + p * pw;
    const double mid = lo + 0.5 * pw;
    for (int i = 0; i < kPanelOrder; ++i) {
      pts[p * kPanelOrder + i] = mid + 0.5 * pw * gl.x[i];
      wts[p * kPanelOrder + i] = 0.5 * pw * gl.w[i];
    }
  }
}

/// One-dimensional partial integrals of the slit packets over an interval:
/// IA = int |a|^2, IB = int |b|^2, IAB = int a * conj(b).
struct LinePartials {
  double IA = 0.0;
  double IB = 0.0;
  Complex IAB{0.0, 0.0};
};

LinePartials line_partials(const PacketCache& cache, double a, double b, int n_points,
                           QuadratureGrid::Rule rule) {
  Eigen::ArrayXd pts, wts;
  quad_rule(a, b, n_points, rule, pts, wts);
  LinePartials lp;
  for (Eigen::Index i = 0; i < pts.size(); ++i) {
    const Complex pa = packet(cache, Slit::A, pts[i]);
    const Complex pb = packet(cache, Slit::B, pts[i]);
    lp.IA += wts[i] * std::norm(pa);
    lp.IB += wts[i] * std::norm(pb);
    lp.IAB += wts[i] * pa * std::conj(pb);
  }
  return lp;
}

double z_from(WaveKind kind, const LinePartials& lp) {
  switch (kind) {
    case WaveKind::EntangledSymmetric:
      return 2.0 * (lp.IA * lp.IB + std::norm(lp.IAB));
    case WaveKind::EntangledAntisymmetric:
      return 2.0 * (lp.IA * lp.IB - std::norm(lp.IAB));
    case WaveKind::UnentangledProduct: {
      const double s = lp.IA + lp.IB + 2.0 * lp.IAB.real();
      return s * s;
    }
  }
  return 0.0;
}

/// Cached partial integrals for one (spec, t, grid) triple.
struct Partials {
  PacketCache cache;
  WaveKind kind;
  LinePartials full;
  LinePartials neg;  // over [y_min, 0]
  LinePartials pos;  // over [0, y_max]
  double Z = 0.0;
};

Partials make_partials(const WaveFunctionSpec& spec, double t, const QuadratureGrid& grid) {
  if (grid.n_points < 64) throw ConfigError("quadrature grid needs n_points >= 64");
  Partials p;
  p.cache = make_packet_cache(spec, t);
  p.kind = spec.kind;
  p.full = line_partials(p.cache, grid.y_min, grid.y_max, grid.n_points, grid.rule);
  if (grid.y_min < 0.0 && grid.y_max > 0.0) {
    p.neg = line_partials(p.cache, grid.y_min, 0.0, grid.n_points / 2, grid.rule);
    p.pos = line_partials(p.cache, 0.0, grid.y_max, grid.n_points / 2, grid.rule);
  } else if (grid.y_max <= 0.0) {
    p.neg = p.full;
  } else {
    p.pos = p.full;
  }
  p.Z = z_from(p.kind, p.full);
  return p;
}

/// Unnormalized marginal int |psi(y, y2)|^2 dy2 with the y2 integral replaced
/// by the given partials (full line or one half-line).
double marginal_with(const Partials& p, const LinePartials& over, double y) {
  const Complex a = packet(p.cache, Slit::A, y);
  const Complex b = packet(p.cache, Slit::B, y);
  switch (p.kind) {
    case WaveKind::EntangledSymmetric:
    case WaveKind::EntangledAntisymmetric: {
      const double sign = p.kind == WaveKind::EntangledSymmetric ? 1.0 : -1.0;
      return std::norm(a) * over.IB + std::norm(b) * over.IA +
             sign * 2.0 * (a * std::conj(b) * std::conj(over.IAB)).real();
    }
    case WaveKind::UnentangledProduct: {
      const double s2 = over.IA + over.IB + 2.0 * over.IAB.real();
      return std::norm(a + b) * s2;
    }
  }
  return 0.0;
}

double marginal_unnorm(const Partials& p, double y) { return marginal_with(p, p.full, y); }

/// Unnormalized selective conditional: the partner integral runs over the
/// opposite half-line only. Pooling the two particles is the identity here:
/// |psi|^2 is exchange-symmetric for the entangled kinds and the unentangled
/// product has identical one-particle factors.
double conditional_unnorm(const Partials& p, double y) {
  if (y > 0.0) return marginal_with(p, p.neg, y);
  if (y < 0.0) return marginal_with(p, p.pos, y);
  return 0.5 * (marginal_with(p, p.neg, y) + marginal_with(p, p.pos, y));
}

/// Total opposite-side mass (both quadrants), unnormalized.
double opposite_mass(const Partials& p) {
  switch (p.kind) {
    case WaveKind::EntangledSymmetric:
    case WaveKind::EntangledAntisymmetric: {
      const double sign = p.kind == WaveKind::EntangledSymmetric ? 1.0 : -1.0;
      return 2.0 * (p.pos.IA * p.neg.IB + p.pos.IB * p.neg.IA +
                    sign * 2.0 * (p.pos.IAB * std::conj(p.neg.IAB)).real());
    }
    case WaveKind::UnentangledProduct: {
      const double sp = p.pos.IA + p.pos.IB + 2.0 * p.pos.IAB.real();
      const double sn = p.neg.IA + p.neg.IB + 2.0 * p.neg.IAB.real();
      return 2.0 * sp * sn;
    }
  }
  return 0.0;
}

double check_uniform_edges(const Eigen::ArrayXd& edges) {
  if (edges.size() < 2) throw ConfigError("pattern needs at least two bin edges");
  const double w = edges[1] - edges[0];
  if (!(w > 0)) throw ConfigError("bin edges must be strictly increasing");
  for (Eigen::Index i = 1; i + 1 < edges.size(); ++i)
    if (std::abs(edges[i + 1] - edges[i] - w) > 1e-9 * w)
      throw GridMismatch("pattern bin edges must be uniform");
  return w;
}

/// Integrate a 1D function over one bin with a single Gauss-Legendre panel,
/// splitting at y = 0 so half-line integrands stay smooth inside each panel.
template <typename F>
double bin_mass(double lo, double hi, const F& f) {
  const GlRule& gl = gl32();
  auto panel = [&](double a, double b) {
    double acc = 0.0;
    const double mid = 0.5 * (a + b), half = 0.5 * (b - a);
    for (int i = 0; i < kPanelOrder; ++i) acc += half * gl.w[i] * f(mid + half * gl.x[i]);
    return acc;
  };
  if (lo < 0.0 && hi > 0.0) return panel(lo, 0.0) + panel(0.0, hi);
  return panel(lo, hi);
}

Pattern curve_pattern(const Eigen::ArrayXd& edges,
                      const std::function<double(double)>& density) {
  Pattern p;
  p.bin_width = check_uniform_edges(edges);
  p.edges = edges;
  p.counts.resize(edges.size() - 1);
  for (Eigen::Index i = 0; i + 1 < edges.size(); ++i)
    p.counts[i] = bin_mass(edges[i], edges[i + 1], density);
  p.total_weight = p.counts.sum();
  return p;
}

}  // namespace

QuadratureGrid default_grid(const WaveFunctionSpec& spec, double t) {
  const PhysicalConfig& c = spec.config;
  const double tau = tau_at(c, t);
  const double drift = c.slit_offset_Y + std::abs(spec.kin.u_y) * t;
  const double half = drift + 8.0 * c.sigma0 * std::sqrt(1.0 + tau * tau);
  QuadratureGrid g;
  g.y_min = -half;
  g.y_max = half;
  g.n_points = 2048;
  return g;
}

double normalization(const WaveFunctionSpec& spec, double t, const QuadratureGrid& grid) {
  const double z1 = make_partials(spec, t, grid).Z;
  QuadratureGrid fine = grid;
  fine.n_points *= 2;
  const double z2 = make_partials(spec, t, fine).Z;
  if (!(z2 > 0)) throw NonConvergence("normalization integral is not positive");
  if (std::abs(z2 - z1) > 1e-8 * z2)
    throw NonConvergence("normalization did not converge under grid doubling");
  return z2;
}

double normalization(const WaveFunctionSpec& spec, double t) {
  return normalization(spec, t, default_grid(spec, t));
}

double joint_probability(const WaveFunctionSpec& spec, double yM, double yN, double Delta,
                         double t) {
  if (!(Delta > 0)) throw ConfigError("joint_probability requires Delta > 0");
  const PacketCache cache = make_packet_cache(spec, t);
  auto tensor = [&](int panels_per_axis) {
    Eigen::ArrayXd p1, w1, p2, w2;
    quad_rule(yM, yM + Delta, panels_per_axis * kPanelOrder, QuadratureGrid::Rule::GaussLegendreComposite,
              p1, w1);
    quad_rule(yN, yN + Delta, panels_per_axis * kPanelOrder, QuadratureGrid::Rule::GaussLegendreComposite,
              p2, w2);
    std::vector<Complex> a1(p1.size()), b1(p1.size()), a2(p2.size()), b2(p2.size());
    for (Eigen::Index i = 0; i < p1.size(); ++i) {
      a1[i] = packet(cache, Slit::A, p1[i]);
      b1[i] = packet(cache, Slit::B, p1[i]);
    }
    for (Eigen::Index j = 0; j < p2.size(); ++j) {
      a2[j] = packet(cache, Slit::A, p2[j]);
      b2[j] = packet(cache, Slit::B, p2[j]);
    }
    double acc = 0.0;
    for (Eigen::Index i = 0; i < p1.size(); ++i)
      for (Eigen::Index j = 0; j < p2.size(); ++j) {
        Complex amp;
        switch (spec.kind) {
          case WaveKind::EntangledSymmetric: amp = a1[i] * b2[j] + a2[j] * b1[i]; break;
          case WaveKind::EntangledAntisymmetric: amp = a1[i] * b2[j] - a2[j] * b1[i]; break;
          case WaveKind::UnentangledProduct: amp = (a1[i] + b1[i]) * (a2[j] + b2[j]); break;
        }
        acc += w1[i] * w2[j] * std::norm(amp);
      }
    return acc;
  };
  const double coarse = tensor(1);
  const double fine = tensor(2);
  const double z = normalization(spec, t);
  if (std::abs(fine - coarse) > 1e-8 * std::max(fine, 1e-300) && std::abs(fine - coarse) > 1e-14 * z)
    throw NonConvergence("joint probability did not converge under panel doubling");
  return fine / z;
}

Eigen::ArrayXd marginal_density(const WaveFunctionSpec& spec, double t,
                                const Eigen::ArrayXd& y_points) {
  const Partials p = make_partials(spec, t, default_grid(spec, t));
  Eigen::ArrayXd out(y_points.size());
  for (Eigen::Index i = 0; i < y_points.size(); ++i)
    out[i] = marginal_unnorm(p, y_points[i]) / p.Z;
  return out;
}

Pattern marginal_pattern(const WaveFunctionSpec& spec, double t, const Eigen::ArrayXd& edges) {
  const Partials p = make_partials(spec, t, default_grid(spec, t));
  return curve_pattern(edges, [&](double y) { return marginal_unnorm(p, y) / p.Z; });
}

Eigen::ArrayXd conditional_density_selective(const WaveFunctionSpec& spec, double t,
                                             const Eigen::ArrayXd& y_points) {
  const Partials p = make_partials(spec, t, default_grid(spec, t));
  const double w = opposite_mass(p);
  if (!(w > 1e-12 * p.Z)) throw DegenerateSupport("opposite-side probability mass is negligible");
  Eigen::ArrayXd out(y_points.size());
  for (Eigen::Index i = 0; i < y_points.size(); ++i)
    out[i] = conditional_unnorm(p, y_points[i]) / w;
  return out;
}

Pattern conditional_pattern_selective(const WaveFunctionSpec& spec, double t,
                                      const Eigen::ArrayXd& edges) {
  const Partials p = make_partials(spec, t, default_grid(spec, t));
  const double w = opposite_mass(p);
  if (!(w > 1e-12 * p.Z)) throw DegenerateSupport("opposite-side probability mass is negligible");
  return curve_pattern(edges, [&](double y) { return conditional_unnorm(p, y) / w; });
}

std::vector<double> local_maxima(const Eigen::ArrayXd& y, const Eigen::ArrayXd& f) {
  if (y.size() != f.size()) throw GridMismatch("curve arrays differ in length");
  std::vector<double> out;
  for (Eigen::Index i = 1; i + 1 < f.size(); ++i)
    if (f[i] > f[i - 1] && f[i] > f[i + 1]) out.push_back(y[i]);
  return out;
}

std::vector<double> local_minima(const Eigen::ArrayXd& y, const Eigen::ArrayXd& f) {
  return local_maxima(y, Eigen::ArrayXd(-f));
}

double measured_fringe_period(const WaveFunctionSpec& spec, double t) {
  const QuadratureGrid g = default_grid(spec, t);
  const int n = 32768;
  const Eigen::ArrayXd y = Eigen::ArrayXd::LinSpaced(n, g.y_min, g.y_max);
  const Eigen::ArrayXd f = marginal_density(spec, t, y);
  const double fmax = f.maxCoeff();
  // Treat the far tail as flat so roundoff there cannot fake extrema.
  Eigen::ArrayXd clipped = f.max(1e-13 * fmax);
  std::vector<double> minima;
  const double h = y[1] - y[0];
  for (Eigen::Index i = 1; i + 1 < clipped.size(); ++i) {
    if (clipped[i] < clipped[i - 1] && clipped[i] < clipped[i + 1]) {
      // Parabolic refinement of the minimum position.
      const double denom = clipped[i - 1] - 2.0 * clipped[i] + clipped[i + 1];
      const double shift = denom > 0 ? 0.5 * (clipped[i - 1] - clipped[i + 1]) / denom : 0.0;
      minima.push_back(y[i] + shift * h);
    }
  }
  if (minima.size() < 2) return 0.0;
  double acc = 0.0;
  for (std::size_t i = 1; i < minima.size(); ++i) acc += minima[i] - minima[i - 1];
  return acc / static_cast<double>(minima.size() - 1);
}

}  // namespace twinslit
