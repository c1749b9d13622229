#include "twinslit/ensemble.hpp"

#include <algorithm>
#include <cmath>
#include <thread>

#include "twinslit/errors.hpp"
#include "twinslit/rng.hpp"
#include "twinslit/sampling.hpp"

namespace twinslit {

namespace {

constexpr int kCdfPoints = 1 << 14;

/// Conditional density of the relative coordinate r = y1 - y0 given the com
/// y0. The two-particle dynamics separates in (com, relative), so this table
/// does not depend on y0: tabulate at y0 = 0 and shift.
TabulatedInverseCdf entangled_relative_cdf(const WaveFunctionSpec& spec) {
  const double Y = spec.config.slit_offset_Y;
  const double span = Y + 8.0 * spec.config.sigma0;
  Eigen::ArrayXd grid = Eigen::ArrayXd::LinSpaced(kCdfPoints, -span, span);
  Eigen::ArrayXd dens(kCdfPoints);
  for (int i = 0; i < kCdfPoints; ++i)
    dens[i] = density(spec, {grid[i], -grid[i], 0.0});
  return TabulatedInverseCdf(std::move(grid), dens);
}

/// Single-particle two-slit density |packet_A + packet_B|^2 at t = 0.
TabulatedInverseCdf single_particle_cdf(const WaveFunctionSpec& spec) {
  const double Y = spec.config.slit_offset_Y;
  const double span = Y + 8.0 * spec.config.sigma0;
  Eigen::ArrayXd grid = Eigen::ArrayXd::LinSpaced(kCdfPoints, -span, span);
  Eigen::ArrayXd dens(kCdfPoints);
  const PacketCache c = make_packet_cache(spec, 0.0);
  for (int i = 0; i < kCdfPoints; ++i)
    dens[i] = std::norm(packet(c, Slit::A, grid[i]) + packet(c, Slit::B, grid[i]));
  return TabulatedInverseCdf(std::move(grid), dens);
}

InitialSample draw_one(const WaveFunctionSpec& spec, const SourceSpec& source,
                       const TabulatedInverseCdf& cdf, SubstreamRng& rng) {
  InitialSample s;
  if (spec.kind == WaveKind::UnentangledProduct) {
    double shift1 = source.y0_mean, shift2 = source.y0_mean;
    if (source.shift_mode == SourceShift::SplitPair) {
      shift1 = 0.0;
      shift2 = 2.0 * source.y0_mean;
    }
    s.y1 = cdf.sample(rng.uniform()) + shift1;
    s.y2 = cdf.sample(rng.uniform()) + shift2;
  } else {
    const double y0 =
        source.y0_mean + (source.y0_spread > 0 ? source.y0_spread * rng.normal() : 0.0);
    const double r = cdf.sample(rng.uniform());
    s.y1 = y0 + r;
    s.y2 = y0 - r;  // == 2*y0 - y1, exactly
  }
  s.y0 = 0.5 * (s.y1 + s.y2);
  return s;
}

}  // namespace

std::vector<InitialSample> sample_initial(const WaveFunctionSpec& spec, const SourceSpec& source,
                                          std::size_t n) {
  if (n < 1) throw ConfigError("sample_initial requires n >= 1");
  if (source.y0_spread < 0) throw ConfigError("y0_spread must be >= 0");
  const TabulatedInverseCdf cdf = spec.kind == WaveKind::UnentangledProduct
                                      ? single_particle_cdf(spec)
                                      : entangled_relative_cdf(spec);
  std::vector<InitialSample> out;
  out.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    SubstreamRng rng(source.rng_seed, i);
    out.push_back(draw_one(spec, source, cdf, rng));
  }
  return out;
}

EnsembleResult run_ensemble(const WaveFunctionSpec& spec, const SourceSpec& source, std::size_t n,
                            const EnsembleOptions& opts) {
  if (n < 1) throw ConfigError("run_ensemble requires n >= 1");
  const TabulatedInverseCdf cdf = spec.kind == WaveKind::UnentangledProduct
                                      ? single_particle_cdf(spec)
                                      : entangled_relative_cdf(spec);
  const double t_end = spec.kin.t_D;

  EnsembleResult result;
  result.records.resize(n);

  IntegratorOptions iopts;
  iopts.tol = opts.tol;
  iopts.record_samples = false;
  iopts.node_epsilon = opts.node_epsilon;

  auto work = [&](std::size_t lo, std::size_t hi) {
    for (std::size_t i = lo; i < hi; ++i) {
      SubstreamRng rng(source.rng_seed, i);
      const InitialSample init = draw_one(spec, source, cdf, rng);
      const Trajectory traj =
          integrate_trajectory(spec, {init.y1, init.y2, 0.0}, t_end, iopts);
      DetectionRecord& rec = result.records[i];
      rec.trajectory_id = i;
      rec.status = traj.status;
      rec.y0_initial = init.y0;
      rec.y1_initial = init.y1;
      rec.y2_initial = init.y2;
      const ConfigurationPoint term = traj.terminal();
      rec.y1_final = term.y1;
      rec.y2_final = term.y2;
      rec.t_arrival = term.t;
      rec.sign_changes_y1 = traj.sign_changes_y1;
      rec.sign_changes_y2 = traj.sign_changes_y2;
      rec.min_density_seen = traj.min_density_seen;
    }
  };

  int workers = opts.workers > 0 ? opts.workers
                                 : std::max(1u, std::thread::hardware_concurrency());
  workers = static_cast<int>(std::min<std::size_t>(workers, n));
  if (workers <= 1) {
    work(0, n);
  } else {
    std::vector<std::thread> pool;
    const std::size_t chunk = (n + workers - 1) / workers;
    for (int w = 0; w < workers; ++w) {
      const std::size_t lo = w * chunk;
      const std::size_t hi = std::min(n, lo + chunk);
      if (lo >= hi) break;
      pool.emplace_back(work, lo, hi);
    }
    for (auto& th : pool) th.join();
  }

  for (const auto& rec : result.records) {
    switch (rec.status) {
      case TrajectoryStatus::Completed: ++result.completed; break;
      case TrajectoryStatus::NodeAbort: ++result.node_aborts; break;
      case TrajectoryStatus::StepLimitAbort: ++result.step_limit_aborts; break;
    }
  }
  const double aborted = static_cast<double>(n - result.completed) / static_cast<double>(n);
  if (aborted > opts.abort_quota)
    throw AbortQuotaExceeded("aborted trajectory fraction " + std::to_string(aborted) +
                             " exceeds quota");
  return result;
}

std::vector<DetectionRecord> selective_filter(const std::vector<DetectionRecord>& records) {
  std::vector<DetectionRecord> kept;
  kept.reserve(records.size());
  for (const auto& r : records) {
    if (r.status != TrajectoryStatus::Completed) continue;
    if (r.y1_final * r.y2_final < 0) kept.push_back(r);
  }
  return kept;
}

Eigen::ArrayXd Pattern::normalized_density() const {
  const double total = counts.sum();
  if (total <= 0 || bin_width <= 0) return Eigen::ArrayXd::Zero(counts.size());
  return counts / (total * bin_width);
}

Pattern empty_pattern(double bin_width, double lo, double hi) {
  if (!(bin_width > 0) || !(hi > lo)) throw ConfigError("invalid histogram range");
  const int bins = std::max(1, static_cast<int>(std::ceil((hi - lo) / bin_width)));
  Pattern p;
  p.bin_width = bin_width;
  p.edges = Eigen::ArrayXd::LinSpaced(bins + 1, lo, lo + bins * bin_width);
  p.counts = Eigen::ArrayXd::Zero(bins);
  p.total_weight = 0.0;
  return p;
}

Pattern make_histogram(const std::vector<DetectionRecord>& records, PatternProjection projection,
                       double bin_width, double lo, double hi) {
  Pattern p = empty_pattern(bin_width, lo, hi);
  auto add = [&](double y) {
    if (y < lo || y >= p.edges[p.bins()]) return;
    const int i = std::min(p.bins() - 1, static_cast<int>((y - lo) / bin_width));
    p.counts[i] += 1.0;
  };
  for (const auto& r : records) {
    if (r.status != TrajectoryStatus::Completed) continue;
    if (projection == PatternProjection::Y1 || projection == PatternProjection::BothPooled)
      add(r.y1_final);
    if (projection == PatternProjection::Y2 || projection == PatternProjection::BothPooled)
      add(r.y2_final);
  }
  p.total_weight = p.counts.sum();
  return p;
}

DivergenceReport compare_patterns(const Pattern& observed, const Pattern& expected) {
  if (observed.edges.size() != expected.edges.size() ||
      ((observed.edges - expected.edges).abs() > 1e-12 * (1.0 + observed.edges.abs())).any())
    throw GridMismatch("patterns live on different grids");
  DivergenceReport rep;
  rep.ks = ks_statistic(observed.counts, expected.counts);
  rep.tv = total_variation(observed.counts, expected.counts);
  const ChiSquareResult chi = chi_square_gof(observed.counts, expected.counts);
  rep.chi2 = chi.statistic;
  rep.chi2_dof = chi.dof;
  rep.chi2_p_value = chi.p_value;
  return rep;
}

GapInterval measure_gap(const Pattern& pattern, double peak_fraction) {
  if (!(peak_fraction > 0 && peak_fraction < 1))
    throw ConfigError("peak_fraction must lie in (0, 1)");
  const Eigen::ArrayXd dens = pattern.counts;  // threshold is relative; counts suffice
  const double peak = dens.maxCoeff();
  const double threshold = peak_fraction * peak;
  GapInterval best;
  int prev_high = -1;
  for (int i = 0; i < pattern.bins(); ++i) {
    if (dens[i] >= threshold) {
      if (prev_high >= 0 && i - prev_high > 1) {
        const double length = (i - prev_high - 1) * pattern.bin_width;
        if (length > best.length) {
          best.length = length;
          best.center = 0.5 * (pattern.edges[prev_high + 1] + pattern.edges[i]);
        }
      }
      prev_high = i;
    }
  }
  return best;
}

}  // namespace twinslit
