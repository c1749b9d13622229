// Acceptance gate: one pass/fail line per criterion, nonzero exit on failure.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include <unistd.h>

#include <nlohmann/json.hpp>

#include "twinslit/ensemble.hpp"
#include "twinslit/guidance.hpp"
#include "twinslit/io.hpp"
#include "twinslit/oracles.hpp"
#include "twinslit/rng.hpp"
#include "twinslit/scenario.hpp"
#include "twinslit/sqm.hpp"

using namespace twinslit;
namespace fs = std::filesystem;

namespace {

struct Check {
  bool ok = true;
  std::string detail;
  void fail(const std::string& why) {
    ok = false;
    if (!detail.empty()) detail += "; ";
    detail += why;
  }
  void require(bool cond, const std::string& why) {
    if (!cond) fail(why);
  }
};

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.6g", v);
  return buf;
}

WaveFunctionSpec spec_of(WaveKind kind, double Y = 1.0, double D = 2.0) {
  PhysicalConfig c;
  c.slit_offset_Y = Y;
  c.screen_distance_D = D;
  return make_wavefunction_spec(kind, c);
}

SourceSpec source_of(WaveKind kind, double mean = 0.0, double spread = 0.0,
                     std::uint64_t seed = 2024) {
  SourceSpec s;
  s.wave_kind = kind;
  s.y0_mean = mean;
  s.y0_spread = spread;
  s.rng_seed = seed;
  return s;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// 1. Entangled pairs with a pinned center of mass arrive at exactly opposite
//    points: |y1 + y2| at the screen below 1e-6 sigma0 for every trajectory.
Check criterion_1() {
  Check c;
  for (WaveKind kind : {WaveKind::EntangledSymmetric, WaveKind::EntangledAntisymmetric}) {
    const auto spec = spec_of(kind);
    const EnsembleResult res = run_ensemble(spec, source_of(kind), 10000);
    double worst = 0.0;
    for (const auto& r : res.records)
      worst = std::max(worst, std::abs(r.y1_final + r.y2_final));
    c.require(res.completed == res.records.size(),
              std::string(to_string(kind)) + ": not all trajectories completed");
    c.require(worst <= 1e-6, std::string(to_string(kind)) + ": max |y1+y2| = " + fmt(worst));
  }
  return c;
}

// 2. The pair's center of mass follows the closed-form spreading path to a
//    relative accuracy of 1e-6 regardless of the relative coordinate.
Check criterion_2() {
  Check c;
  const auto spec = spec_of(WaveKind::EntangledSymmetric);
  SubstreamRng rng(11, 0);
  double worst = 0.0;
  for (double y0 : {0.1, 0.2, 0.5}) {
    const double oracle = com_path(spec.config, y0, spec.kin.t_D);
    for (int i = 0; i < 34; ++i) {
      const double off = 0.05 + 1.45 * rng.uniform();
      const Trajectory traj =
          integrate_trajectory(spec, {y0 + off, y0 - off, 0.0}, spec.kin.t_D);
      if (traj.status != TrajectoryStatus::Completed) {
        c.fail("trajectory aborted at y0=" + fmt(y0));
        continue;
      }
      const double com = 0.5 * (traj.terminal().y1 + traj.terminal().y2);
      worst = std::max(worst, std::abs(com - oracle) / std::abs(oracle));
    }
  }
  c.require(worst <= 1e-6, "max relative com deviation = " + fmt(worst));
  return c;
}

// 3. Newton's law for the center of mass: m y'' equals minus the gradient of
//    the center-of-mass quantum potential along the path.
Check criterion_3() {
  Check c;
  const PhysicalConfig cfg;
  SubstreamRng rng(12, 0);
  double worst = 0.0;
  for (int i = 0; i < 20; ++i) {
    const double y0 = 0.5 + 1.5 * rng.uniform();
    const double t = 0.2 + 2.8 * rng.uniform();
    const double ht = 1e-3;
    auto y_at = [&](double tt) { return com_path(cfg, y0, tt); };
    const double acc = (-y_at(t + 2 * ht) + 16 * y_at(t + ht) - 30 * y_at(t) +
                        16 * y_at(t - ht) - y_at(t - 2 * ht)) /
                       (12 * ht * ht);
    const double y = y_at(t);
    const double hy = 1e-6 * y;
    const double force = -(quantum_potential_com_at(cfg, y0, y + hy) -
                           quantum_potential_com_at(cfg, y0, y - hy)) /
                         (2 * hy);
    worst = std::max(worst, std::abs(cfg.mass * acc - force) / std::abs(force));
  }
  c.require(worst <= 1e-6, "max |m y'' + dQ/dy| / |dQ/dy| = " + fmt(worst));
  return c;
}

// 4. Unentangled trajectories never cross the symmetry axis.
Check criterion_4() {
  Check c;
  const auto spec = spec_of(WaveKind::UnentangledProduct, 0.05);
  const EnsembleResult res =
      run_ensemble(spec, source_of(WaveKind::UnentangledProduct), 100000);
  long crossings = 0;
  for (const auto& r : res.records) crossings += r.sign_changes_y1 + r.sign_changes_y2;
  c.require(crossings == 0, "axis crossings = " + std::to_string(crossings));
  c.require(res.completed >= 99000,
            "completed only " + std::to_string(res.completed) + " of 100000");
  return c;
}

// 5. Equivariance: an ensemble drawn from |psi(0)|^2 reproduces the quantum
//    arrival pattern (KS < 0.02, chi^2 p > 0.01 against the marginal).
Check criterion_5() {
  Check c;
  const double eq_spread = 1.0 / std::sqrt(2.0);  // com width of |psi(0)|^2
  for (WaveKind kind : {WaveKind::EntangledSymmetric, WaveKind::EntangledAntisymmetric,
                        WaveKind::UnentangledProduct}) {
    const auto spec = spec_of(kind);
    const SourceSpec src = source_of(
        kind, 0.0, kind == WaveKind::UnentangledProduct ? 0.0 : eq_spread, 31);
    const EnsembleResult res = run_ensemble(spec, src, 100000);
    const auto [lo, hi] = arrival_range(spec, src);
    const Pattern bqm = make_histogram(res.records, PatternProjection::BothPooled, 0.1, lo, hi);
    const Pattern sqm = marginal_pattern(spec, spec.kin.t_D, bqm.edges);
    const DivergenceReport rep = compare_patterns(bqm, sqm);
    const std::string tag = to_string(kind);
    c.require(rep.ks < 0.02, tag + ": KS = " + fmt(rep.ks));
    c.require(rep.chi2_p_value > 0.01, tag + ": chi2 p = " + fmt(rep.chi2_p_value));
  }
  return c;
}

// 6. Velocity-field structure: for both entangled kinds the field is odd
//    under reflection through the axis, and for the product state each
//    particle's velocity is independent of its partner.
Check criterion_6() {
  Check c;
  SubstreamRng rng(13, 0);
  for (WaveKind kind : {WaveKind::EntangledSymmetric, WaveKind::EntangledAntisymmetric}) {
    const auto spec = spec_of(kind);
    double worst = 0.0;
    int checked = 0;
    while (checked < 1000) {
      const ConfigurationPoint p{6 * rng.uniform() - 3, 6 * rng.uniform() - 3,
                                 2 * rng.uniform()};
      const auto v = try_velocity(spec, p);
      const auto vr = try_velocity(spec, {-p.y1, -p.y2, p.t});
      if (!v || !vr) continue;
      const double scale = std::max(1.0, std::abs(v->v1) + std::abs(v->v2));
      worst = std::max(worst, std::abs(vr->v1 + v->v1) / scale);
      worst = std::max(worst, std::abs(vr->v2 + v->v2) / scale);
      ++checked;
    }
    c.require(worst <= 1e-10,
              std::string(to_string(kind)) + ": odd-parity residual = " + fmt(worst));
  }
  const auto prod = spec_of(WaveKind::UnentangledProduct, 0.05);
  double worst = 0.0;
  int checked = 0;
  while (checked < 1000) {
    const double y1 = 6 * rng.uniform() - 3;
    const double t = 2 * rng.uniform();
    const auto a = try_velocity(prod, {y1, 6 * rng.uniform() - 3, t});
    const auto b = try_velocity(prod, {y1, 6 * rng.uniform() - 3, t});
    if (!a || !b) continue;
    worst = std::max(worst, std::abs(a->v1 - b->v1));
    ++checked;
  }
  c.require(worst <= 1e-12, "product-state partner dependence = " + fmt(worst));
  return c;
}

// 7. The analytic velocity matches a finite-difference phase gradient to 1e-6
//    wherever the density is non-negligible.
Check criterion_7() {
  Check c;
  SubstreamRng rng(14, 0);
  for (WaveKind kind : {WaveKind::EntangledSymmetric, WaveKind::EntangledAntisymmetric,
                        WaveKind::UnentangledProduct}) {
    const auto spec = spec_of(kind);
    double worst = 0.0;
    int checked = 0;
    while (checked < 100) {
      const ConfigurationPoint p{6 * rng.uniform() - 3, 6 * rng.uniform() - 3,
                                 2 * rng.uniform()};
      const double peak = peak_composite_amplitude(spec, p.t);
      if (density(spec, p) < 1e-8 * peak * peak) continue;
      const auto v = try_velocity(spec, p);
      if (!v) continue;
      const double h = 1e-5, hm = spec.config.hbar / spec.config.mass;
      const double fd1 =
          hm * std::arg(psi(spec, {p.y1 + h, p.y2, p.t}) / psi(spec, {p.y1 - h, p.y2, p.t})) /
          (2 * h);
      const double fd2 =
          hm * std::arg(psi(spec, {p.y1, p.y2 + h, p.t}) / psi(spec, {p.y1, p.y2 - h, p.t})) /
          (2 * h);
      const double scale = std::abs(fd1) + std::abs(fd2) + 1e-9;
      worst = std::max(worst, std::abs(v->v1 - fd1) / scale);
      worst = std::max(worst, std::abs(v->v2 - fd2) / scale);
      ++checked;
    }
    c.require(worst <= 1e-6,
              std::string(to_string(kind)) + ": velocity residual = " + fmt(worst));
  }
  return c;
}

// 8. The measured dark-fringe period in the far field agrees with the
//    analytic fringe spacing within 5%.
Check criterion_8() {
  Check c;
  const auto spec = spec_of(WaveKind::UnentangledProduct, 1.0, 40.0);  // tau = 20
  const double measured = measured_fringe_period(spec, spec.kin.t_D);
  const double oracle = fringe_spacing(spec.config, spec.kin.t_D);
  c.require(measured > 0.0, "no fringe minima found");
  if (measured > 0.0) {
    const double rel = std::abs(measured - oracle) / oracle;
    c.require(rel < 0.05, "period " + fmt(measured) + " vs " + fmt(oracle) +
                              " (rel " + fmt(rel) + ")");
  }
  return c;
}

// 9. Displaced-source selective detection: the trajectory pattern shows an
//    empty interval matching the far-field oracle within 25%, while the
//    quantum conditional density stays high inside it.
Check criterion_9(const fs::path& tmp) {
  Check c;
  RunManifest m = scenario_preset(Scenario::Fig3UnentangledShifted);
  m.n = 100000;
  m.out_dir = (tmp / "fig3").string();
  fs::create_directories(m.out_dir);
  nlohmann::json summary;
  const int code = run_scenario(m, RunMode::Compare, &summary);
  c.require(code == 0, "run exited with code " + std::to_string(code));
  if (!summary.contains("gap")) {
    c.fail("no gap section in summary");
    return c;
  }
  const double length = summary["gap"]["length"].get<double>();
  const double oracle = summary["gap"]["oracle_length"].get<double>();
  const double rel = std::abs(length - oracle) / oracle;
  c.require(rel <= 0.25,
            "gap " + fmt(length) + " vs oracle " + fmt(oracle) + " (rel " + fmt(rel) + ")");
  const double ratio = summary["gap"]["sqm_conditional_max_in_gap_over_peak"].get<double>();
  c.require(ratio >= 0.2, "conditional density in gap only " + fmt(ratio) + " of its peak");
  return c;
}

// 10. Joint detection probabilities agree with a direct Riemann sum.
Check criterion_10() {
  Check c;
  const auto spec = spec_of(WaveKind::EntangledSymmetric);
  const double t = 1.0;
  const double z = normalization(spec, t);
  SubstreamRng rng(15, 0);
  double worst = 0.0;
  for (int i = 0; i < 50; ++i) {
    const double yM = 6 * rng.uniform() - 3;
    const double yN = 6 * rng.uniform() - 3;
    const double delta = 0.05 + 0.45 * rng.uniform();
    const double p = joint_probability(spec, yM, yN, delta, t);
    double riemann = 0.0;
    const int nsub = 64;
    const double h = delta / nsub;
    for (int a = 0; a < nsub; ++a)
      for (int b = 0; b < nsub; ++b)
        riemann += density(spec, {yM + (a + 0.5) * h, yN + (b + 0.5) * h, t});
    riemann *= h * h / z;
    if (riemann < 1e-12) continue;  // skip bins with no support
    worst = std::max(worst, std::abs(p - riemann) / riemann);
  }
  c.require(worst <= 1e-4, "max relative deviation = " + fmt(worst));
  return c;
}

// 11. Bitwise reproducibility: the same manifest and seed give byte-identical
//     output files, independent of the worker count.
Check criterion_11(const fs::path& tmp) {
  Check c;
  RunManifest m = scenario_preset(Scenario::Fig1Entangled);
  m.n = 1000;
  m.workers = 1;
  m.out_dir = (tmp / "runA").string();
  fs::create_directories(m.out_dir);
  nlohmann::json ja;
  c.require(run_scenario(m, RunMode::Simulate, &ja) == 0, "run A failed");
  m.workers = 3;
  m.out_dir = (tmp / "runB").string();
  fs::create_directories(m.out_dir);
  nlohmann::json jb;
  c.require(run_scenario(m, RunMode::Simulate, &jb) == 0, "run B failed");
  for (const char* name : {"records.csv", "bqm_pattern.csv", "sqm_marginal.csv"}) {
    const std::string a = slurp(tmp / "runA" / name);
    const std::string b = slurp(tmp / "runB" / name);
    c.require(!a.empty(), std::string(name) + " empty");
    c.require(a == b, std::string(name) + " differs between worker counts");
  }
  return c;
}

}  // namespace

int main() {
  const fs::path tmp =
      fs::temp_directory_path() / ("twinslit-acceptance-" + std::to_string(::getpid()));
  fs::create_directories(tmp);

  std::vector<std::function<Check()>> criteria = {
      criterion_1,
      criterion_2,
      criterion_3,
      criterion_4,
      criterion_5,
      criterion_6,
      criterion_7,
      criterion_8,
      [&] { return criterion_9(tmp); },
      criterion_10,
      [&] { return criterion_11(tmp); },
  };

  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const auto start = std::chrono::steady_clock::now();
    Check c;
    try {
      c = criteria[i]();
    } catch (const std::exception& e) {
      c.fail(std::string("exception: ") + e.what());
    }
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::printf("ACCEPTANCE %zu: %s", i + 1, c.ok ? "PASS" : "FAIL");
    if (!c.ok) std::printf(" (%s)", c.detail.c_str());
    std::printf("  [%.1fs]\n", secs);
    std::fflush(stdout);
    if (!c.ok) ++failures;
  }

  std::error_code ec;
  fs::remove_all(tmp, ec);
  return failures == 0 ? 0 : 1;
}
