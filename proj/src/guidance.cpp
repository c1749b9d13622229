#include "twinslit/guidance.hpp"

#include <algorithm>
#include <cmath>

#include "twinslit/errors.hpp"

namespace twinslit {

std::optional<VelocityPair> try_velocity(const WaveFunctionSpec& spec, const ConfigurationPoint& p,
                                         double node_epsilon) {
  const PacketCache c = make_packet_cache(spec, p.t);
  const double hbar_m = spec.config.hbar / spec.config.mass;

  if (spec.kind == WaveKind::UnentangledProduct) {
    const Complex a1 = packet(c, Slit::A, p.y1);
    const Complex b1 = packet(c, Slit::B, p.y1);
    const Complex a2 = packet(c, Slit::A, p.y2);
    const Complex b2 = packet(c, Slit::B, p.y2);
    const Complex s1 = a1 + b1;
    const Complex s2 = a2 + b2;
    // Node proximity means destructive cancellation, not a small envelope:
    // compare each superposition against the magnitudes of its terms, so
    // trajectories started in the Gaussian tail keep a well-defined velocity.
    const double scale1 = std::abs(a1) + std::abs(b1);
    const double scale2 = std::abs(a2) + std::abs(b2);
    if (std::abs(s1) <= node_epsilon * scale1 || std::abs(s2) <= node_epsilon * scale2)
      return std::nullopt;
    VelocityPair v;
    v.v1 = hbar_m *
           std::imag((packet_dlog(c, Slit::A, p.y1) * a1 + packet_dlog(c, Slit::B, p.y1) * b1) / s1);
    v.v2 = hbar_m *
           std::imag((packet_dlog(c, Slit::A, p.y2) * a2 + packet_dlog(c, Slit::B, p.y2) * b2) / s2);
    return v;
  }

  const double sign = spec.kind == WaveKind::EntangledSymmetric ? 1.0 : -1.0;
  const Complex t1 = packet(c, Slit::A, p.y1) * packet(c, Slit::B, p.y2);
  const Complex t2 = packet(c, Slit::A, p.y2) * packet(c, Slit::B, p.y1);
  const Complex w = t1 + sign * t2;
  const double scale = std::abs(t1) + std::abs(t2);
  if (std::abs(w) <= node_epsilon * scale) return std::nullopt;
  VelocityPair v;
  v.v1 = hbar_m * std::imag((packet_dlog(c, Slit::A, p.y1) * t1 +
                             sign * packet_dlog(c, Slit::B, p.y1) * t2) /
                            w);
  v.v2 = hbar_m * std::imag((packet_dlog(c, Slit::B, p.y2) * t1 +
                             sign * packet_dlog(c, Slit::A, p.y2) * t2) /
                            w);
  return v;
}

VelocityPair velocity(const WaveFunctionSpec& spec, const ConfigurationPoint& p,
                      double node_epsilon) {
  auto v = try_velocity(spec, p, node_epsilon);
  if (!v) throw NodeProximity("velocity undefined near a wave-function node");
  return *v;
}

double com_velocity(const WaveFunctionSpec& spec, double y, double t) {
  const PhysicalConfig& c = spec.config;
  if (spec.kind == WaveKind::UnentangledProduct) {
    const bool ky_ok = std::abs(c.k_y) * c.sigma0 <= 0.1;
    const bool y_ok = c.slit_offset_Y / c.sigma0 <= 0.1;
    if (!ky_ok || !y_ok)
      throw RegimeViolation("unentangled com velocity requires k_y ~ 0 and Y << sigma0");
  }
  const double a = c.hbar / (2.0 * c.mass * c.sigma0 * c.sigma0);
  return a * a * y * t / (1.0 + a * a * t * t);
}

namespace {

// Dormand-Prince 4(5) coefficients.
constexpr double kC[7] = {0.0, 1.0 / 5, 3.0 / 10, 4.0 / 5, 8.0 / 9, 1.0, 1.0};
constexpr double kA[7][6] = {
    {},
    {1.0 / 5},
    {3.0 / 40, 9.0 / 40},
    {44.0 / 45, -56.0 / 15, 32.0 / 9},
    {19372.0 / 6561, -25360.0 / 2187, 64448.0 / 6561, -212.0 / 729},
    {9017.0 / 3168, -355.0 / 33, 46732.0 / 5247, 49.0 / 176, -5103.0 / 18656},
    {35.0 / 384, 0.0, 500.0 / 1113, 125.0 / 192, -2187.0 / 6784, 11.0 / 84},
};
constexpr double kB5[7] = {35.0 / 384,      0.0,  500.0 / 1113, 125.0 / 192,
                           -2187.0 / 6784, 11.0 / 84, 0.0};
constexpr double kB4[7] = {5179.0 / 57600,    0.0,          7571.0 / 16695, 393.0 / 640,
                           -92097.0 / 339200, 187.0 / 2100, 1.0 / 40};

struct State {
  double y1, y2;
};

}  // namespace

Trajectory integrate_trajectory(const WaveFunctionSpec& spec, const ConfigurationPoint& initial,
                                double t_end, const IntegratorOptions& opts) {
  if (initial.t != 0.0) throw ConfigError("trajectory must start at t = 0");
  if (!(opts.tol >= 1e-12 && opts.tol <= 1e-3))
    throw ConfigError("integrator tol must lie in [1e-12, 1e-3]");

  Trajectory traj;
  traj.samples.push_back(initial);

  const double h_min = 1e-12 * t_end;
  const double h_max = t_end / 100.0;
  const double atol = opts.tol * spec.config.sigma0;
  const double rtol = opts.tol;

  State y{initial.y1, initial.y2};
  double t = 0.0;
  double h = h_max;
  int next_output = 1;
  const double out_dt = t_end / opts.output_samples;

  const double peak0 = peak_composite_amplitude(spec, 0.0);
  {
    const double d0 = density(spec, initial);
    traj.min_density_seen = d0 / (peak0 * peak0);
  }

  auto eval = [&](double tt, const State& s, State& out) -> bool {
    auto v = try_velocity(spec, {s.y1, s.y2, tt}, opts.node_epsilon);
    if (!v) return false;
    out = {v->v1, v->v2};
    return true;
  };

  long steps = 0;
  while (t < t_end) {
    if (++steps > opts.max_steps) {
      traj.status = TrajectoryStatus::StepLimitAbort;
      return traj;
    }
    double h_try = std::min({h, h_max, t_end - t});
    if (opts.record_samples && next_output <= opts.output_samples) {
      const double t_next = next_output * out_dt;
      h_try = std::min(h_try, t_next - t);
    }
    h_try = std::max(h_try, h_min);

    State k[7];
    bool node_hit = false;
    if (!eval(t, y, k[0])) node_hit = true;
    State y5{}, y4{};
    if (!node_hit) {
      State stage;
      for (int i = 1; i < 7 && !node_hit; ++i) {
        stage = y;
        for (int j = 0; j < i; ++j) {
          stage.y1 += h_try * kA[i][j] * k[j].y1;
          stage.y2 += h_try * kA[i][j] * k[j].y2;
        }
        if (!eval(t + kC[i] * h_try, stage, k[i])) node_hit = true;
      }
      if (!node_hit) {
        y5 = y;
        y4 = y;
        for (int i = 0; i < 7; ++i) {
          y5.y1 += h_try * kB5[i] * k[i].y1;
          y5.y2 += h_try * kB5[i] * k[i].y2;
          y4.y1 += h_try * kB4[i] * k[i].y1;
          y4.y2 += h_try * kB4[i] * k[i].y2;
        }
      }
    }

    if (node_hit) {
      ++traj.node_events;
      if (h_try <= h_min * 1.0000001) {
        traj.status = TrajectoryStatus::NodeAbort;
        return traj;
      }
      h = 0.5 * h_try;
      continue;
    }

    const double s1 = atol + rtol * std::max(std::abs(y.y1), std::abs(y5.y1));
    const double s2 = atol + rtol * std::max(std::abs(y.y2), std::abs(y5.y2));
    const double e1 = (y5.y1 - y4.y1) / s1;
    const double e2 = (y5.y2 - y4.y2) / s2;
    const double err = std::sqrt(0.5 * (e1 * e1 + e2 * e2));

    if (err <= 1.0 || h_try <= h_min * 1.0000001) {
      // accept
      if ((y.y1 > 0 && y5.y1 < 0) || (y.y1 < 0 && y5.y1 > 0)) ++traj.sign_changes_y1;
      if ((y.y2 > 0 && y5.y2 < 0) || (y.y2 < 0 && y5.y2 > 0)) ++traj.sign_changes_y2;
      y = y5;
      t += h_try;
      const double dens = density(spec, {y.y1, y.y2, t});
      const double peak = peak_composite_amplitude(spec, t);
      traj.min_density_seen = std::min(traj.min_density_seen, dens / (peak * peak));
      if (opts.record_samples && next_output <= opts.output_samples &&
          t >= next_output * out_dt - 1e-12 * t_end) {
        traj.samples.push_back({y.y1, y.y2, t});
        ++next_output;
      }
    }
    const double factor =
        err > 0 ? std::clamp(0.9 * std::pow(err, -0.2), 0.2, 5.0) : 5.0;
    h = std::clamp(h_try * factor, h_min, h_max);
  }

  if (traj.samples.back().t < t_end) traj.samples.push_back({y.y1, y.y2, t_end});
  traj.status = TrajectoryStatus::Completed;
  return traj;
}

const char* to_string(TrajectoryStatus status) {
  switch (status) {
    case TrajectoryStatus::Completed: return "completed";
    case TrajectoryStatus::NodeAbort: return "node-abort";
    case TrajectoryStatus::StepLimitAbort: return "step-limit-abort";
  }
  return "?";
}

}  // namespace twinslit
