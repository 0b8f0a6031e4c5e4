#include "pcomp/front.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "pcomp/errors.hpp"

namespace pcomp {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

double sigmoid(double s) { return 1.0 / (1.0 + std::exp(-s)); }

struct LineFit {
  double slope = 0.0, intercept = 0.0, r2 = 0.0, stderr_slope = 0.0;
};

LineFit fit_line(const std::vector<double>& t, const std::vector<double>& x) {
  const auto n = static_cast<double>(t.size());
  double mt = 0.0, mx = 0.0;
  for (std::size_t i = 0; i < t.size(); ++i) {
    mt += t[i];
    mx += x[i];
  }
  mt /= n;
  mx /= n;
  double stt = 0.0, stx = 0.0, sxx = 0.0;
  for (std::size_t i = 0; i < t.size(); ++i) {
    stt += (t[i] - mt) * (t[i] - mt);
    stx += (t[i] - mt) * (x[i] - mx);
    sxx += (x[i] - mx) * (x[i] - mx);
  }
  LineFit f;
  f.slope = stx / stt;
  f.intercept = mx - f.slope * mt;
  double ssr = 0.0;
  for (std::size_t i = 0; i < t.size(); ++i) {
    const double e = x[i] - (f.intercept + f.slope * t[i]);
    ssr += e * e;
  }
  f.r2 = sxx > 0.0 ? 1.0 - ssr / sxx : 0.0;
  f.stderr_slope = n > 2.0 ? std::sqrt(ssr / (n - 2.0) / stt) : 0.0;
  return f;
}

// State at time t by linear interpolation between the bracketing snapshots.
void interpolate(const FrontTrack& track, double t, std::vector<double>& u1,
                 std::vector<double>& u2) {
  const auto& ts = track.snapshot_times;
  auto it = std::upper_bound(ts.begin(), ts.end(), t);
  std::size_t hi = static_cast<std::size_t>(it - ts.begin());
  if (hi == 0) hi = 1;
  if (hi >= ts.size()) hi = ts.size() - 1;
  const std::size_t lo = hi - 1;
  const double w = (t - ts[lo]) / (ts[hi] - ts[lo]);
  const auto& a = track.snapshots[lo];
  const auto& b = track.snapshots[hi];
  u1.resize(a.u1.size());
  u2.resize(a.u1.size());
  for (std::size_t j = 0; j < u1.size(); ++j) {
    u1[j] = (1.0 - w) * a.u1[j] + w * b.u1[j];
    u2[j] = (1.0 - w) * a.u2[j] + w * b.u2[j];
  }
}

FrontProfile extract_profile(const FrontDomain& domain, const StatePair& state,
                             const StatePair& tiled) {
  const std::size_t m = domain.nodes_per_period, pin = domain.pin_nodes(), n = domain.size();
  const double dx = domain.dx();
  const double half = 0.5 * tiled.u1.max();
  double shift = 0.0;
  for (std::size_t j = n - pin - m; j >= pin + m; j -= m) {
    const double a = state.u1[j - m], b = state.u1[j];
    if (a >= half && b < half) {
      shift = static_cast<double>(j - m) * dx + static_cast<double>(m) * dx * (a - half) / (a - b);
      break;
    }
  }
  FrontProfile p;
  for (std::size_t j = pin; j < n - pin; ++j) {
    p.xi.push_back(static_cast<double>(j) * dx - shift);
    p.x.push_back(static_cast<double>(j % m) * dx);
    p.phi1.push_back(state.u1[j]);
    p.phi2.push_back(state.u2[j]);
  }
  return p;
}

}  // namespace

std::string to_string(FrontVerdict v) {
  switch (v) {
    case FrontVerdict::accepted: return "accepted";
    case FrontVerdict::zero_speed: return "zero_speed";
    case FrontVerdict::rejected: return "rejected";
    case FrontVerdict::inconclusive: return "inconclusive";
  }
  return "unknown";
}

FrontDomain::FrontDomain(double cell_length, std::size_t periods_, std::size_t nodes_per_period_,
                         std::size_t pin_periods_)
    : L(cell_length), periods(periods_), nodes_per_period(nodes_per_period_),
      pin_periods(pin_periods_) {
  if (!(L > 0.0)) throw ConfigError("front domain: cell length must be positive");
  if (periods < 50) throw ConfigError("front domain needs at least 50 periods");
  if (nodes_per_period < kMinNodes) throw ConfigError("front domain: too few nodes per period");
  if (pin_periods < 2 || 2 * pin_periods + 4 > periods)
    throw ConfigError("front domain: pinning zones must be at least 2 periods and leave room");
}

StatePair tile_extinction(const FrontDomain& domain, const ExtinctionStates& cell) {
  const std::size_t m = domain.nodes_per_period;
  if (cell.u1.size() != m || cell.u2.size() != m)
    throw UsageError("tile_extinction: cell states do not match nodes per period");
  const PeriodicGrid grid = domain.grid();
  std::vector<double> u1(domain.size()), u2(domain.size());
  for (std::size_t j = 0; j < u1.size(); ++j) {
    u1[j] = cell.u1[j % m];
    u2[j] = cell.u2[j % m];
  }
  return {Field(grid, std::move(u1)), Field(grid, std::move(u2))};
}

StatePair front_initial_data(const FrontDomain& domain, const ExtinctionStates& cell,
                             const FrontInitialOptions& options) {
  const StatePair tiled = tile_extinction(domain, cell);
  const PeriodicGrid grid = domain.grid();
  const std::size_t n = domain.size(), pin = domain.pin_nodes();
  const double x0 = options.center_fraction * grid.length();
  const double w = options.width_fraction * domain.L;
  std::vector<double> u1(n), u2(n);
  for (std::size_t j = 0; j < n; ++j) {
    const double s = (grid.x(j) - x0) / w;
    u1[j] = options.species1 ? tiled.u1[j] * sigmoid(-s) : 0.0;
    u2[j] = options.species2 ? tiled.u2[j] * sigmoid(s) : 0.0;
    if (j < pin) {
      u1[j] = tiled.u1[j];
      u2[j] = 0.0;
    } else if (j >= n - pin) {
      u1[j] = 0.0;
      u2[j] = tiled.u2[j];
    }
  }
  return {Field(grid, std::move(u1)), Field(grid, std::move(u2))};
}

double level_position(const FrontDomain& domain, const StatePair& state, const StatePair& tiled,
                      double level, int species) {
  const std::size_t n = domain.size(), pin = domain.pin_nodes();
  const double dx = domain.dx();
  if (species == 1) {
    auto ratio = [&](std::size_t j) { return state.u1[j] / tiled.u1[j]; };
    for (std::size_t j = n - pin - 1; j + 1 > pin; --j) {
      if (ratio(j) >= level) {
        if (j + 1 >= n - pin || j < pin + 1) return kNaN;
        const double a = ratio(j), b = ratio(j + 1);
        return (static_cast<double>(j) + (a - level) / (a - b)) * dx;
      }
    }
    return kNaN;
  }
  if (species == 2) {
    auto ratio = [&](std::size_t j) { return state.u2[j] / tiled.u2[j]; };
    for (std::size_t j = pin; j < n - pin; ++j) {
      if (ratio(j) >= level) {
        if (j <= pin || j + 2 > n - pin) return kNaN;
        const double a = ratio(j), b = ratio(j - 1);
        return (static_cast<double>(j) - (a - level) / (a - b)) * dx;
      }
    }
    return kNaN;
  }
  throw UsageError("level_position: species must be 1 or 2");
}

FrontResult measure_speed(const FrontTrack& track, const FrontDomain& domain,
                          const StatePair& tiled, const SystemParams& params,
                          const SpeedOptions& options) {
  FrontResult r;
  r.amplitude = std::max(tiled.u1.max(), tiled.u2.max());
  r.pulsation_residual = kNaN;
  if (track.times.size() < 2) {
    r.reason = "trajectory has fewer than two tracked times";
    return r;
  }
  const double t_last = track.times.back();
  r.window_start = options.discard_fraction * t_last;
  r.window_end = t_last;
  if (!track.snapshots.empty())
    r.profile = extract_profile(domain, track.snapshots.back(), tiled);

  const double needed = 10.0 * domain.L * domain.L / std::min(1.0, params.d);
  if (r.window_end - r.window_start < needed) {
    r.reason = "tracking window shorter than 10 L^2 / min(1, d) = " + std::to_string(needed);
    return r;
  }
  std::vector<double> t, x;
  for (std::size_t i = 0; i < track.times.size(); ++i) {
    if (track.times[i] < r.window_start) continue;
    if (std::isnan(track.positions[i])) {
      r.reason = "level set left the free region at t = " + std::to_string(track.times[i]);
      return r;
    }
    t.push_back(track.times[i]);
    x.push_back(track.positions[i]);
  }
  if (t.size() < 10) {
    r.reason = "fewer than 10 tracked positions in the window";
    return r;
  }
  const LineFit fit = fit_line(t, x);
  r.c = fit.slope;
  r.fit_r2 = fit.r2;
  r.slope_stderr = fit.stderr_slope;

  if (std::abs(r.c) * (r.window_end - r.window_start) < domain.dx() ||
      std::abs(r.c) < 10.0 * r.slope_stderr) {
    r.verdict = FrontVerdict::zero_speed;
    r.reason = "speed indistinguishable from zero";
    return r;
  }
  if (r.fit_r2 < options.min_r2) {
    r.verdict = FrontVerdict::rejected;
    r.reason = "level-set trajectory is not linear (R^2 below threshold)";
    return r;
  }

  const double tau = domain.L / std::abs(r.c);
  const auto& ts = track.snapshot_times;
  std::vector<std::size_t> refs;
  for (std::size_t i = 0; i < ts.size(); ++i)
    if (ts[i] >= r.window_start && ts[i] + tau <= ts.back()) refs.push_back(i);
  if (refs.empty()) {
    r.reason = "one pulsation period L/|c| exceeds the recorded window";
    return r;
  }
  const std::size_t stride = std::max<std::size_t>(1, refs.size() / 20);
  const std::size_t m = domain.nodes_per_period, pin = domain.pin_nodes(), n = domain.size();
  std::vector<double> later1, later2;
  double residual = 0.0;
  for (std::size_t q = 0; q < refs.size(); q += stride) {
    const StatePair& now = track.snapshots[refs[q]];
    interpolate(track, ts[refs[q]] + tau, later1, later2);
    for (std::size_t j = pin + m; j + m < n - pin; ++j) {
      const std::size_t src = r.c > 0.0 ? j - m : j + m;
      residual = std::max(residual, std::abs(later1[j] - now.u1[src]));
      residual = std::max(residual, std::abs(later2[j] - now.u2[src]));
    }
  }
  r.pulsation_residual = residual;
  if (residual > 1e-2 * r.amplitude) {
    r.verdict = FrontVerdict::rejected;
    r.reason = "pulsating relation violated";
    return r;
  }
  r.verdict = FrontVerdict::accepted;
  return r;
}

FrontResult measure_speed(const Trajectory& trajectory, const FrontDomain& domain,
                          const StatePair& tiled, const SystemParams& params,
                          const SpeedOptions& options) {
  FrontTrack track;
  track.times = trajectory.times;
  track.snapshot_times = trajectory.times;
  track.snapshots = trajectory.states;
  for (const auto& s : trajectory.states)
    track.positions.push_back(level_position(domain, s, tiled, options.level, options.species));
  return measure_speed(track, domain, tiled, params, options);
}

FrontRun run_front(const ReactionSpec& spec, const SystemParams& params,
                   const FrontRunOptions& options) {
  const FrontDomain domain(params.L, options.periods, options.nodes_per_period);
  ExtinctionStates cell = compute_extinction_states(spec, params, domain.cell_grid());
  StatePair initial = front_initial_data(domain, cell, options.initial);
  FrontRun run{{}, {}, std::move(initial), std::move(cell), {}, 0.0};
  const StatePair tiled = tile_extinction(domain, run.cell);
  run.dt = options.dt > 0.0 ? options.dt : default_dt(spec, params, run.cell);
  const PeriodicGrid grid = domain.grid();
  const StatePair pin = run.final_state;
  Stepper stepper(grid, sample_tiled(spec, grid, params.L), params, run.dt, Scheme::imex,
                  Boundary::pinned, domain.pin_nodes(), &pin);

  const auto steps = static_cast<std::size_t>(std::ceil(options.t_end / run.dt - 1e-9));
  const std::size_t track_every = std::max<std::size_t>(1, steps / 4000);
  const std::size_t snap_every = std::max<std::size_t>(1, steps / std::max<std::size_t>(1, options.snapshots));
  std::vector<double> u1 = pin.u1.vector(), u2 = pin.u2.vector();
  auto record = [&](std::size_t s) {
    const double t = static_cast<double>(s) * run.dt;
    const StatePair state{Field(grid, u1), Field(grid, u2)};
    if (s % track_every == 0 || s == steps) {
      run.track.times.push_back(t);
      run.track.positions.push_back(
          level_position(domain, state, tiled, options.speed.level, options.speed.species));
    }
    if (s % snap_every == 0 || s == steps) {
      run.track.snapshot_times.push_back(t);
      run.track.snapshots.push_back(state);
    }
  };
  record(0);
  for (std::size_t s = 1; s <= steps; ++s) {
    stepper.step(u1, u2);
    if (s % track_every == 0 || s % snap_every == 0 || s == steps) record(s);
  }
  run.final_state = {Field(grid, u1), Field(grid, u2)};
  run.telemetry = stepper.telemetry();
  run.result = measure_speed(run.track, domain, tiled, params, options.speed);
  return run;
}

FrontVerification verify_front(const FrontResult& result, const FrontDomain& domain,
                               const StatePair& final_state, const StatePair& tiled) {
  const std::size_t m = domain.nodes_per_period, pin = domain.pin_nodes(), n = domain.size();
  const double amp = std::max(tiled.u1.max(), tiled.u2.max());
  FrontVerification v;
  double up1 = 0.0, down2 = 0.0;
  for (std::size_t j = pin; j + m < n - pin; ++j) {
    up1 = std::max(up1, final_state.u1[j + m] - final_state.u1[j]);
    down2 = std::max(down2, final_state.u2[j] - final_state.u2[j + m]);
  }
  v.phi1_nonincreasing = up1 <= 1e-3 * amp;
  v.phi2_nondecreasing = down2 <= 1e-3 * amp;
  v.monotonicity_violation = std::max(up1, down2) / amp;
  v.periodic = result.verdict == FrontVerdict::zero_speed ||
               (!std::isnan(result.pulsation_residual) && result.pulsation_residual <= 1e-2 * amp);
  double err = 0.0;
  for (std::size_t j = pin; j < pin + m; ++j) {
    err = std::max(err, std::abs(final_state.u1[j] - tiled.u1[j]));
    err = std::max(err, std::abs(final_state.u2[j]));
  }
  for (std::size_t j = n - pin - m; j < n - pin; ++j) {
    err = std::max(err, std::abs(final_state.u1[j]));
    err = std::max(err, std::abs(final_state.u2[j] - tiled.u2[j]));
  }
  v.limit_error = err / amp;
  v.limits = v.limit_error <= 0.02;
  return v;
}

CounterPropagation counter_propagation_bound(const CoopOperator& op) {
  CounterPropagation cp;
  cp.lambda = principal_eigen_system(op).lambda;
  if (!(cp.lambda < 0.0))
    throw UsageError("counter_propagation_bound: state is not unstable (lambda >= 0)");
  cp.closed_form = 2.0 * std::sqrt(std::min(1.0, op.d) * std::abs(cp.lambda));

  auto speed = [&](double log_mu) {
    const double mu = std::exp(log_mu);
    return -principal_eigen_system(op.with_decay_rate(mu)).lambda / mu;
  };
  const double lo = std::log(1e-3), hi = std::log(1e3);
  constexpr int kScan = 48;
  std::vector<double> values(kScan + 1);
  std::size_t best = 0;
  for (int i = 0; i <= kScan; ++i) {
    values[static_cast<std::size_t>(i)] = speed(lo + (hi - lo) * i / kScan);
    if (values[static_cast<std::size_t>(i)] < values[best]) best = static_cast<std::size_t>(i);
  }
  double a = lo + (hi - lo) * static_cast<double>(best == 0 ? 0 : best - 1) / kScan;
  double b = lo + (hi - lo) * static_cast<double>(std::min<std::size_t>(best + 1, kScan)) / kScan;
  const double g = 0.5 * (std::sqrt(5.0) - 1.0);
  double x1 = b - g * (b - a), x2 = a + g * (b - a);
  double f1 = speed(x1), f2 = speed(x2);
  for (int it = 0; it < 80 && b - a > 1e-10; ++it) {
    if (f1 <= f2) {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - g * (b - a);
      f1 = speed(x1);
    } else {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + g * (b - a);
      f2 = speed(x2);
    }
  }
  cp.direct = std::min({f1, f2, values[best]});
  cp.argmin_mu = std::exp(f1 <= f2 ? x1 : x2);
  if (values[best] < std::min(f1, f2)) cp.argmin_mu = std::exp(lo + (hi - lo) * static_cast<double>(best) / kScan);
  return cp;
}

CounterPropagation counter_propagation_bound(const StationaryReport& state,
                                             const SystemParams& params,
                                             const ReactionSpec& spec) {
  if (!(state.lambda_principal < 0.0))
    throw UsageError("counter_propagation_bound: state is not unstable (lambda >= 0)");
  const auto& grid = state.state.grid();
  const CoopOperator op =
      linearized_operator(sample(spec, grid, grid.length()), params, state.state.u1, state.state.u2);
  return counter_propagation_bound(op);
}

SwappedScenario swap_species(const ReactionSpec& spec, const SystemParams& params) {
  params.validate();
  ReactionSpec s = spec.swapped();
  for (auto& f : s.mu) f = f.mirrored();
  for (auto& f : s.nu) f = f.mirrored();
  const double root = std::sqrt(params.d);
  SystemParams p{1.0 / params.d, params.alpha * params.k, 1.0 / params.alpha, params.L / root};
  return {std::move(s), p, -1.0 / root};
}

}  // namespace pcomp
