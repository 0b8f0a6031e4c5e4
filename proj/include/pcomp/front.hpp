#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "pcomp/evolution.hpp"
#include "pcomp/stationary.hpp"

namespace pcomp {

/// A segment of `periods` cells with (u~1, 0) pinned over the left
/// `pin_periods` cells and (0, u~2) over the right ones.
struct FrontDomain {
  FrontDomain(double cell_length, std::size_t periods, std::size_t nodes_per_period = 64,
              std::size_t pin_periods = 2);

  double L;
  std::size_t periods;
  std::size_t nodes_per_period;
  std::size_t pin_periods;

  PeriodicGrid grid() const { return PeriodicGrid(L * static_cast<double>(periods), size()); }
  PeriodicGrid cell_grid() const { return PeriodicGrid(L, nodes_per_period); }
  std::size_t size() const noexcept { return periods * nodes_per_period; }
  std::size_t pin_nodes() const noexcept { return pin_periods * nodes_per_period; }
  double dx() const noexcept { return L / static_cast<double>(nodes_per_period); }
};

struct FrontInitialOptions {
  double center_fraction = 0.5;  // interface position as a fraction of the domain
  double width_fraction = 0.125; // sigmoid width in units of L
  bool species1 = true;          // false starts with u1 = 0 in the free region
  bool species2 = true;
};

/// Extinction states of the cell repeated over the whole domain.
StatePair tile_extinction(const FrontDomain& domain, const ExtinctionStates& cell);

/// u1 = u~1 s(-(x - x0)/w), u2 = u~2 s((x - x0)/w) with s the logistic
/// sigmoid, and the edge zones set exactly to (u~1, 0) and (0, u~2).
StatePair front_initial_data(const FrontDomain& domain, const ExtinctionStates& cell,
                             const FrontInitialOptions& options = {});

/// Level-set positions over time plus sparse snapshots.
struct FrontTrack {
  std::vector<double> times;
  std::vector<double> positions;
  std::vector<double> snapshot_times;
  std::vector<StatePair> snapshots;
};

enum class FrontVerdict { accepted, zero_speed, rejected, inconclusive };

struct FrontProfile {
  std::vector<double> xi, x, phi1, phi2;
};

struct FrontResult {
  double c = 0.0;
  double fit_r2 = 0.0;
  double slope_stderr = 0.0;
  double pulsation_residual = 0.0;  // NaN when not evaluated
  double amplitude = 0.0;           // max(||u~1||, ||u~2||)
  double window_start = 0.0, window_end = 0.0;
  FrontVerdict verdict = FrontVerdict::inconclusive;
  std::string reason;
  FrontProfile profile;
};

struct SpeedOptions {
  double level = 0.5;            // relative level of u_i / u~_i
  int species = 1;               // 1: rightmost crossing of u1; 2: leftmost crossing of u2
  double discard_fraction = 0.3; // leading share of the time window ignored
  double min_r2 = 0.999;
};

/// Position of the relative level set in one state, with linear
/// interpolation between nodes; NaN when the level is not crossed in the
/// free region.
double level_position(const FrontDomain& domain, const StatePair& state, const StatePair& tiled,
                      double level, int species);

/// Least-squares speed of the tracked level set, pulsating-relation residual
///   sup |u(t + L/c, x) - u(t, x -+ L)|
/// with u(t + L/c) interpolated linearly in time between snapshots, and the
/// profile (xi, x, phi1, phi2) of the last snapshot with xi = 0 where phi1
/// crosses half of max u~1 on the nodes x = 0 mod L.
FrontResult measure_speed(const FrontTrack& track, const FrontDomain& domain,
                          const StatePair& tiled, const SystemParams& params,
                          const SpeedOptions& options = {});

FrontResult measure_speed(const Trajectory& trajectory, const FrontDomain& domain,
                          const StatePair& tiled, const SystemParams& params,
                          const SpeedOptions& options = {});

struct FrontRunOptions {
  std::size_t periods = 100;
  std::size_t nodes_per_period = 64;
  double t_end = 100.0;
  double dt = 0.0;  // 0: default_dt of the scenario
  std::size_t snapshots = 400;
  FrontInitialOptions initial;
  SpeedOptions speed;
};

struct FrontRun {
  FrontResult result;
  FrontTrack track;
  StatePair final_state;
  ExtinctionStates cell;
  StepTelemetry telemetry;
  double dt = 0.0;
};

/// Builds the domain, integrates front-like data with pinned edges and
/// measures the speed.
FrontRun run_front(const ReactionSpec& spec, const SystemParams& params,
                   const FrontRunOptions& options = {});

struct FrontVerification {
  bool phi1_nonincreasing = false;
  bool phi2_nondecreasing = false;
  double monotonicity_violation = 0.0;  // largest wrong-way step, relative to amplitude
  bool periodic = false;                // pulsation residual within 1e-2 amplitude
  bool limits = false;
  double limit_error = 0.0;             // relative to amplitude
  bool all() const noexcept { return phi1_nonincreasing && phi2_nondecreasing && periodic && limits; }
};

/// Monotonicity of the final profile along each residue class x mod L,
/// periodicity through the pulsation residual, and the limits (u~1, 0),
/// (0, u~2) on the first and last free cells.
FrontVerification verify_front(const FrontResult& result, const FrontDomain& domain,
                               const StatePair& final_state, const StatePair& tiled);

struct CounterPropagation {
  double lambda = 0.0;       // lambda_1,per(-A) at the state
  double closed_form = 0.0;  // 2 sqrt(min(1, d) |lambda|)
  double direct = 0.0;       // inf over mu of -lambda_1,per(-mu^2 diag(1, d) - A) / mu
  double argmin_mu = 0.0;
};

/// Requires an unstable state (lambda < 0); throws UsageError otherwise.
CounterPropagation counter_propagation_bound(const StationaryReport& state,
                                             const SystemParams& params,
                                             const ReactionSpec& spec);

/// The same minimization for an assembled operator with lambda_1,per(-op) < 0.
CounterPropagation counter_propagation_bound(const CoopOperator& op);

struct SwappedScenario {
  ReactionSpec spec;
  SystemParams params;
  double speed_factor;  // c_swapped = speed_factor * c
};

/// Relabels the species and rescales space by y = -x / sqrt(d) so that the
/// new first species again diffuses at rate 1 and sits on the left:
/// d' = 1/d, alpha' = 1/alpha, k' = alpha k, L' = L / sqrt(d), mirrored
/// coefficients, c' = -c / sqrt(d).
SwappedScenario swap_species(const ReactionSpec& spec, const SystemParams& params);

std::string to_string(FrontVerdict v);

}  // namespace pcomp
