#pragma once

#include <cstddef>
#include <functional>
#include <memory>
#include <vector>

#include "pcomp/grid.hpp"
#include "pcomp/model.hpp"
#include "pcomp/stationary.hpp"

namespace pcomp {

enum class Scheme {
  imex,      // backward-Euler diffusion, two-stage Heun reaction
  explicit_  // Heun for diffusion and reaction together
};

enum class Boundary {
  periodic,  // the grid closes on itself
  pinned     // a line segment whose edge zones are held at fixed values
};

struct EvolutionConfig {
  double dt = 1e-3;
  double t_end = 1.0;
  Scheme scheme = Scheme::imex;
  std::size_t record_every = 100;  // steps between snapshots (0: only the endpoints)
};

struct StepTelemetry {
  std::size_t steps = 0;
  std::size_t clamps = 0;           // nodes reset from below -1e-14 to 0
  std::size_t warning_steps = 0;    // steps that clamped more than 0.1% of the nodes
  double min_before_clamp = 0.0;    // most negative value seen before clamping
};

enum class PeriodicSolve {
  cyclic,      // Sherman-Morrison on the tridiagonal factorization, O(n)
  convolution  // discrete Green's function; commutes exactly with index rolls
};

/// Advances (u1, u2) under
///   u1_t = u1'' + u1 f1[u1] - k u1 u2,  u2_t = d u2'' + u2 f2[u2] - alpha k u1 u2.
class Stepper {
 public:
  /// `reaction` is sampled on the nodes of `grid`. For Boundary::pinned the
  /// first and last `pin_nodes` nodes keep the values of `pin`.
  Stepper(const PeriodicGrid& grid, SampledReaction reaction, const SystemParams& params,
          double dt, Scheme scheme = Scheme::imex, Boundary boundary = Boundary::periodic,
          std::size_t pin_nodes = 0, const StatePair* pin = nullptr,
          PeriodicSolve solve = PeriodicSolve::cyclic);
  ~Stepper();
  Stepper(Stepper&&) noexcept;
  Stepper& operator=(Stepper&&) noexcept;

  void step(std::vector<double>& u1, std::vector<double>& u2);
  StatePair step(const StatePair& state);

  double dt() const noexcept;
  const StepTelemetry& telemetry() const noexcept;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

/// Coefficients on a grid spanning whole periods, sampled on one period and
/// tiled so that the samples are exactly periodic in the node index.
SampledReaction sample_tiled(const ReactionSpec& spec, const PeriodicGrid& grid, double period);

/// 0.5 / (M + k max(u~1, u~2) max(1, alpha)) with M the largest growth rate:
/// the reaction step size limit.
double stability_bound(const ReactionSpec& spec, const SystemParams& params,
                       const ExtinctionStates& extinction);

/// min(1e-3, stability_bound / 4).
double default_dt(const ReactionSpec& spec, const SystemParams& params,
                  const ExtinctionStates& extinction);

struct Trajectory {
  std::vector<double> times;
  std::vector<StatePair> states;
  StepTelemetry telemetry;
};

using Observer = std::function<void(double t, const std::vector<double>& u1,
                                    const std::vector<double>& u2)>;

/// Integrates from `initial` with the stepper's dt for ceil(t_end / dt)
/// steps (config.dt is not consulted), recording the initial state, every
/// `record_every`-th step and the final state. Times are step * dt. The
/// observer, if any, sees every step.
Trajectory integrate(Stepper& stepper, const StatePair& initial, const EvolutionConfig& config,
                     const Observer& observer = {});

/// Q_t on the periodic grid of `initial`: the state at time t, reached in
/// ceil(t / config.dt) equal steps. On grids spanning several periods the
/// diffusion solve is the convolution, so Q_t commutes exactly with rolls.
StatePair poincare_map(const StatePair& initial, double t, const SystemParams& params,
                       const ReactionSpec& spec, const EvolutionConfig& config);

/// v2 = u~2 - u2; its own inverse.
Field transform_J(const Field& u2, const Field& extinction2);

/// True when a <= b in the cooperative order (u1 ordered up, u2 ordered down).
bool cooperative_le(const StatePair& a, const StatePair& b);

struct ComparisonResult {
  bool strict = false;      // Q_t(a) << Q_t(b) at every node
  double min_gap = 0.0;     // smallest ordered difference over both components
};

/// Strong monotonicity check. Throws UsageError unless a <= b, a != b.
ComparisonResult comparison_test(const StatePair& a, const StatePair& b, double t,
                                 const SystemParams& params, const ReactionSpec& spec,
                                 const EvolutionConfig& config, double tolerance = 1e-12);

}  // namespace pcomp
