#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "pcomp/eigen.hpp"
#include "pcomp/grid.hpp"
#include "pcomp/model.hpp"

namespace pcomp {

struct StatePair {
  Field u1;
  Field u2;

  const PeriodicGrid& grid() const noexcept { return u1.grid(); }
};

/// The two semi-trivial states (u~1, 0) and (0, u~2), stored by their
/// non-zero components.
struct ExtinctionStates {
  Field u1;
  Field u2;
  double residual1 = 0.0;
  double residual2 = 0.0;
};

struct NewtonOptions {
  double tolerance = 1e-10;  // sup-norm residual target (scaled by 1 + k for coupled solves)
  int max_iterations = 60;
  int max_halvings = 40;
};

/// Positive periodic solution of -delta z'' = z f_i[z] on `grid`, whose
/// length is the coefficient period. Damped Newton from mu_i/nu_i with a
/// semi-implicit time-stepping fallback.
Field solve_logistic_steady(double diffusivity, int species, const ReactionSpec& spec,
                            const PeriodicGrid& grid, const NewtonOptions& options = {});

/// Sup-norm of -delta z'' - z f_i[z].
double logistic_residual(double diffusivity, int species, const ReactionSpec& spec,
                         const Field& z);

ExtinctionStates compute_extinction_states(const ReactionSpec& spec, const SystemParams& params,
                                           const PeriodicGrid& grid,
                                           const NewtonOptions& options = {});

/// Sup-norm over both components of the stationary residual
///   (u1'' + u1 f1[u1] - k u1 u2,  d u2'' + u2 f2[u2] - alpha k u1 u2).
double stationary_residual(const SampledReaction& reaction, const SystemParams& params,
                           const StatePair& state);

/// Damped Newton on the coupled stationary system. Returns nothing when the
/// iteration fails to reach the tolerance.
std::optional<StatePair> newton_coexistence(const SampledReaction& reaction,
                                            const SystemParams& params, const StatePair& seed,
                                            const NewtonOptions& options = {});

enum class Stability { stable, unstable };

struct MaxPrincipleAudit {
  std::array<bool, 4> holds{};
  std::array<double, 4> slack{};  // rhs - lhs of each inequality
  bool all() const noexcept { return holds[0] && holds[1] && holds[2] && holds[3]; }
};

struct InstabilityCertificate {
  double lambda_test = 0.0;
  double max_violation = 0.0;  // max over nodes of ((-A - lambda_test) u)
  bool ok = false;
};

struct StationaryReport {
  StatePair state;
  double residual_inf = 0.0;
  double lambda_principal = 0.0;
  Stability classification = Stability::stable;
  double k = 0.0;
  MaxPrincipleAudit audit;
  InstabilityCertificate certificate;
  int seed_index = -1;
};

struct CoexistenceOptions {
  NewtonOptions newton;
  double interior_tolerance = 1e-10;
  double dedup_tolerance = 1e-6;
  int threads = 1;
};

/// Where the Newton iterations from a seed bank ended.
struct BasinCounts {
  std::size_t seeds = 0;
  std::size_t failed = 0;       // Newton did not converge
  std::size_t interior = 0;     // converged to a coexistence state
  std::size_t extinction = 0;   // converged to (u~1, 0) or (0, u~2)
  std::size_t trivial = 0;      // converged to (0, 0)
  std::size_t other = 0;        // converged outside the order interval
};

/// Deterministic seed bank: extinction blends t (u~1, 0) + (1 - t)(0, u~2),
/// their copies scaled to the O(1/k) size of coexistence states, the constant
/// state of the mean coefficients, and `random_count` smooth positive fields.
std::vector<StatePair> default_seed_bank(const ExtinctionStates& extinction,
                                         const ReactionSpec& spec, const SystemParams& params,
                                         std::size_t random_count = 16,
                                         std::uint64_t seed = 20240521);

/// Newton from every seed, keeping strictly interior solutions below the
/// extinction states, deduplicated and sorted by sup-norm then by the position
/// of the maximum. Each state is classified by the principal eigenvalue of -A.
std::vector<StationaryReport> find_coexistence_states(const SystemParams& params,
                                                      const ReactionSpec& spec,
                                                      const ExtinctionStates& extinction,
                                                      const std::vector<StatePair>& seeds,
                                                      const CoexistenceOptions& options = {},
                                                      BasinCounts* basins = nullptr);

/// The four extremum inequalities satisfied by every stationary coexistence
/// state:
///   k min u2 <= max f1[max u1],   alpha k min u1 <= max f2[max u2],
///   min f1[min u1] <= k max u2,   min f2[min u2] <= alpha k max u1.
MaxPrincipleAudit audit_max_principle(const StatePair& state, const SystemParams& params,
                                      const ReactionSpec& spec, double tolerance = 0.0);

struct ExtinctionStabilityReport {
  double lambda = 0.0;                 // lambda_1,per(-A) at the state
  std::array<double, 2> blocks{};      // the two scalar eigenvalues of the triangular operator
  Stability classification = Stability::stable;
};

/// Principal eigenvalues at (u~1, 0) and (0, u~2) through their triangular
/// structure; stable iff lambda > 0.
std::array<ExtinctionStabilityReport, 2> extinction_stability(const SystemParams& params,
                                                              const ReactionSpec& spec,
                                                              const ExtinctionStates& extinction);

/// Smallest k (to `tolerance`) in [k_lo, k_hi] at which both extinction states
/// are stable, by bisection. Requires instability at k_lo and stability at k_hi.
double extinction_stability_threshold(SystemParams params, const ReactionSpec& spec,
                                      const ExtinctionStates& extinction, double k_lo,
                                      double k_hi, double tolerance = 1e-6);

/// Explicit sub-eigenpair (lambda_test, (u1, u2)) with
/// lambda_test = -min{min(k u2 - R u1), min(alpha k u1 - R u2)}, R = max nu_i.
InstabilityCertificate instability_certificate(const StatePair& state, const SystemParams& params,
                                               const ReactionSpec& spec);

std::string to_string(Stability s);

}  // namespace pcomp
