#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "pcomp/grid.hpp"
#include "pcomp/model.hpp"
#include "pcomp/stationary.hpp"

namespace pcomp {

enum class SegregatedKind { eta, gamma };
enum class NodalClass { trivial, plus_state, minus_state, sign_changing };

struct SegregatedSolution {
  Field z;
  SegregatedKind kind = SegregatedKind::eta;
  NodalClass classification = NodalClass::trivial;
  double residual = 0.0;  // sup |-z'' - term[z]| with the exact kink
  int seed_index = -1;
};

struct SegregatedOptions {
  double regularization = 1e-7;  // width of the smoothed z+ and z-
  double tolerance = 1e-8;       // residual required after polishing
  double dedup_tolerance = 1e-6;
  std::size_t random_seeds = 32;
  std::uint64_t seed = 20240521;
  int max_iterations = 80;
};

/// Residual sup |-z'' - term[z]| on the periodic grid of z.
double segregated_residual(SegregatedKind kind, const ReactionSpec& spec,
                           const SystemParams& params, const Field& z);

/// Solutions of -z'' = eta[z] or -z'' = gamma[z] reached from the seed bank:
/// alpha u~1, -d u~2, their halves, 0, and `random_seeds` sign-changing
/// smooth fields. Newton runs on the smoothed kink and is polished with the
/// exact one; survivors are deduplicated and sorted by their mean.
std::vector<SegregatedSolution> solve_segregated(SegregatedKind kind, const ReactionSpec& spec,
                                                 const SystemParams& params,
                                                 const PeriodicGrid& grid,
                                                 const SegregatedOptions& options = {});

NodalClass classify_nodal(const Field& z, double tolerance = 1e-8);

struct NodalReport {
  std::size_t zeros = 0;                    // sign changes around the periodic cell
  std::vector<double> plus_widths, minus_widths;
  double plus_measure = 0.0, minus_measure = 0.0;
  double radius1 = 0.0;  // R(0, M1, 1)
  double radius2 = 0.0;  // R(0, M2, d)
  /// Lower bound on |C+| + |C-| for a solution with this many components:
  /// 2 q (R(0, M1, 1) + R(0, M2, d)), q components of each sign.
  double required_length = 0.0;
  bool contradiction = false;  // required_length > L
};

/// Zero set and sign components of a sign-changing field; throws UsageError
/// for fields without both signs.
NodalReport nodal_structure(const Field& z, const ReactionSpec& spec, const SystemParams& params);

struct SweepRecord {
  double k = 0.0;
  std::size_t states = 0;
  double sup_u1 = 0.0, sup_u2 = 0.0;         // max over states
  double ratio_min = 0.0, ratio_max = 0.0;   // ||u2|| / (alpha ||u1||)
  double max_product = 0.0;                  // max k u1 u2
  double kU_min = 0.0, kU_max = 0.0;         // extremes of k u_i over both species
  double segregation = 0.0;                  // max over states of the integral of u1 u2
  double limit_residual = 0.0;               // residual of the rescaled limit system
  double lambda_max = 0.0;                   // largest principal eigenvalue among states
  bool all_unstable = false;
  bool all_certified = false;
  BasinCounts basins;
};

struct SweepSummary {
  std::vector<SweepRecord> records;
  bool sup_norm_nonincreasing = false;
  bool segregation_decreasing = false;
  bool kU_bounded_below = false;  // min k u_i stays above half its first value
  bool ratio_bounded = false;     // ratios stay in a fixed compact subset of (0, inf)
  std::optional<double> empirical_k_star;
};

std::vector<double> default_k_values();

SweepRecord sweep_entry(const ReactionSpec& spec, SystemParams params, double k,
                        const ExtinctionStates& extinction, const CoexistenceOptions& options,
                        std::size_t random_seeds, std::uint64_t seed);

SweepSummary sweep_k(const ReactionSpec& spec, const SystemParams& base,
                     const std::vector<double>& k_values, const PeriodicGrid& grid,
                     const CoexistenceOptions& options = {}, std::size_t random_seeds = 16,
                     std::uint64_t seed = 20240521);

std::string to_string(SegregatedKind kind);
std::string to_string(NodalClass c);

}  // namespace pcomp
