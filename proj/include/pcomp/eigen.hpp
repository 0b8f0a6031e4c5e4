#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

#include "pcomp/grid.hpp"
#include "pcomp/model.hpp"

namespace pcomp {

/// Principal eigenpair: lambda with an eigenfunction that is positive at every
/// node and normalized to sup-norm 1.
struct EigenResult {
  double lambda = 0.0;
  std::vector<double> phi;
  double residual = 0.0;  // sup-norm of (operator) phi - lambda phi
};

/// lambda_1,per(-diffusivity d^2/dx^2 - f) of the discretized operator, by a
/// dense symmetric eigendecomposition (intended for n <= 2048).
EigenResult principal_eigen_periodic(double diffusivity, const Field& f);

/// Dirichlet principal eigenpair on an interval (zero ghost values).
EigenResult principal_eigen_dirichlet(double diffusivity, std::span<const double> f,
                                      const Interval& interval);

using CoefficientFn = std::function<double(double)>;

/// Smallest Dirichlet eigenvalue only, by Sturm bisection (no eigenvector).
double dirichlet_eigenvalue(double diffusivity, const CoefficientFn& f, const Interval& interval);

struct RadiusOptions {
  std::size_t nodes = 2047;           // interior nodes of the coarse Dirichlet grid
  bool richardson = true;             // combine with the 2m+1 grid to cancel O(h^2)
  double relative_tolerance = 1e-12;  // bisection stops at (hi - lo) <= tol * hi
  std::size_t periodic_nodes = kDefaultNodes;
};

struct RadiusResult {
  bool finite = false;          // false when lambda_1,per(-delta d2 - f) >= 0
  double radius = 0.0;
  double lambda_at_radius = 0.0;
  double periodic_lambda = 0.0;
  int iterations = 0;
};

/// R(x0, f, delta): the radius at which the Dirichlet principal eigenvalue of
/// -delta d^2/dx^2 - f on B(x0, R) vanishes. `period` is the period of f,
/// used for the periodic eigenvalue that decides whether R is finite.
RadiusResult radius_R(double x0, const CoefficientFn& f, double period, double diffusivity,
                      const RadiusOptions& options = {});

/// Linearization of the cooperative system at (u1, u2):
///   A = [ d2/dx2 + zeroth1      coupling12 ]
///       [ coupling21        d d2/dx2 + zeroth2 ]
/// with zeroth1 = g1[u1] - k u2, zeroth2 = g2[u2] - alpha k u1,
/// coupling12 = k u1 and coupling21 = alpha k u2.
struct CoopOperator {
  PeriodicGrid grid;
  double d = 1.0;
  std::vector<double> zeroth1, zeroth2;
  std::vector<double> coupling12, coupling21;

  void validate() const;
  bool irreducible() const;
  /// A + mu^2 diag(1, d): the family whose principal eigenvalue bounds spreading speeds.
  CoopOperator with_decay_rate(double mu) const;
  /// (-A phi) evaluated on the grid.
  std::pair<std::vector<double>, std::vector<double>> apply_negative(
      std::span<const double> phi1, std::span<const double> phi2) const;
};

CoopOperator linearized_operator(const SampledReaction& reaction, const SystemParams& params,
                                 const Field& u1, const Field& u2);

struct SystemEigenOptions {
  int max_iterations = 10000;
  double tolerance = 1e-13;
};

struct SystemEigenResult {
  double lambda = 0.0;
  std::vector<double> phi1, phi2;  // joint sup-norm 1, non-negative
  double residual = 0.0;
  int iterations = 0;
};

/// lambda_1,per(-A) by shifted inverse power iteration. The shift makes
/// -A + sI a strictly diagonally dominant M-matrix, so the iteration stays in
/// the positive cone and converges to the Perron vector.
SystemEigenResult principal_eigen_system(const CoopOperator& op,
                                         const SystemEigenOptions& options = {});

}  // namespace pcomp
