#include "pcomp/eigen.hpp"

#include <Eigen/Dense>
#include <Eigen/SparseCore>
#include <Eigen/SparseLU>
#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "pcomp/errors.hpp"
#include "pcomp/tridiag.hpp"

namespace pcomp {

namespace {

void normalize_positive(std::vector<double>& phi, const char* what) {
  double sum = 0.0;
  for (double v : phi) sum += v;
  if (sum < 0.0)
    for (double& v : phi) v = -v;
  double sup = 0.0;
  for (double v : phi) sup = std::max(sup, std::abs(v));
  if (!(sup > 0.0)) throw NumericalError(std::string(what) + ": zero eigenvector");
  for (double& v : phi) v /= sup;
  for (std::size_t j = 0; j < phi.size(); ++j)
    if (!(phi[j] > 0.0))
      throw NumericalError(std::string(what) + ": principal eigenvector has non-positive entry " +
                           std::to_string(phi[j]) + " at node " + std::to_string(j));
}

}  // namespace

EigenResult principal_eigen_periodic(double diffusivity, const Field& f) {
  if (!(diffusivity > 0.0)) throw UsageError("diffusivity must be positive");
  const auto& grid = f.grid();
  const auto n = static_cast<Eigen::Index>(grid.size());
  const double c = diffusivity / (grid.dx() * grid.dx());

  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(n, n);
  for (Eigen::Index j = 0; j < n; ++j) {
    a(j, j) = 2.0 * c - f[static_cast<std::size_t>(j)];
    a(j, (j + 1) % n) -= c;
    a(j, (j + n - 1) % n) -= c;
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(a);
  if (solver.info() != Eigen::Success) throw NumericalError("periodic eigensolver did not converge");

  EigenResult r;
  r.lambda = solver.eigenvalues()(0);
  r.phi.assign(solver.eigenvectors().col(0).data(), solver.eigenvectors().col(0).data() + n);
  normalize_positive(r.phi, "principal_eigen_periodic");

  // Two steps of shifted inverse iteration on the cyclic tridiagonal matrix
  // remove the dense solver's eigenvector error; the Rayleigh quotient then
  // gives the eigenvalue.
  const double sigma = r.lambda - 1e-6 * (1.0 + std::abs(r.lambda));
  const auto un = static_cast<std::size_t>(n);
  std::vector<double> lower(un, -c), upper(un, -c), diag(un);
  for (std::size_t j = 0; j < un; ++j) diag[j] = 2.0 * c - f[j] - sigma;
  const CyclicTridiagonalSolver cyclic(lower, diag, upper);
  for (int step = 0; step < 2; ++step) {
    cyclic.solve_in_place(r.phi);
    normalize_positive(r.phi, "principal_eigen_periodic");
  }
  double num = 0.0, den = 0.0;
  for (std::size_t j = 0; j < un; ++j) {
    const double left = r.phi[(j + un - 1) % un], right = r.phi[(j + 1) % un];
    const double applied = c * ((r.phi[j] - left) + (r.phi[j] - right)) - f[j] * r.phi[j];
    num += applied * r.phi[j];
    den += r.phi[j] * r.phi[j];
  }
  r.lambda = num / den;

  const Field phi(grid, r.phi);
  const Field lap = second_derivative_periodic(phi, diffusivity);
  for (std::size_t j = 0; j < r.phi.size(); ++j)
    r.residual = std::max(r.residual, std::abs(-lap[j] - f[j] * r.phi[j] - r.lambda * r.phi[j]));
  return r;
}

namespace {

struct DirichletBands {
  std::vector<double> diag;
  std::vector<double> off;
};

DirichletBands dirichlet_bands(double diffusivity, std::span<const double> f,
                               const Interval& interval) {
  const double c = diffusivity / (interval.h() * interval.h());
  DirichletBands b{std::vector<double>(f.size()), std::vector<double>(f.size() - 1, -c)};
  for (std::size_t j = 0; j < f.size(); ++j) b.diag[j] = 2.0 * c - f[j];
  return b;
}

}  // namespace

EigenResult principal_eigen_dirichlet(double diffusivity, std::span<const double> f,
                                      const Interval& interval) {
  if (!(diffusivity > 0.0)) throw UsageError("diffusivity must be positive");
  if (f.size() != interval.nodes) throw UsageError("coefficient count does not match interval");
  const DirichletBands b = dirichlet_bands(diffusivity, f, interval);

  EigenResult r;
  r.lambda = smallest_eigenvalue_tridiagonal(b.diag, b.off);
  r.phi = inverse_iteration_tridiagonal(b.diag, b.off, r.lambda);
  normalize_positive(r.phi, "principal_eigen_dirichlet");

  const std::vector<double> lap = second_derivative_dirichlet(r.phi, interval, diffusivity);
  for (std::size_t j = 0; j < r.phi.size(); ++j)
    r.residual = std::max(r.residual, std::abs(-lap[j] - f[j] * r.phi[j] - r.lambda * r.phi[j]));
  return r;
}

double dirichlet_eigenvalue(double diffusivity, const CoefficientFn& f, const Interval& interval) {
  if (!(diffusivity > 0.0)) throw UsageError("diffusivity must be positive");
  std::vector<double> samples(interval.nodes);
  for (std::size_t j = 0; j < samples.size(); ++j) samples[j] = f(interval.x(j));
  const DirichletBands b = dirichlet_bands(diffusivity, samples, interval);
  return smallest_eigenvalue_tridiagonal(b.diag, b.off);
}

RadiusResult radius_R(double x0, const CoefficientFn& f, double period, double diffusivity,
                      const RadiusOptions& options) {
  if (!(diffusivity > 0.0)) throw UsageError("diffusivity must be positive");
  const PeriodicGrid grid(period, options.periodic_nodes);
  const Field sampled = Field::sample(grid, f);

  RadiusResult r;
  r.periodic_lambda = principal_eigen_periodic(diffusivity, sampled).lambda;
  if (r.periodic_lambda >= 0.0) return r;

  auto lambda_at = [&](double radius) {
    const double coarse = dirichlet_eigenvalue(diffusivity, f, Interval(x0, radius, options.nodes));
    if (!options.richardson) return coarse;
    const double fine =
        dirichlet_eigenvalue(diffusivity, f, Interval(x0, radius, 2 * options.nodes + 1));
    return (4.0 * fine - coarse) / 3.0;
  };

  // Bracket from the constant-coefficient radius (pi/2) sqrt(delta/F) with F
  // replaced by the extremes of f.
  const double f_max = sampled.max();
  const double f_min = sampled.min();
  const double half_pi = 0.5 * std::numbers::pi;
  double lo = f_max > 0.0 ? 0.999 * half_pi * std::sqrt(diffusivity / f_max) : period;
  for (int i = 0; i < 80 && lambda_at(lo) <= 0.0; ++i) lo *= 0.5;
  double hi = f_min > 0.0 ? 1.001 * half_pi * std::sqrt(diffusivity / f_min) : 2.0 * lo;
  hi = std::max(hi, lo * 1.001);
  int expansions = 0;
  while (lambda_at(hi) > 0.0) {
    if (++expansions > 80)
      throw NumericalError("radius_R: no sign change of the Dirichlet eigenvalue");
    hi *= 2.0;
  }

  while (hi - lo > options.relative_tolerance * hi && r.iterations < 200) {
    const double mid = 0.5 * (lo + hi);
    if (lambda_at(mid) > 0.0)
      lo = mid;
    else
      hi = mid;
    ++r.iterations;
  }
  r.finite = true;
  r.radius = 0.5 * (lo + hi);
  r.lambda_at_radius = lambda_at(r.radius);
  return r;
}

void CoopOperator::validate() const {
  const std::size_t n = grid.size();
  if (zeroth1.size() != n || zeroth2.size() != n || coupling12.size() != n ||
      coupling21.size() != n)
    throw UsageError("cooperative operator: coefficient sizes do not match the grid");
  if (!(d > 0.0)) throw UsageError("cooperative operator: d must be positive");
  for (std::size_t j = 0; j < n; ++j)
    if (coupling12[j] < 0.0 || coupling21[j] < 0.0)
      throw UsageError("cooperative operator: negative off-diagonal coupling at node " +
                       std::to_string(j));
}

bool CoopOperator::irreducible() const {
  auto any_positive = [](const std::vector<double>& v) {
    return std::any_of(v.begin(), v.end(), [](double x) { return x > 0.0; });
  };
  return any_positive(coupling12) && any_positive(coupling21);
}

CoopOperator CoopOperator::with_decay_rate(double mu) const {
  CoopOperator out = *this;
  const double m2 = mu * mu;
  for (double& v : out.zeroth1) v += m2;
  for (double& v : out.zeroth2) v += m2 * d;
  return out;
}

std::pair<std::vector<double>, std::vector<double>> CoopOperator::apply_negative(
    std::span<const double> phi1, std::span<const double> phi2) const {
  const Field f1(grid, {phi1.begin(), phi1.end()});
  const Field f2(grid, {phi2.begin(), phi2.end()});
  const Field lap1 = second_derivative_periodic(f1, 1.0);
  const Field lap2 = second_derivative_periodic(f2, d);
  std::vector<double> out1(grid.size()), out2(grid.size());
  for (std::size_t j = 0; j < grid.size(); ++j) {
    out1[j] = -lap1[j] - zeroth1[j] * phi1[j] - coupling12[j] * phi2[j];
    out2[j] = -lap2[j] - zeroth2[j] * phi2[j] - coupling21[j] * phi1[j];
  }
  return {std::move(out1), std::move(out2)};
}

CoopOperator linearized_operator(const SampledReaction& s, const SystemParams& params,
                                 const Field& u1, const Field& u2) {
  const auto& grid = u1.grid();
  if (!(u2.grid() == grid) || s.mu[0].size() != grid.size())
    throw UsageError("linearized_operator: state and coefficients live on different grids");
  const std::size_t n = grid.size();
  CoopOperator op{grid, params.d, std::vector<double>(n), std::vector<double>(n),
                  std::vector<double>(n), std::vector<double>(n)};
  for (std::size_t j = 0; j < n; ++j) {
    const double g1 = s.mu[0][j] - 2.0 * s.nu[0][j] * u1[j];
    const double g2 = s.mu[1][j] - 2.0 * s.nu[1][j] * u2[j];
    op.zeroth1[j] = g1 - params.k * u2[j];
    op.zeroth2[j] = g2 - params.alpha * params.k * u1[j];
    op.coupling12[j] = params.k * u1[j];
    op.coupling21[j] = params.alpha * params.k * u2[j];
  }
  op.validate();
  return op;
}

SystemEigenResult principal_eigen_system(const CoopOperator& op,
                                         const SystemEigenOptions& options) {
  op.validate();
  const std::size_t n = op.grid.size();
  auto all_zero = [](const std::vector<double>& v) {
    return std::all_of(v.begin(), v.end(), [](double x) { return x == 0.0; });
  };
  if (all_zero(op.coupling12) && all_zero(op.coupling21)) {
    // Decoupled blocks: the smaller scalar eigenvalue, padded with zeros.
    const EigenResult e1 = principal_eigen_periodic(1.0, Field(op.grid, op.zeroth1));
    const EigenResult e2 = principal_eigen_periodic(op.d, Field(op.grid, op.zeroth2));
    SystemEigenResult r;
    const bool first = e1.lambda <= e2.lambda;
    r.lambda = first ? e1.lambda : e2.lambda;
    r.residual = first ? e1.residual : e2.residual;
    r.phi1 = first ? e1.phi : std::vector<double>(n, 0.0);
    r.phi2 = first ? std::vector<double>(n, 0.0) : e2.phi;
    return r;
  }
  const double c1 = 1.0 / (op.grid.dx() * op.grid.dx());
  const double c2 = op.d * c1;

  double shift = -std::numeric_limits<double>::infinity();
  for (std::size_t j = 0; j < n; ++j) {
    shift = std::max(shift, op.zeroth1[j] + op.coupling12[j]);
    shift = std::max(shift, op.zeroth2[j] + op.coupling21[j]);
  }
  shift += 1.0;

  // M = -A + shift I on the stacked unknowns (phi1, phi2).
  using Triplet = Eigen::Triplet<double>;
  std::vector<Triplet> entries;
  entries.reserve(8 * n);
  const auto N = static_cast<int>(n);
  for (int j = 0; j < N; ++j) {
    const int jl = (j + N - 1) % N, jr = (j + 1) % N;
    const auto sj = static_cast<std::size_t>(j);
    entries.emplace_back(j, j, 2.0 * c1 - op.zeroth1[sj] + shift);
    entries.emplace_back(j, jl, -c1);
    entries.emplace_back(j, jr, -c1);
    entries.emplace_back(j, N + j, -op.coupling12[sj]);
    entries.emplace_back(N + j, N + j, 2.0 * c2 - op.zeroth2[sj] + shift);
    entries.emplace_back(N + j, N + jl, -c2);
    entries.emplace_back(N + j, N + jr, -c2);
    entries.emplace_back(N + j, j, -op.coupling21[sj]);
  }
  Eigen::SparseMatrix<double> m(2 * N, 2 * N);
  m.setFromTriplets(entries.begin(), entries.end());
  Eigen::SparseLU<Eigen::SparseMatrix<double>> lu;
  lu.compute(m);
  if (lu.info() != Eigen::Success) throw NumericalError("principal_eigen_system: LU failed");

  Eigen::VectorXd v = Eigen::VectorXd::Ones(2 * N);
  double lambda = 0.0, previous = std::numeric_limits<double>::infinity();
  double last_change = std::numeric_limits<double>::infinity();
  int it = 0;
  for (; it < options.max_iterations; ++it) {
    Eigen::VectorXd w = lu.solve(v);
    const double rho = w.dot(v) / v.dot(v);
    lambda = 1.0 / rho - shift;
    w /= w.cwiseAbs().maxCoeff();
    const double vector_change = (w - v).cwiseAbs().maxCoeff();
    v = std::move(w);
    last_change = std::abs(lambda - previous) / (1.0 + std::abs(lambda));
    if (last_change <= options.tolerance && vector_change <= 1e-11) break;
    previous = lambda;
  }
  if (it == options.max_iterations && last_change > 1e-10)
    throw NumericalError("principal_eigen_system: inverse iteration stagnated after " +
                         std::to_string(it) + " iterations (relative change " +
                         std::to_string(last_change) + ", shift " + std::to_string(shift) + ")");

  SystemEigenResult r;
  r.iterations = it + 1;
  r.lambda = lambda;
  r.phi1.assign(v.data(), v.data() + n);
  r.phi2.assign(v.data() + n, v.data() + 2 * n);
  const bool strict = op.irreducible();
  for (std::size_t j = 0; j < n; ++j) {
    for (double* p : {&r.phi1[j], &r.phi2[j]}) {
      if (strict && !(*p > 0.0))
        throw NumericalError("principal_eigen_system: Perron vector has a non-positive entry");
      if (*p < -1e-12) throw NumericalError("principal_eigen_system: negative eigenvector entry");
      *p = std::max(*p, 0.0);
    }
  }
  const auto [a1, a2] = op.apply_negative(r.phi1, r.phi2);
  for (std::size_t j = 0; j < n; ++j) {
    r.residual = std::max(r.residual, std::abs(a1[j] - r.lambda * r.phi1[j]));
    r.residual = std::max(r.residual, std::abs(a2[j] - r.lambda * r.phi2[j]));
  }
  return r;
}

}  // namespace pcomp
