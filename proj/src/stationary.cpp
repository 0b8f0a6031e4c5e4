#include "pcomp/stationary.hpp"

#include <Eigen/SparseCore>
#include <Eigen/SparseLU>
#include <algorithm>
#include <atomic>
#include <cmath>
#include <numbers>
#include <random>
#include <sstream>
#include <thread>

#include "pcomp/errors.hpp"

namespace pcomp {

namespace {

using SparseMatrix = Eigen::SparseMatrix<double>;
using Triplet = Eigen::Triplet<double>;

// Periodic block diffusion diffusivity * D on unknowns [offset, offset + n).
void add_diffusion(std::vector<Triplet>& t, int offset, int n, double c) {
  for (int j = 0; j < n; ++j) {
    t.emplace_back(offset + j, offset + j, -2.0 * c);
    t.emplace_back(offset + j, offset + (j + n - 1) % n, c);
    t.emplace_back(offset + j, offset + (j + 1) % n, c);
  }
}

Eigen::VectorXd solve_sparse(int size, const std::vector<Triplet>& entries,
                             const Eigen::VectorXd& rhs) {
  SparseMatrix m(size, size);
  m.setFromTriplets(entries.begin(), entries.end());
  Eigen::SparseLU<SparseMatrix> lu;
  lu.compute(m);
  if (lu.info() != Eigen::Success) throw NumericalError("Newton Jacobian is singular");
  Eigen::VectorXd x = lu.solve(rhs);
  if (lu.info() != Eigen::Success || !x.allFinite())
    throw NumericalError("Newton linear solve failed");
  return x;
}

double sup(const Eigen::VectorXd& v) { return v.cwiseAbs().maxCoeff(); }

struct ScalarProblem {
  double c;  // diffusivity / dx^2
  std::vector<double> mu, nu;
};

Eigen::VectorXd logistic_rhs(const ScalarProblem& p, const Eigen::VectorXd& z) {
  const auto n = z.size();
  Eigen::VectorXd r(n);
  for (Eigen::Index j = 0; j < n; ++j) {
    const double left = z((j + n - 1) % n), right = z((j + 1) % n);
    const auto sj = static_cast<std::size_t>(j);
    r(j) = p.c * ((left - z(j)) + (right - z(j))) + z(j) * (p.mu[sj] - p.nu[sj] * z(j));
  }
  return r;
}

// Semi-implicit pseudo-time march: (I - dt c D + dt nu z^n) z^{n+1} = (1 + dt mu) z^n.
// Each step is an M-matrix solve, so positivity is preserved whatever dt is.
Eigen::VectorXd logistic_fallback(const ScalarProblem& p, Eigen::VectorXd z, double target,
                                  std::vector<double>& trace) {
  const int n = static_cast<int>(z.size());
  double dt = 0.05;
  for (int step = 0; step < 20000; ++step) {
    std::vector<Triplet> t;
    add_diffusion(t, 0, n, -dt * p.c);
    for (int j = 0; j < n; ++j) t.emplace_back(j, j, 1.0 + dt * p.nu[static_cast<std::size_t>(j)] * z(j));
    Eigen::VectorXd rhs = z;
    for (int j = 0; j < n; ++j) rhs(j) *= 1.0 + dt * p.mu[static_cast<std::size_t>(j)];
    z = solve_sparse(n, t, rhs);
    const double res = sup(logistic_rhs(p, z));
    if (step % 100 == 0) trace.push_back(res);
    if (res <= target) return z;
    dt = std::min(dt * 1.05, 10.0);
  }
  return z;
}

std::string format_trace(const std::vector<double>& trace) {
  std::ostringstream os;
  os << "residual trace:";
  for (double r : trace) os << ' ' << r;
  return os.str();
}

}  // namespace

std::string to_string(Stability s) { return s == Stability::stable ? "stable" : "unstable"; }

double logistic_residual(double diffusivity, int species, const ReactionSpec& spec,
                         const Field& z) {
  const auto& grid = z.grid();
  const SampledReaction s = sample(spec, grid, grid.length());
  const auto i = static_cast<std::size_t>(species - 1);
  (void)spec.growth(species);
  const ScalarProblem p{diffusivity / (grid.dx() * grid.dx()), s.mu[i], s.nu[i]};
  return sup(logistic_rhs(p, Eigen::Map<const Eigen::VectorXd>(
                                 z.vector().data(), static_cast<Eigen::Index>(z.size()))));
}

Field solve_logistic_steady(double diffusivity, int species, const ReactionSpec& spec,
                            const PeriodicGrid& grid, const NewtonOptions& options) {
  if (!(diffusivity > 0.0)) throw UsageError("diffusivity must be positive");
  (void)spec.growth(species);
  const auto i = static_cast<std::size_t>(species - 1);
  const SampledReaction s = sample(spec, grid, grid.length());
  const ScalarProblem p{diffusivity / (grid.dx() * grid.dx()), s.mu[i], s.nu[i]};
  const int n = static_cast<int>(grid.size());

  Eigen::VectorXd z(n);
  for (int j = 0; j < n; ++j) z(j) = p.mu[static_cast<std::size_t>(j)] / p.nu[static_cast<std::size_t>(j)];

  std::vector<double> trace;
  double res = sup(logistic_rhs(p, z));
  trace.push_back(res);
  bool fallback_used = false;
  for (int it = 0; it < options.max_iterations && res > options.tolerance; ++it) {
    std::vector<Triplet> t;
    add_diffusion(t, 0, n, p.c);
    for (int j = 0; j < n; ++j) {
      const auto sj = static_cast<std::size_t>(j);
      t.emplace_back(j, j, p.mu[sj] - 2.0 * p.nu[sj] * z(j));
    }
    const Eigen::VectorXd dz = solve_sparse(n, t, -logistic_rhs(p, z));
    double step = 1.0;
    bool accepted = false;
    for (int h = 0; h <= options.max_halvings; ++h, step *= 0.5) {
      const Eigen::VectorXd trial = z + step * dz;
      if (trial.minCoeff() <= 0.0) continue;
      const double trial_res = sup(logistic_rhs(p, trial));
      if (trial_res < res) {
        z = trial;
        res = trial_res;
        accepted = true;
        break;
      }
    }
    trace.push_back(res);
    if (accepted) continue;
    if (res <= 1e3 * options.tolerance) break;  // roundoff floor of the discrete operator
    if (fallback_used) break;
    fallback_used = true;
    z = logistic_fallback(p, z, 1e-6, trace);
    res = sup(logistic_rhs(p, z));
  }
  if (!(res <= 1e3 * options.tolerance) || z.minCoeff() <= 0.0)
    throw NumericalError("solve_logistic_steady: Newton and time-stepping fallback failed; " +
                         format_trace(trace));
  return Field(grid, std::vector<double>(z.data(), z.data() + n));
}

ExtinctionStates compute_extinction_states(const ReactionSpec& spec, const SystemParams& params,
                                           const PeriodicGrid& grid,
                                           const NewtonOptions& options) {
  ExtinctionStates e{solve_logistic_steady(1.0, 1, spec, grid, options),
                     solve_logistic_steady(params.d, 2, spec, grid, options)};
  e.residual1 = logistic_residual(1.0, 1, spec, e.u1);
  e.residual2 = logistic_residual(params.d, 2, spec, e.u2);
  return e;
}

namespace {

struct CoupledProblem {
  const SampledReaction& r;
  const SystemParams& params;
  double c1, c2;
  int n;
};

Eigen::VectorXd coupled_rhs(const CoupledProblem& p, const Eigen::VectorXd& u) {
  const int n = p.n;
  Eigen::VectorXd out(2 * n);
  for (int j = 0; j < n; ++j) {
    const auto sj = static_cast<std::size_t>(j);
    const int l = (j + n - 1) % n, r = (j + 1) % n;
    const double a = u(j), b = u(n + j);
    out(j) = p.c1 * ((u(l) - a) + (u(r) - a)) + a * (p.r.mu[0][sj] - p.r.nu[0][sj] * a) -
             p.params.k * a * b;
    out(n + j) = p.c2 * ((u(n + l) - b) + (u(n + r) - b)) +
                 b * (p.r.mu[1][sj] - p.r.nu[1][sj] * b) - p.params.alpha * p.params.k * a * b;
  }
  return out;
}

CoupledProblem make_problem(const SampledReaction& r, const SystemParams& params,
                            const PeriodicGrid& grid) {
  const double inv = 1.0 / (grid.dx() * grid.dx());
  return {r, params, inv, params.d * inv, static_cast<int>(grid.size())};
}

Eigen::VectorXd stack(const StatePair& s) {
  const auto n = static_cast<Eigen::Index>(s.u1.size());
  Eigen::VectorXd v(2 * n);
  for (Eigen::Index j = 0; j < n; ++j) {
    v(j) = s.u1[static_cast<std::size_t>(j)];
    v(n + j) = s.u2[static_cast<std::size_t>(j)];
  }
  return v;
}

StatePair unstack(const PeriodicGrid& grid, const Eigen::VectorXd& v) {
  const auto n = grid.size();
  return {Field(grid, std::vector<double>(v.data(), v.data() + n)),
          Field(grid, std::vector<double>(v.data() + n, v.data() + 2 * n))};
}

}  // namespace

double stationary_residual(const SampledReaction& reaction, const SystemParams& params,
                           const StatePair& state) {
  return sup(coupled_rhs(make_problem(reaction, params, state.grid()), stack(state)));
}

std::optional<StatePair> newton_coexistence(const SampledReaction& reaction,
                                            const SystemParams& params, const StatePair& seed,
                                            const NewtonOptions& options) {
  const auto& grid = seed.grid();
  if (!(seed.u2.grid() == grid) || reaction.mu[0].size() != grid.size())
    throw UsageError("newton_coexistence: seed and coefficients live on different grids");
  const CoupledProblem p = make_problem(reaction, params, grid);
  const int n = p.n;
  const double k = params.k, ak = params.alpha * params.k;
  const double target = options.tolerance * (1.0 + k);

  Eigen::VectorXd u = stack(seed);
  double res = sup(coupled_rhs(p, u));
  for (int it = 0; it < options.max_iterations && res > target; ++it) {
    std::vector<Triplet> t;
    t.reserve(8 * static_cast<std::size_t>(n));
    add_diffusion(t, 0, n, p.c1);
    add_diffusion(t, n, n, p.c2);
    for (int j = 0; j < n; ++j) {
      const auto sj = static_cast<std::size_t>(j);
      const double a = u(j), b = u(n + j);
      t.emplace_back(j, j, reaction.mu[0][sj] - 2.0 * reaction.nu[0][sj] * a - k * b);
      t.emplace_back(j, n + j, -k * a);
      t.emplace_back(n + j, n + j, reaction.mu[1][sj] - 2.0 * reaction.nu[1][sj] * b - ak * a);
      t.emplace_back(n + j, j, -ak * b);
    }
    Eigen::VectorXd du;
    try {
      du = solve_sparse(2 * n, t, -coupled_rhs(p, u));
    } catch (const NumericalError&) {
      return std::nullopt;
    }
    double step = 1.0;
    bool accepted = false;
    for (int h = 0; h <= options.max_halvings; ++h, step *= 0.5) {
      const Eigen::VectorXd trial = u + step * du;
      const double trial_res = sup(coupled_rhs(p, trial));
      if (trial_res < res) {
        u = trial;
        res = trial_res;
        accepted = true;
        break;
      }
    }
    if (!accepted) break;
  }
  if (!(res <= 1e3 * options.tolerance * (1.0 + k)) || !u.allFinite()) return std::nullopt;
  return unstack(grid, u);
}

std::vector<StatePair> default_seed_bank(const ExtinctionStates& extinction,
                                         const ReactionSpec& spec, const SystemParams& params,
                                         std::size_t random_count, std::uint64_t seed) {
  const auto& grid = extinction.u1.grid();
  const std::size_t n = grid.size();
  const double k_scale = std::min(1.0, 2.0 / (1.0 + params.k));
  std::vector<StatePair> seeds;

  auto scaled = [&](double a, double b) {
    std::vector<double> u1(n), u2(n);
    for (std::size_t j = 0; j < n; ++j) {
      u1[j] = a * extinction.u1[j];
      u2[j] = b * extinction.u2[j];
    }
    return StatePair{Field(grid, std::move(u1)), Field(grid, std::move(u2))};
  };
  for (int q = 1; q <= 9; ++q) {
    const double t = 0.1 * q;
    seeds.push_back(scaled(t, 1.0 - t));
  }
  if (k_scale < 1.0)
    for (int q = 1; q <= 9; ++q) {
      const double t = 0.1 * q;
      seeds.push_back(scaled(2.0 * k_scale * t, 2.0 * k_scale * (1.0 - t)));
    }

  // Constant state of the mean coefficients:
  //   m1 - n1 u1 - k u2 = 0,  m2 - n2 u2 - alpha k u1 = 0.
  const double m1 = spec.mu[0].mean(), m2 = spec.mu[1].mean();
  const double n1 = spec.nu[0].mean(), n2 = spec.nu[1].mean();
  const double ak = params.alpha * params.k;
  const double det = n1 * n2 - params.k * ak;
  if (det != 0.0) {
    const double c1 = (m1 * n2 - params.k * m2) / det;
    const double c2 = (n1 * m2 - ak * m1) / det;
    if (c1 > 0.0 && c2 > 0.0)
      seeds.push_back({Field::constant(grid, c1), Field::constant(grid, c2)});
  }

  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> amp(-0.12, 0.12);
  auto random_profile = [&]() {
    std::array<double, 6> a{};
    for (double& v : a) v = amp(rng);
    std::vector<double> r(n);
    for (std::size_t j = 0; j < n; ++j) {
      const double w = 2.0 * std::numbers::pi * grid.x(j) / grid.length();
      double v = 0.5;
      for (int q = 0; q < 3; ++q)
        v += a[2 * q] * std::cos((q + 1) * w) + a[2 * q + 1] * std::sin((q + 1) * w);
      r[j] = v;
    }
    return r;
  };
  for (std::size_t s = 0; s < random_count; ++s) {
    const double scale = (s % 2 == 0 || k_scale == 1.0) ? 1.0 : 2.0 * k_scale;
    std::vector<double> r1 = random_profile(), r2 = random_profile();
    for (std::size_t j = 0; j < n; ++j) {
      r1[j] *= scale * extinction.u1[j];
      r2[j] *= scale * extinction.u2[j];
    }
    seeds.push_back({Field(grid, std::move(r1)), Field(grid, std::move(r2))});
  }
  return seeds;
}

MaxPrincipleAudit audit_max_principle(const StatePair& state, const SystemParams& params,
                                      const ReactionSpec& spec, double tolerance) {
  const auto& grid = state.grid();
  const double period = grid.length();
  const double max1 = state.u1.max(), min1 = state.u1.min();
  const double max2 = state.u2.max(), min2 = state.u2.min();
  double maxf1 = -INFINITY, maxf2 = -INFINITY, minf1 = INFINITY, minf2 = INFINITY;
  for (std::size_t j = 0; j < grid.size(); ++j) {
    const double x = grid.x(j);
    maxf1 = std::max(maxf1, eval_f(spec, 1, max1, x, period));
    maxf2 = std::max(maxf2, eval_f(spec, 2, max2, x, period));
    minf1 = std::min(minf1, eval_f(spec, 1, min1, x, period));
    minf2 = std::min(minf2, eval_f(spec, 2, min2, x, period));
  }
  const double ak = params.alpha * params.k;
  MaxPrincipleAudit a;
  a.slack = {maxf1 - params.k * min2, maxf2 - ak * min1, params.k * max2 - minf1,
             ak * max1 - minf2};
  for (std::size_t q = 0; q < 4; ++q) a.holds[q] = a.slack[q] >= -tolerance;
  return a;
}

std::array<ExtinctionStabilityReport, 2> extinction_stability(const SystemParams& params,
                                                              const ReactionSpec& spec,
                                                              const ExtinctionStates& extinction) {
  params.validate();
  const auto& grid = extinction.u1.grid();
  const SampledReaction s = sample(spec, grid, grid.length());
  const std::size_t n = grid.size();
  const double ak = params.alpha * params.k;
  std::vector<double> a(n), b(n), c(n), e(n);
  for (std::size_t j = 0; j < n; ++j) {
    a[j] = s.mu[0][j] - 2.0 * s.nu[0][j] * extinction.u1[j];
    b[j] = s.mu[1][j] - ak * extinction.u1[j];
    c[j] = s.mu[0][j] - params.k * extinction.u2[j];
    e[j] = s.mu[1][j] - 2.0 * s.nu[1][j] * extinction.u2[j];
  }
  auto report = [](double l1, double l2) {
    ExtinctionStabilityReport r;
    r.blocks = {l1, l2};
    r.lambda = std::min(l1, l2);
    r.classification = r.lambda > 0.0 ? Stability::stable : Stability::unstable;
    return r;
  };
  return {report(principal_eigen_periodic(1.0, Field(grid, a)).lambda,
                 principal_eigen_periodic(params.d, Field(grid, b)).lambda),
          report(principal_eigen_periodic(1.0, Field(grid, c)).lambda,
                 principal_eigen_periodic(params.d, Field(grid, e)).lambda)};
}

double extinction_stability_threshold(SystemParams params, const ReactionSpec& spec,
                                      const ExtinctionStates& extinction, double k_lo,
                                      double k_hi, double tolerance) {
  auto stable = [&](double k) {
    params.k = k;
    const auto r = extinction_stability(params, spec, extinction);
    return r[0].classification == Stability::stable && r[1].classification == Stability::stable;
  };
  if (!(k_lo > 0.0 && k_hi > k_lo)) throw UsageError("threshold bracket must satisfy 0 < k_lo < k_hi");
  if (stable(k_lo) || !stable(k_hi))
    throw UsageError("threshold bracket does not straddle the stability change");
  while (k_hi - k_lo > tolerance) {
    const double mid = 0.5 * (k_lo + k_hi);
    (stable(mid) ? k_hi : k_lo) = mid;
  }
  return 0.5 * (k_lo + k_hi);
}

InstabilityCertificate instability_certificate(const StatePair& state, const SystemParams& params,
                                               const ReactionSpec& spec) {
  const auto& grid = state.grid();
  const SampledReaction s = sample(spec, grid, grid.length());
  double R = 0.0;
  for (int i = 0; i < 2; ++i)
    R = std::max(R, *std::max_element(s.nu[static_cast<std::size_t>(i)].begin(),
                                      s.nu[static_cast<std::size_t>(i)].end()));
  const double ak = params.alpha * params.k;
  double m1 = INFINITY, m2 = INFINITY;
  for (std::size_t j = 0; j < grid.size(); ++j) {
    m1 = std::min(m1, params.k * state.u2[j] - R * state.u1[j]);
    m2 = std::min(m2, ak * state.u1[j] - R * state.u2[j]);
  }
  InstabilityCertificate c;
  c.lambda_test = -std::min(m1, m2);

  const CoopOperator op = linearized_operator(s, params, state.u1, state.u2);
  const auto [a1, a2] = op.apply_negative(state.u1.values(), state.u2.values());
  c.max_violation = -INFINITY;
  for (std::size_t j = 0; j < grid.size(); ++j) {
    c.max_violation = std::max(c.max_violation, a1[j] - c.lambda_test * state.u1[j]);
    c.max_violation = std::max(c.max_violation, a2[j] - c.lambda_test * state.u2[j]);
  }
  // (-A u) equals the stationary residual plus exact terms, so the nodewise
  // inequality can only be asked to hold up to that residual.
  const double tol = 10.0 * stationary_residual(s, params, state) + 1e-13;
  c.ok = c.lambda_test < 0.0 && c.max_violation <= tol;
  return c;
}

std::vector<StationaryReport> find_coexistence_states(const SystemParams& params,
                                                      const ReactionSpec& spec,
                                                      const ExtinctionStates& extinction,
                                                      const std::vector<StatePair>& seeds,
                                                      const CoexistenceOptions& options,
                                                      BasinCounts* basins) {
  params.validate();
  const auto& grid = extinction.u1.grid();
  const SampledReaction reaction = sample(spec, grid, grid.length());

  std::vector<std::optional<StatePair>> solved(seeds.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&]() {
    for (std::size_t i = next++; i < seeds.size(); i = next++)
      solved[i] = newton_coexistence(reaction, params, seeds[i], options.newton);
  };
  const int threads = std::max(1, std::min<int>(options.threads, static_cast<int>(seeds.size())));
  if (threads == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int t = 0; t < threads; ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }

  BasinCounts counts;
  counts.seeds = seeds.size();
  auto near = [](const Field& a, const Field& b) {
    return sup_distance(a.values(), b.values()) < 1e-6;
  };
  std::vector<StationaryReport> out;
  for (std::size_t i = 0; i < solved.size(); ++i) {
    if (!solved[i]) {
      ++counts.failed;
      continue;
    }
    const StatePair& s = *solved[i];
    bool interior = s.u1.min() > options.interior_tolerance && s.u2.min() > options.interior_tolerance;
    for (std::size_t j = 0; interior && j < grid.size(); ++j)
      interior = s.u1[j] < extinction.u1[j] && s.u2[j] < extinction.u2[j];
    if (!interior) {
      if (s.u1.sup_norm() < 1e-8 && s.u2.sup_norm() < 1e-8)
        ++counts.trivial;
      else if ((near(s.u1, extinction.u1) && s.u2.sup_norm() < 1e-6) ||
               (near(s.u2, extinction.u2) && s.u1.sup_norm() < 1e-6))
        ++counts.extinction;
      else
        ++counts.other;
      continue;
    }
    ++counts.interior;
    const bool duplicate = std::any_of(out.begin(), out.end(), [&](const StationaryReport& r) {
      return std::max(sup_distance(r.state.u1.values(), s.u1.values()),
                      sup_distance(r.state.u2.values(), s.u2.values())) < options.dedup_tolerance;
    });
    if (duplicate) continue;
    StationaryReport r{s, 0.0, 0.0, Stability::stable, params.k, {}, {}, static_cast<int>(i)};
    out.push_back(std::move(r));
  }

  for (auto& r : out) {
    r.residual_inf = stationary_residual(reaction, params, r.state);
    const CoopOperator op = linearized_operator(reaction, params, r.state.u1, r.state.u2);
    r.lambda_principal = principal_eigen_system(op).lambda;
    r.classification = r.lambda_principal < 0.0 ? Stability::unstable : Stability::stable;
    const double floor = std::min(r.state.u1.min(), r.state.u2.min());
    r.audit = audit_max_principle(r.state, params, spec, 10.0 * r.residual_inf / floor + 1e-12);
    r.certificate = instability_certificate(r.state, params, spec);
  }

  if (basins != nullptr) *basins = counts;

  auto argmax = [](const Field& f) {
    const auto v = f.values();
    return static_cast<std::size_t>(std::max_element(v.begin(), v.end()) - v.begin());
  };
  std::stable_sort(out.begin(), out.end(), [&](const StationaryReport& a, const StationaryReport& b) {
    const double na = std::max(a.state.u1.sup_norm(), a.state.u2.sup_norm());
    const double nb = std::max(b.state.u1.sup_norm(), b.state.u2.sup_norm());
    if (na != nb) return na < nb;
    return argmax(a.state.u1) < argmax(b.state.u1);
  });
  return out;
}

}  // namespace pcomp
