#include "pcomp/asymptotics.hpp"

#include <Eigen/SparseCore>
#include <Eigen/SparseLU>
#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>

#include "pcomp/eigen.hpp"
#include "pcomp/errors.hpp"

namespace pcomp {

namespace {

using SparseMatrix = Eigen::SparseMatrix<double>;
using Triplet = Eigen::Triplet<double>;

struct KinkProblem {
  SegregatedKind kind;
  SampledReaction reaction;
  double alpha, d;
  double c;  // 1 / dx^2
};

struct KinkValue {
  double value, slope;
};

// term[z] with z+ and z- replaced by (z + s)/2 and (s - z)/2, s = sqrt(z^2 + eps^2);
// eps = 0 gives the exact kink.
KinkValue kink_term(const KinkProblem& p, std::size_t j, double z, double eps) {
  double plus, dplus;
  if (eps > 0.0) {
    const double s = std::hypot(z, eps);
    plus = 0.5 * (z + s);
    dplus = 0.5 * (1.0 + z / s);
  } else {
    plus = z > 0.0 ? z : 0.0;
    dplus = z > 0.0 ? 1.0 : 0.0;
  }
  const double minus = plus - z, dminus = dplus - 1.0;
  const double mu1 = p.reaction.mu[0][j], mu2 = p.reaction.mu[1][j];
  if (p.kind == SegregatedKind::gamma)
    return {mu1 * plus - mu2 * minus / p.d, mu1 * dplus - mu2 * dminus / p.d};
  const double nu1 = p.reaction.nu[0][j] / p.alpha, nu2 = p.reaction.nu[1][j] / p.d;
  return {(mu1 - nu1 * plus) * plus - (mu2 - nu2 * minus) * minus / p.d,
          (mu1 - 2.0 * nu1 * plus) * dplus - (mu2 - 2.0 * nu2 * minus) * dminus / p.d};
}

// -z'' - term[z]
Eigen::VectorXd kink_residual(const KinkProblem& p, const Eigen::VectorXd& z, double eps) {
  const auto n = z.size();
  Eigen::VectorXd r(n);
  for (Eigen::Index j = 0; j < n; ++j) {
    const double lap = z((j + n - 1) % n) - 2.0 * z(j) + z((j + 1) % n);
    r(j) = -p.c * lap - kink_term(p, static_cast<std::size_t>(j), z(j), eps).value;
  }
  return r;
}

double sup(const Eigen::VectorXd& v) { return v.cwiseAbs().maxCoeff(); }

bool newton_kink(const KinkProblem& p, Eigen::VectorXd& z, double eps, double target,
                 int max_iterations) {
  const int n = static_cast<int>(z.size());
  Eigen::VectorXd r = kink_residual(p, z, eps);
  double res = sup(r);
  Eigen::SparseLU<SparseMatrix> lu;
  for (int it = 0; it < max_iterations && res > target; ++it) {
    std::vector<Triplet> t;
    t.reserve(3 * static_cast<std::size_t>(n));
    for (int j = 0; j < n; ++j) {
      const double slope = kink_term(p, static_cast<std::size_t>(j), z(j), eps).slope;
      t.emplace_back(j, j, 2.0 * p.c - slope);
      t.emplace_back(j, (j + n - 1) % n, -p.c);
      t.emplace_back(j, (j + 1) % n, -p.c);
    }
    SparseMatrix m(n, n);
    m.setFromTriplets(t.begin(), t.end());
    lu.compute(m);
    if (lu.info() != Eigen::Success) return false;
    const Eigen::VectorXd step = lu.solve(r);
    if (lu.info() != Eigen::Success || !step.allFinite()) return false;

    double theta = 1.0;
    bool improved = false;
    for (int h = 0; h < 40; ++h, theta *= 0.5) {
      const Eigen::VectorXd trial = z - theta * step;
      const Eigen::VectorXd tr = kink_residual(p, trial, eps);
      const double tres = sup(tr);
      if (tres < res) {
        z = trial;
        r = tr;
        res = tres;
        improved = true;
        break;
      }
    }
    if (!improved) break;
  }
  return res <= target;
}

KinkProblem make_problem(SegregatedKind kind, const ReactionSpec& spec, const SystemParams& params,
                         const PeriodicGrid& grid) {
  return {kind, sample(spec, grid, params.L), params.alpha, params.d, 1.0 / (grid.dx() * grid.dx())};
}

}  // namespace

double segregated_residual(SegregatedKind kind, const ReactionSpec& spec,
                           const SystemParams& params, const Field& z) {
  const KinkProblem p = make_problem(kind, spec, params, z.grid());
  const Eigen::Map<const Eigen::VectorXd> v(z.vector().data(), static_cast<Eigen::Index>(z.size()));
  return sup(kink_residual(p, v, 0.0));
}

NodalClass classify_nodal(const Field& z, double tolerance) {
  const double lo = z.min(), hi = z.max();
  if (hi <= tolerance && lo >= -tolerance) return NodalClass::trivial;
  if (lo >= -tolerance) return NodalClass::plus_state;
  if (hi <= tolerance) return NodalClass::minus_state;
  return NodalClass::sign_changing;
}

std::vector<SegregatedSolution> solve_segregated(SegregatedKind kind, const ReactionSpec& spec,
                                                 const SystemParams& params,
                                                 const PeriodicGrid& grid,
                                                 const SegregatedOptions& options) {
  params.validate();
  const KinkProblem p = make_problem(kind, spec, params, grid);
  const std::size_t n = grid.size();
  const ExtinctionStates ext = compute_extinction_states(spec, params, grid);

  std::vector<Eigen::VectorXd> seeds;
  auto from = [&](const Field& f, double scale) {
    Eigen::VectorXd v(static_cast<Eigen::Index>(n));
    for (std::size_t j = 0; j < n; ++j) v(static_cast<Eigen::Index>(j)) = scale * f[j];
    return v;
  };
  seeds.push_back(from(ext.u1, params.alpha));
  seeds.push_back(from(ext.u2, -params.d));
  seeds.push_back(from(ext.u1, 0.5 * params.alpha));
  seeds.push_back(from(ext.u2, -0.5 * params.d));
  seeds.push_back(Eigen::VectorXd::Zero(static_cast<Eigen::Index>(n)));

  const double scale = std::max(params.alpha * ext.u1.max(), params.d * ext.u2.max());
  std::mt19937_64 rng(options.seed);
  std::uniform_real_distribution<double> amp(-1.0, 1.0);
  std::uniform_int_distribution<int> modes(1, 4);
  for (std::size_t s = 0; s < options.random_seeds; ++s) {
    const int harmonics = modes(rng);
    std::vector<double> a(2 * static_cast<std::size_t>(harmonics));
    for (double& v : a) v = amp(rng);
    const double offset = 0.3 * amp(rng);
    Eigen::VectorXd v(static_cast<Eigen::Index>(n));
    for (std::size_t j = 0; j < n; ++j) {
      const double w = 2.0 * std::numbers::pi * grid.x(j) / grid.length();
      double x = offset;
      for (int q = 0; q < harmonics; ++q)
        x += a[2 * static_cast<std::size_t>(q)] * std::cos((q + 1) * w) +
             a[2 * static_cast<std::size_t>(q) + 1] * std::sin((q + 1) * w);
      v(static_cast<Eigen::Index>(j)) = scale * x;
    }
    if (v.maxCoeff() <= 0.0 || v.minCoeff() >= 0.0) v(0) = -v(0);
    seeds.push_back(std::move(v));
  }

  std::vector<SegregatedSolution> out;
  for (std::size_t s = 0; s < seeds.size(); ++s) {
    Eigen::VectorXd z = seeds[s];
    newton_kink(p, z, options.regularization, 1e-3 * options.tolerance, options.max_iterations);
    if (!z.allFinite()) continue;
    newton_kink(p, z, 0.0, 1e-2 * options.tolerance, 20);
    const double res = sup(kink_residual(p, z, 0.0));
    if (!(res <= options.tolerance)) continue;
    Field f(grid, std::vector<double>(z.data(), z.data() + z.size()));
    const bool duplicate = std::any_of(out.begin(), out.end(), [&](const SegregatedSolution& o) {
      return sup_distance(o.z.values(), f.values()) < options.dedup_tolerance;
    });
    if (duplicate) continue;
    const NodalClass cls = classify_nodal(f);
    out.push_back({std::move(f), kind, cls, res, static_cast<int>(s)});
  }
  auto mean = [](const Field& f) {
    double m = 0.0;
    for (double v : f.values()) m += v;
    return m / static_cast<double>(f.size());
  };
  std::sort(out.begin(), out.end(), [&](const SegregatedSolution& a, const SegregatedSolution& b) {
    return mean(a.z) < mean(b.z);
  });
  return out;
}

NodalReport nodal_structure(const Field& z, const ReactionSpec& spec, const SystemParams& params) {
  if (classify_nodal(z, 0.0) != NodalClass::sign_changing)
    throw UsageError("nodal_structure requires a sign-changing field");
  const auto& grid = z.grid();
  const std::size_t n = grid.size();
  const double dx = grid.dx(), length = grid.length();

  // Crossings on the circle, located by linear interpolation; zero nodes take
  // the sign of the previous non-zero node.
  std::size_t start = 0;
  while (z[start] == 0.0) ++start;
  struct Crossing {
    double x;
    bool rising;
  };
  std::vector<Crossing> crossings;
  std::size_t prev = start;
  for (std::size_t step = 1; step <= n; ++step) {
    const std::size_t j = (start + step) % n;
    if (z[j] == 0.0) continue;
    if ((z[j] > 0.0) != (z[prev] > 0.0)) {
      const double xp = static_cast<double>(prev) * dx;
      double xj = static_cast<double>(j) * dx;
      if (xj <= xp) xj += length;
      const double t = z[prev] / (z[prev] - z[j]);
      crossings.push_back({std::fmod(xp + t * (xj - xp), length), z[j] > 0.0});
    }
    prev = j;
  }

  NodalReport r;
  r.zeros = crossings.size();
  std::sort(crossings.begin(), crossings.end(),
            [](const Crossing& a, const Crossing& b) { return a.x < b.x; });
  for (std::size_t i = 0; i < crossings.size(); ++i) {
    const Crossing& a = crossings[i];
    const Crossing& b = crossings[(i + 1) % crossings.size()];
    double width = b.x - a.x;
    if (width <= 0.0) width += length;
    (a.rising ? r.plus_widths : r.minus_widths).push_back(width);
  }
  for (double w : r.plus_widths) r.plus_measure += w;
  for (double w : r.minus_widths) r.minus_measure += w;

  const HypothesisReport hyp = check_hypotheses(spec, params);
  const double M1 = hyp.M1, M2 = hyp.M2;
  r.radius1 = radius_R(0.0, [M1](double) { return M1; }, params.L, 1.0).radius;
  r.radius2 = radius_R(0.0, [M2](double) { return M2; }, params.L, params.d).radius;
  r.required_length = static_cast<double>(r.zeros) * (r.radius1 + r.radius2);
  r.contradiction = r.required_length > params.L;
  return r;
}

std::vector<double> default_k_values() { return {10.0, 30.0, 100.0, 300.0, 1000.0}; }

SweepRecord sweep_entry(const ReactionSpec& spec, SystemParams params, double k,
                        const ExtinctionStates& extinction, const CoexistenceOptions& options,
                        std::size_t random_seeds, std::uint64_t seed) {
  params.k = k;
  params.validate();
  const auto seeds = default_seed_bank(extinction, spec, params, random_seeds, seed);
  SweepRecord rec;
  rec.k = k;
  const auto states = find_coexistence_states(params, spec, extinction, seeds, options, &rec.basins);
  rec.states = states.size();
  if (states.empty()) return rec;

  const auto& grid = extinction.u1.grid();
  const SampledReaction reaction = sample(spec, grid, params.L);
  const std::size_t n = grid.size();
  rec.ratio_min = std::numeric_limits<double>::infinity();
  rec.kU_min = std::numeric_limits<double>::infinity();
  rec.lambda_max = -std::numeric_limits<double>::infinity();
  rec.all_unstable = true;
  rec.all_certified = true;
  for (const auto& s : states) {
    const Field& u1 = s.state.u1;
    const Field& u2 = s.state.u2;
    const double s1 = u1.sup_norm(), s2 = u2.sup_norm();
    rec.sup_u1 = std::max(rec.sup_u1, s1);
    rec.sup_u2 = std::max(rec.sup_u2, s2);
    const double ratio = s2 / (params.alpha * s1);
    rec.ratio_min = std::min(rec.ratio_min, ratio);
    rec.ratio_max = std::max(rec.ratio_max, ratio);
    rec.kU_min = std::min({rec.kU_min, k * s1, k * s2});
    rec.kU_max = std::max({rec.kU_max, k * s1, k * s2});
    double integral = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      rec.max_product = std::max(rec.max_product, k * u1[j] * u2[j]);
      integral += u1[j] * u2[j] * grid.dx();
    }
    rec.segregation = std::max(rec.segregation, integral);

    // -U1'' = U1 f1[0] - U1 U2,  -d U2'' = U2 f2[0] - alpha U1 U2 with U = k u.
    const Field l1 = second_derivative_periodic(u1, 1.0);
    const Field l2 = second_derivative_periodic(u2, params.d);
    for (std::size_t j = 0; j < n; ++j) {
      const double U1 = k * u1[j], U2 = k * u2[j];
      const double r1 = k * l1[j] + U1 * reaction.mu[0][j] - U1 * U2;
      const double r2 = k * l2[j] + U2 * reaction.mu[1][j] - params.alpha * U1 * U2;
      rec.limit_residual = std::max({rec.limit_residual, std::abs(r1), std::abs(r2)});
    }
    rec.lambda_max = std::max(rec.lambda_max, s.lambda_principal);
    rec.all_unstable = rec.all_unstable && s.classification == Stability::unstable;
    rec.all_certified = rec.all_certified && s.certificate.ok;
  }
  return rec;
}

SweepSummary sweep_k(const ReactionSpec& spec, const SystemParams& base,
                     const std::vector<double>& k_values, const PeriodicGrid& grid,
                     const CoexistenceOptions& options, std::size_t random_seeds,
                     std::uint64_t seed) {
  for (std::size_t i = 0; i < k_values.size(); ++i) {
    if (!(k_values[i] > 0.0) || !std::isfinite(k_values[i]))
      throw ConfigError("sweep k values must be positive and finite");
    if (i > 0 && !(k_values[i] > k_values[i - 1]))
      throw ConfigError("sweep k values must be increasing");
  }
  const ExtinctionStates extinction = compute_extinction_states(spec, base, grid, options.newton);
  SweepSummary summary;
  for (double k : k_values)
    summary.records.push_back(sweep_entry(spec, base, k, extinction, options, random_seeds, seed));

  std::vector<const SweepRecord*> found;
  for (const auto& r : summary.records)
    if (r.states > 0) found.push_back(&r);
  if (found.empty()) return summary;

  summary.sup_norm_nonincreasing = true;
  summary.segregation_decreasing = true;
  for (std::size_t i = 1; i < found.size(); ++i) {
    const double a = std::max(found[i - 1]->sup_u1, found[i - 1]->sup_u2);
    const double b = std::max(found[i]->sup_u1, found[i]->sup_u2);
    summary.sup_norm_nonincreasing = summary.sup_norm_nonincreasing && b <= a * (1.0 + 1e-9);
    summary.segregation_decreasing =
        summary.segregation_decreasing && found[i]->segregation < found[i - 1]->segregation;
  }
  const double floor = 0.5 * found.front()->kU_min;
  double rmin = std::numeric_limits<double>::infinity(), rmax = 0.0;
  summary.kU_bounded_below = floor > 0.0;
  for (const auto* r : found) {
    summary.kU_bounded_below = summary.kU_bounded_below && r->kU_min >= floor;
    rmin = std::min(rmin, r->ratio_min);
    rmax = std::max(rmax, r->ratio_max);
  }
  const double r0min = found.front()->ratio_min, r0max = found.front()->ratio_max;
  summary.ratio_bounded = rmin >= 0.5 * r0min && rmax <= 2.0 * r0max && std::isfinite(rmax);

  // Smallest k from which every later entry has all states unstable and certified.
  for (std::size_t i = summary.records.size(); i-- > 0;) {
    const auto& r = summary.records[i];
    if (r.states == 0 || !r.all_unstable || !r.all_certified) break;
    summary.empirical_k_star = r.k;
  }
  return summary;
}

std::string to_string(SegregatedKind kind) {
  return kind == SegregatedKind::eta ? "eta" : "gamma";
}

std::string to_string(NodalClass c) {
  switch (c) {
    case NodalClass::trivial: return "trivial";
    case NodalClass::plus_state: return "plus_state";
    case NodalClass::minus_state: return "minus_state";
    case NodalClass::sign_changing: return "sign_changing";
  }
  return "unknown";
}

}  // namespace pcomp
