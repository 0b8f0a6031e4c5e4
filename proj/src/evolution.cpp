#include "pcomp/evolution.hpp"

#include <algorithm>
#include <cmath>
#include <optional>

#include "pcomp/errors.hpp"
#include "pcomp/tridiag.hpp"

namespace pcomp {

namespace {

constexpr double kClampThreshold = -1e-14;

// (I - dt delta D)^{-1} on a periodic grid as a convolution with the discrete
// Green's function g, truncated where it drops below 1e-18 g[0]. Summing in a
// fixed offset order for every node keeps the solve exactly roll-equivariant.
class CirculantSolver {
 public:
  CirculantSolver(std::size_t n, double r) : n_(n) {
    std::vector<double> lower(n, -r), upper(n, -r), diag(n, 1.0 + 2.0 * r);
    const CyclicTridiagonalSolver cyclic(std::move(lower), std::move(diag), std::move(upper));
    std::vector<double> g(n, 0.0);
    g[0] = 1.0;
    cyclic.solve_in_place(g);
    std::size_t reach = 0;
    while (reach < n / 2 && std::abs(g[reach + 1]) > 1e-18 * g[0]) ++reach;
    full_ = 2 * reach + 1 >= n;
    if (full_) {
      g_ = std::move(g);
    } else {
      g_.assign(g.begin(), g.begin() + static_cast<std::ptrdiff_t>(reach) + 1);
      // Average the two sides so that the kernel is exactly symmetric.
      for (std::size_t m = 1; m <= reach; ++m) g_[m] = 0.5 * (g[m] + g[n - m]);
    }
  }

  void solve(const std::vector<double>& b, std::vector<double>& out) const {
    const std::size_t n = n_;
    if (full_) {
      // ext[i] = b[(i - n) mod n] for i in [0, 2n).
      ext_.resize(2 * n);
      std::copy(b.begin(), b.end(), ext_.begin());
      std::copy(b.begin(), b.end(), ext_.begin() + static_cast<std::ptrdiff_t>(n));
      for (std::size_t j = 0; j < n; ++j) {
        const double* base = ext_.data() + j + n;
        double acc = 0.0;
        for (std::size_t m = 0; m < n; ++m) acc += g_[m] * base[-static_cast<std::ptrdiff_t>(m)];
        out[j] = acc;
      }
      return;
    }
    const std::size_t reach = g_.size() - 1;
    // ext[i] = b[(i - reach) mod n] for i in [0, n + 2 reach).
    ext_.resize(n + 2 * reach);
    for (std::size_t i = 0; i < ext_.size(); ++i) ext_[i] = b[(i + n * (reach / n + 1) - reach) % n];
    for (std::size_t j = 0; j < n; ++j) {
      const double* base = ext_.data() + j + reach;
      double acc = g_[0] * base[0];
      for (std::size_t m = 1; m <= reach; ++m) {
        const auto sm = static_cast<std::ptrdiff_t>(m);
        acc += g_[m] * (base[-sm] + base[sm]);
      }
      out[j] = acc;
    }
  }

 private:
  std::size_t n_;
  bool full_ = false;
  std::vector<double> g_;
  mutable std::vector<double> ext_;
};

}  // namespace

struct Stepper::Impl {
  Impl(const PeriodicGrid& g, SampledReaction r, const SystemParams& p, double step, Scheme s,
       Boundary b, std::size_t pins)
      : grid(g), reaction(std::move(r)), params(p), dt(step), scheme(s), boundary(b),
        pin_nodes(pins) {}

  PeriodicGrid grid;
  SampledReaction reaction;
  SystemParams params;
  double dt;
  Scheme scheme;
  Boundary boundary;
  std::size_t pin_nodes;
  std::vector<double> pin1, pin2;
  std::optional<CirculantSolver> circ1, circ2;
  std::optional<CyclicTridiagonalSolver> cyc1, cyc2;
  std::optional<TridiagonalSolver> line1, line2;
  StepTelemetry telemetry;
  std::vector<double> r1, r2, s1, s2, a1, a2, b1, b2;

  bool pinned(std::size_t j) const {
    return boundary == Boundary::pinned && (j < pin_nodes || j + pin_nodes >= grid.size());
  }

  void reaction_terms(const std::vector<double>& u1, const std::vector<double>& u2,
                      std::vector<double>& out1, std::vector<double>& out2) const {
    const double k = params.k, ak = params.alpha * params.k;
    for (std::size_t j = 0; j < u1.size(); ++j) {
      const double a = u1[j], b = u2[j];
      out1[j] = a * (reaction.mu[0][j] - reaction.nu[0][j] * a) - k * a * b;
      out2[j] = b * (reaction.mu[1][j] - reaction.nu[1][j] * b) - ak * a * b;
    }
  }

  // Adds delta * D u to out at free nodes.
  void add_diffusion(const std::vector<double>& u, double delta, std::vector<double>& out) const {
    const std::size_t n = u.size();
    const double c = delta / (grid.dx() * grid.dx());
    for (std::size_t j = 0; j < n; ++j) {
      if (pinned(j)) continue;
      const double left = u[(j + n - 1) % n], right = u[(j + 1) % n];
      out[j] += c * ((left - u[j]) + (right - u[j]));
    }
  }

  void implicit_solve(int species, std::vector<double>& rhs, std::vector<double>& out) const {
    const auto& pin = species == 1 ? pin1 : pin2;
    if (boundary == Boundary::periodic) {
      if (circ1) {
        (species == 1 ? *circ1 : *circ2).solve(rhs, out);
      } else {
        (species == 1 ? *cyc1 : *cyc2).solve_in_place(rhs);
        out = rhs;
      }
      return;
    }
    for (std::size_t j = 0; j < rhs.size(); ++j)
      if (pinned(j)) rhs[j] = pin[j];
    (species == 1 ? *line1 : *line2).solve_in_place(rhs);
    out = rhs;
  }

  void clamp(std::vector<double>& u, std::size_t& count) {
    for (double& v : u) {
      if (v < 0.0) {
        if (v < kClampThreshold) {
          ++count;
          telemetry.min_before_clamp = std::min(telemetry.min_before_clamp, v);
        }
        v = 0.0;
      }
    }
  }

  void reset_pins(std::vector<double>& u1, std::vector<double>& u2) const {
    if (boundary != Boundary::pinned) return;
    for (std::size_t j = 0; j < u1.size(); ++j)
      if (pinned(j)) {
        u1[j] = pin1[j];
        u2[j] = pin2[j];
      }
  }

  void step(std::vector<double>& u1, std::vector<double>& u2) {
    const std::size_t n = grid.size();
    if (u1.size() != n || u2.size() != n) throw UsageError("Stepper: state size does not match grid");
    std::size_t clamps = 0;
    reaction_terms(u1, u2, r1, r2);
    if (scheme == Scheme::imex) {
      for (std::size_t j = 0; j < n; ++j) {
        s1[j] = u1[j] + dt * r1[j];
        s2[j] = u2[j] + dt * r2[j];
      }
      implicit_solve(1, s1, a1);
      implicit_solve(2, s2, a2);
      clamp(a1, clamps);
      clamp(a2, clamps);
      reaction_terms(a1, a2, b1, b2);
      for (std::size_t j = 0; j < n; ++j) {
        s1[j] = u1[j] + 0.5 * dt * (r1[j] + b1[j]);
        s2[j] = u2[j] + 0.5 * dt * (r2[j] + b2[j]);
      }
      implicit_solve(1, s1, u1);
      implicit_solve(2, s2, u2);
    } else {
      add_diffusion(u1, 1.0, r1);
      add_diffusion(u2, params.d, r2);
      for (std::size_t j = 0; j < n; ++j) {
        a1[j] = u1[j] + dt * r1[j];
        a2[j] = u2[j] + dt * r2[j];
      }
      reset_pins(a1, a2);
      clamp(a1, clamps);
      clamp(a2, clamps);
      reaction_terms(a1, a2, b1, b2);
      add_diffusion(a1, 1.0, b1);
      add_diffusion(a2, params.d, b2);
      for (std::size_t j = 0; j < n; ++j) {
        u1[j] += 0.5 * dt * (r1[j] + b1[j]);
        u2[j] += 0.5 * dt * (r2[j] + b2[j]);
      }
    }
    reset_pins(u1, u2);
    clamp(u1, clamps);
    clamp(u2, clamps);
    for (std::size_t j = 0; j < n; ++j)
      if (!std::isfinite(u1[j]) || !std::isfinite(u2[j]))
        throw NumericalError("Stepper: non-finite value after step " +
                             std::to_string(telemetry.steps + 1));
    ++telemetry.steps;
    telemetry.clamps += clamps;
    if (static_cast<double>(clamps) > 1e-3 * static_cast<double>(2 * n)) ++telemetry.warning_steps;
  }
};

Stepper::Stepper(const PeriodicGrid& grid, SampledReaction reaction, const SystemParams& params,
                 double dt, Scheme scheme, Boundary boundary, std::size_t pin_nodes,
                 const StatePair* pin, PeriodicSolve solve) {
  params.validate();
  if (!(dt > 0.0) || !std::isfinite(dt)) throw UsageError("time step must be positive");
  const std::size_t n = grid.size();
  for (const auto* v : {&reaction.mu[0], &reaction.mu[1], &reaction.nu[0], &reaction.nu[1]})
    if (v->size() != n) throw UsageError("Stepper: coefficients do not match the grid");
  if (scheme == Scheme::explicit_) {
    const double limit = 0.5 * grid.dx() * grid.dx() / std::max(1.0, params.d);
    if (dt > limit)
      throw UsageError("explicit scheme: dt exceeds the diffusion limit dx^2 / (2 max(1, d)) = " +
                       std::to_string(limit));
  }
  impl_ = std::make_unique<Impl>(grid, std::move(reaction), params, dt, scheme, boundary,
                                 pin_nodes);
  for (auto* v : {&impl_->r1, &impl_->r2, &impl_->s1, &impl_->s2, &impl_->a1, &impl_->a2,
                  &impl_->b1, &impl_->b2})
    v->assign(n, 0.0);

  const double inv = dt / (grid.dx() * grid.dx());
  if (boundary == Boundary::periodic) {
    if (scheme != Scheme::imex) return;
    if (solve == PeriodicSolve::convolution) {
      impl_->circ1.emplace(n, inv);
      impl_->circ2.emplace(n, inv * params.d);
      return;
    }
    for (int species = 1; species <= 2; ++species) {
      const double r = inv * (species == 1 ? 1.0 : params.d);
      (species == 1 ? impl_->cyc1 : impl_->cyc2)
          .emplace(std::vector<double>(n, -r), std::vector<double>(n, 1.0 + 2.0 * r),
                   std::vector<double>(n, -r));
    }
    return;
  }
  if (pin == nullptr || pin->u1.size() != n || pin->u2.size() != n)
    throw UsageError("pinned boundary needs pin values on the grid");
  if (pin_nodes < 1 || 2 * pin_nodes >= n) throw UsageError("pinned zones must leave free nodes");
  impl_->pin1 = pin->u1.vector();
  impl_->pin2 = pin->u2.vector();
  if (scheme == Scheme::imex) {
    for (int species = 1; species <= 2; ++species) {
      const double r = inv * (species == 1 ? 1.0 : params.d);
      std::vector<double> lower(n, -r), diag(n, 1.0 + 2.0 * r), upper(n, -r);
      for (std::size_t j = 0; j < n; ++j)
        if (impl_->pinned(j)) {
          lower[j] = 0.0;
          upper[j] = 0.0;
          diag[j] = 1.0;
        }
      (species == 1 ? impl_->line1 : impl_->line2)
          .emplace(std::move(lower), std::move(diag), std::move(upper));
    }
  }
}

Stepper::~Stepper() = default;
Stepper::Stepper(Stepper&&) noexcept = default;
Stepper& Stepper::operator=(Stepper&&) noexcept = default;

void Stepper::step(std::vector<double>& u1, std::vector<double>& u2) { impl_->step(u1, u2); }

StatePair Stepper::step(const StatePair& state) {
  std::vector<double> u1 = state.u1.vector(), u2 = state.u2.vector();
  impl_->step(u1, u2);
  return {Field(state.grid(), std::move(u1)), Field(state.grid(), std::move(u2))};
}

double Stepper::dt() const noexcept { return impl_->dt; }
const StepTelemetry& Stepper::telemetry() const noexcept { return impl_->telemetry; }

SampledReaction sample_tiled(const ReactionSpec& spec, const PeriodicGrid& grid, double period) {
  const double per_period = period / grid.dx();
  const auto m = static_cast<std::size_t>(std::llround(per_period));
  if (m == 0 || std::abs(per_period - static_cast<double>(m)) > 1e-9 * per_period ||
      grid.size() % m != 0)
    throw ConfigError("grid does not span a whole number of coefficient periods");
  const SampledReaction cell = sample(spec, PeriodicGrid(period, m), period);
  SampledReaction out;
  for (std::size_t i = 0; i < 2; ++i) {
    out.mu[i].resize(grid.size());
    out.nu[i].resize(grid.size());
    for (std::size_t j = 0; j < grid.size(); ++j) {
      out.mu[i][j] = cell.mu[i][j % m];
      out.nu[i][j] = cell.nu[i][j % m];
    }
  }
  return out;
}

double stability_bound(const ReactionSpec& spec, const SystemParams& params,
                       const ExtinctionStates& extinction) {
  const HypothesisReport h = check_hypotheses(spec, params);
  const double M = std::max(h.M1, h.M2);
  const double umax = std::max(extinction.u1.max(), extinction.u2.max());
  return 0.5 / (M + params.k * umax * std::max(1.0, params.alpha));
}

double default_dt(const ReactionSpec& spec, const SystemParams& params,
                  const ExtinctionStates& extinction) {
  return std::min(1e-3, 0.25 * stability_bound(spec, params, extinction));
}

Trajectory integrate(Stepper& stepper, const StatePair& initial, const EvolutionConfig& config,
                     const Observer& observer) {
  if (!(config.t_end >= 0.0)) throw UsageError("t_end must be non-negative");
  const auto steps = static_cast<std::size_t>(std::ceil(config.t_end / stepper.dt() - 1e-9));
  const auto& grid = initial.grid();
  std::vector<double> u1 = initial.u1.vector(), u2 = initial.u2.vector();
  Trajectory tr;
  tr.times.push_back(0.0);
  tr.states.push_back(initial);
  if (observer) observer(0.0, u1, u2);
  for (std::size_t s = 1; s <= steps; ++s) {
    stepper.step(u1, u2);
    const double t = static_cast<double>(s) * stepper.dt();
    if (observer) observer(t, u1, u2);
    if (s == steps || (config.record_every > 0 && s % config.record_every == 0)) {
      tr.times.push_back(t);
      tr.states.push_back({Field(grid, u1), Field(grid, u2)});
    }
  }
  tr.telemetry = stepper.telemetry();
  return tr;
}

StatePair poincare_map(const StatePair& initial, double t, const SystemParams& params,
                       const ReactionSpec& spec, const EvolutionConfig& config) {
  if (!(t >= 0.0)) throw UsageError("poincare_map: t must be non-negative");
  if (t == 0.0) return initial;
  const auto steps = static_cast<std::size_t>(std::ceil(t / config.dt - 1e-9));
  const double dt = t / static_cast<double>(steps);
  const bool several_periods = initial.grid().length() > params.L * (1.0 + 1e-12);
  Stepper stepper(initial.grid(), sample_tiled(spec, initial.grid(), params.L), params, dt,
                  config.scheme, Boundary::periodic, 0, nullptr,
                  several_periods ? PeriodicSolve::convolution : PeriodicSolve::cyclic);
  std::vector<double> u1 = initial.u1.vector(), u2 = initial.u2.vector();
  for (std::size_t s = 0; s < steps; ++s) stepper.step(u1, u2);
  return {Field(initial.grid(), std::move(u1)), Field(initial.grid(), std::move(u2))};
}

Field transform_J(const Field& u2, const Field& extinction2) {
  if (!(u2.grid() == extinction2.grid())) throw UsageError("transform_J: grids differ");
  std::vector<double> v(u2.size());
  for (std::size_t j = 0; j < v.size(); ++j) v[j] = extinction2[j] - u2[j];
  return Field(u2.grid(), std::move(v));
}

bool cooperative_le(const StatePair& a, const StatePair& b) {
  for (std::size_t j = 0; j < a.u1.size(); ++j)
    if (a.u1[j] > b.u1[j] || a.u2[j] < b.u2[j]) return false;
  return true;
}

ComparisonResult comparison_test(const StatePair& a, const StatePair& b, double t,
                                 const SystemParams& params, const ReactionSpec& spec,
                                 const EvolutionConfig& config, double tolerance) {
  if (!(a.grid() == b.grid())) throw UsageError("comparison_test: grids differ");
  if (!cooperative_le(a, b)) throw UsageError("comparison_test: a <= b does not hold");
  if (a.u1.vector() == b.u1.vector() && a.u2.vector() == b.u2.vector())
    throw UsageError("comparison_test: a and b coincide");
  const StatePair qa = poincare_map(a, t, params, spec, config);
  const StatePair qb = poincare_map(b, t, params, spec, config);
  ComparisonResult r;
  r.min_gap = INFINITY;
  for (std::size_t j = 0; j < qa.u1.size(); ++j) {
    r.min_gap = std::min(r.min_gap, qb.u1[j] - qa.u1[j]);
    r.min_gap = std::min(r.min_gap, qa.u2[j] - qb.u2[j]);
  }
  r.strict = r.min_gap > tolerance;
  return r;
}

}  // namespace pcomp
