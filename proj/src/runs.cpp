#include "runs.hpp"

#include <cmath>
#include <numbers>

#include "pcomp/errors.hpp"

namespace pcomp {

namespace {

const char* kX = "x [length]";

CoexistenceOptions coexistence_options(const Scenario& s) {
  CoexistenceOptions o;
  o.newton.tolerance = s.solver.tolerance;
  o.threads = s.solver.threads;
  return o;
}

NewtonOptions newton_options(const Scenario& s) {
  NewtonOptions o;
  o.tolerance = s.solver.tolerance;
  return o;
}

Table field_table(std::string name, const PeriodicGrid& grid,
                  std::vector<std::pair<std::string, const std::vector<double>*>> columns) {
  Table t{std::move(name), {kX}, {}};
  for (const auto& c : columns) t.columns.push_back(c.first);
  for (std::size_t j = 0; j < grid.size(); ++j) {
    std::vector<double> row{grid.x(j)};
    for (const auto& c : columns) row.push_back((*c.second)[j]);
    t.rows.push_back(std::move(row));
  }
  return t;
}

double mean(const Field& f) {
  double m = 0.0;
  for (double v : f.values()) m += v;
  return m / static_cast<double>(f.size());
}

RunOutput run_check(const Scenario& s) {
  RunOutput out;
  const HypothesisReport h = check_hypotheses(s.spec, s.params);
  const double M1 = h.M1, M2 = h.M2;
  const RadiusResult r1 = radius_R(0.0, [M1](double) { return M1; }, s.params.L, 1.0);
  const RadiusResult r2 = radius_R(0.0, [M2](double) { return M2; }, s.params.L, s.params.d);
  const double margin = 2.0 * (r1.radius + r2.radius) - s.params.L;
  out.report = {{"hypotheses", to_json(h)},
                {"radius1", to_json(r1)},
                {"radius2", to_json(r2)},
                {"radius_margin", margin},
                {"hfreq_consistent", (margin > 0.0) == h.hfreq_ok}};
  const PeriodicGrid grid = s.grid();
  const SampledReaction c = sample(s.spec, grid, s.params.L);
  out.tables.push_back(field_table("coefficients", grid,
                                   {{"mu1 [1/time]", &c.mu[0]},
                                    {"mu2 [1/time]", &c.mu[1]},
                                    {"nu1 [1/(time density)]", &c.nu[0]},
                                    {"nu2 [1/(time density)]", &c.nu[1]}}));
  return out;
}

RunOutput run_extinction(const Scenario& s, const SystemParams& params) {
  RunOutput out;
  const PeriodicGrid grid = s.grid();
  const ExtinctionStates e = compute_extinction_states(s.spec, params, grid, newton_options(s));
  const auto stab = extinction_stability(params, s.spec, e);
  out.report = {{"residual1", e.residual1},
                {"residual2", e.residual2},
                {"mean_u1", mean(e.u1)},
                {"mean_u2", mean(e.u2)},
                {"sup_u1", e.u1.sup_norm()},
                {"sup_u2", e.u2.sup_norm()},
                {"stability_u1_state", to_json(stab[0])},
                {"stability_u2_state", to_json(stab[1])}};
  out.tables.push_back(field_table("extinction", grid,
                                   {{"u1_tilde [density]", &e.u1.vector()},
                                    {"u2_tilde [density]", &e.u2.vector()}}));
  return out;
}

RunOutput run_eigen(const Scenario& s, const SystemParams& params) {
  RunOutput out;
  const PeriodicGrid grid = s.grid();
  const SampledReaction c = sample(s.spec, grid, s.params.L);
  const EigenResult e1 = principal_eigen_periodic(1.0, Field(grid, c.mu[0]));
  const EigenResult e2 = principal_eigen_periodic(params.d, Field(grid, c.mu[1]));
  const ExtinctionStates ext = compute_extinction_states(s.spec, params, grid, newton_options(s));
  const auto stab = extinction_stability(params, s.spec, ext);
  out.report = {{"lambda_species1_at_zero", e1.lambda},
                {"residual_species1", e1.residual},
                {"lambda_species2_at_zero", e2.lambda},
                {"residual_species2", e2.residual},
                {"system_at_u1_state", to_json(stab[0])},
                {"system_at_u2_state", to_json(stab[1])}};
  out.tables.push_back(field_table("eigenfunctions", grid,
                                   {{"phi1 [1]", &e1.phi}, {"phi2 [1]", &e2.phi}}));
  return out;
}

RunOutput run_coexist(const Scenario& s, const SystemParams& params) {
  RunOutput out;
  const PeriodicGrid grid = s.grid();
  const ExtinctionStates ext = compute_extinction_states(s.spec, params, grid, newton_options(s));
  const auto seeds = default_seed_bank(ext, s.spec, params, s.run.random_seeds, s.run.seed);
  BasinCounts basins;
  const auto states =
      find_coexistence_states(params, s.spec, ext, seeds, coexistence_options(s), &basins);
  json list = json::array();
  Table t{"states", {"state [index]", kX, "u1 [density]", "u2 [density]"}, {}};
  for (std::size_t i = 0; i < states.size(); ++i) {
    json entry = to_json(states[i]);
    if (states[i].classification == Stability::unstable)
      entry["counter_propagation"] = to_json(counter_propagation_bound(states[i], params, s.spec));
    list.push_back(entry);
    for (std::size_t j = 0; j < grid.size(); ++j)
      t.rows.push_back({static_cast<double>(i), grid.x(j), states[i].state.u1[j],
                        states[i].state.u2[j]});
  }
  out.report = {{"k", params.k},
                {"states", list},
                {"basins", to_json(basins)},
                {"note", "seed-bank search; absence of further states is not certified"}};
  out.tables.push_back(std::move(t));
  return out;
}

RunOutput run_simulate(const Scenario& s, const SystemParams& params, double t_end) {
  RunOutput out;
  const PeriodicGrid grid = s.grid();
  const ExtinctionStates ext = compute_extinction_states(s.spec, params, grid, newton_options(s));
  const double dt = s.solver.dt > 0.0 ? s.solver.dt : default_dt(s.spec, params, ext);
  std::vector<double> u1(grid.size()), u2(grid.size());
  for (std::size_t j = 0; j < grid.size(); ++j) {
    const double w = std::sin(2.0 * std::numbers::pi * grid.x(j) / grid.length());
    u1[j] = 0.5 * ext.u1[j] * (1.0 + 0.2 * w);
    u2[j] = 0.5 * ext.u2[j] * (1.0 - 0.2 * w);
  }
  const StatePair initial{Field(grid, std::move(u1)), Field(grid, std::move(u2))};
  Stepper stepper(grid, sample(s.spec, grid, s.params.L), params, dt);
  EvolutionConfig config;
  config.dt = dt;
  config.t_end = t_end;
  config.record_every = s.run.record_every;
  const Trajectory traj = integrate(stepper, initial, config);

  Table series{"timeseries",
               {"t [time]", "sup_u1 [density]", "sup_u2 [density]", "mean_u1 [density]",
                "mean_u2 [density]"},
               {}};
  for (std::size_t i = 0; i < traj.times.size(); ++i) {
    const StatePair& st = traj.states[i];
    series.rows.push_back(
        {traj.times[i], st.u1.sup_norm(), st.u2.sup_norm(), mean(st.u1), mean(st.u2)});
  }
  const StatePair& last = traj.states.back();
  const SampledReaction reaction = sample(s.spec, grid, s.params.L);
  out.report = {{"dt", dt},
                {"t_end", traj.times.back()},
                {"telemetry", to_json(traj.telemetry)},
                {"final_sup_u1", last.u1.sup_norm()},
                {"final_sup_u2", last.u2.sup_norm()},
                {"final_stationary_residual", stationary_residual(reaction, params, last)},
                {"distance_to_u1_state",
                 std::max(sup_distance(last.u1.values(), ext.u1.values()), last.u2.sup_norm())},
                {"distance_to_u2_state",
                 std::max(sup_distance(last.u2.values(), ext.u2.values()), last.u1.sup_norm())}};
  out.tables.push_back(std::move(series));
  out.tables.push_back(field_table("final", grid,
                                   {{"u1 [density]", &last.u1.vector()},
                                    {"u2 [density]", &last.u2.vector()}}));
  return out;
}

RunOutput run_front_job(const Scenario& s, const SystemParams& params, double t_end, int species) {
  RunOutput out;
  FrontRunOptions o;
  o.periods = s.run.front_periods;
  o.nodes_per_period = s.run.front_nodes_per_period;
  o.t_end = t_end;
  o.dt = s.solver.dt;
  o.speed.species = species;
  const FrontRun run = run_front(s.spec, params, o);
  const FrontDomain domain(params.L, o.periods, o.nodes_per_period);
  const StatePair tiled = tile_extinction(domain, run.cell);
  const FrontVerification v = verify_front(run.result, domain, run.final_state, tiled);
  out.inconclusive = run.result.verdict == FrontVerdict::rejected ||
                     run.result.verdict == FrontVerdict::inconclusive;
  out.report = {{"result", to_json(run.result)},
                {"verification", to_json(v)},
                {"dt", run.dt},
                {"periods", o.periods},
                {"nodes_per_period", o.nodes_per_period},
                {"t_end", t_end},
                {"tracked_species", species},
                {"telemetry", to_json(run.telemetry)}};
  Table track{"track", {"t [time]", "position [length]"}, {}};
  for (std::size_t i = 0; i < run.track.times.size(); ++i)
    track.rows.push_back({run.track.times[i], run.track.positions[i]});
  Table profile{"profile", {"xi [length]", kX, "phi1 [density]", "phi2 [density]"}, {}};
  const FrontProfile& p = run.result.profile;
  for (std::size_t i = 0; i < p.xi.size(); ++i) profile.rows.push_back({p.xi[i], p.x[i], p.phi1[i], p.phi2[i]});
  out.tables.push_back(std::move(track));
  out.tables.push_back(std::move(profile));
  return out;
}

RunOutput run_sweep(const Scenario& s) {
  RunOutput out;
  const SweepSummary sum = sweep_k(s.spec, s.params, s.run.k_values, s.grid(),
                                   coexistence_options(s), s.run.random_seeds, s.run.seed);
  out.report = to_json(sum);
  Table t{"sweep",
          {"k [1/(time density)]", "states [count]", "sup_u1 [density]", "sup_u2 [density]",
           "ratio_min [1]", "ratio_max [1]", "max_k_u1_u2 [1/time]", "kU_min [1/time]",
           "kU_max [1/time]", "segregation [density^2 length]", "limit_residual [1/time^2]",
           "lambda_max [1/time]", "all_unstable [bool]", "all_certified [bool]"},
          {}};
  for (const auto& r : sum.records)
    t.rows.push_back({r.k, static_cast<double>(r.states), r.sup_u1, r.sup_u2, r.ratio_min,
                      r.ratio_max, r.max_product, r.kU_min, r.kU_max, r.segregation,
                      r.limit_residual, r.states ? r.lambda_max : 0.0,
                      r.all_unstable ? 1.0 : 0.0, r.all_certified ? 1.0 : 0.0});
  out.tables.push_back(std::move(t));
  return out;
}

RunOutput run_segregate(const Scenario& s, const SystemParams& params, int which) {
  RunOutput out;
  const PeriodicGrid grid = s.grid();
  SegregatedOptions o;
  o.seed = s.run.seed;
  const HypothesisReport h = check_hypotheses(s.spec, params);
  Table t{"solutions", {"solution [index]", "kind [0 eta, 1 gamma]", kX, "z [density]"}, {}};
  json kinds = json::object();
  std::size_t index = 0;
  for (SegregatedKind kind : {SegregatedKind::eta, SegregatedKind::gamma}) {
    if (which == 0 && kind != SegregatedKind::eta) continue;
    if (which == 1 && kind != SegregatedKind::gamma) continue;
    const auto sols = solve_segregated(kind, s.spec, params, grid, o);
    json list = json::array();
    std::size_t sign_changing = 0;
    for (const auto& sol : sols) {
      json entry = to_json(sol);
      if (sol.classification == NodalClass::sign_changing) {
        ++sign_changing;
        entry["nodal"] = to_json(nodal_structure(sol.z, s.spec, params));
      }
      list.push_back(entry);
      for (std::size_t j = 0; j < grid.size(); ++j)
        t.rows.push_back({static_cast<double>(index), kind == SegregatedKind::eta ? 0.0 : 1.0,
                          grid.x(j), sol.z[j]});
      ++index;
    }
    kinds[to_string(kind)] = {{"solutions", list},
                              {"sign_changing", sign_changing},
                              {"seeds", 5 + o.random_seeds}};
  }
  out.report = {{"hfreq_ok", h.hfreq_ok},
                {"hfreq_margin", h.hfreq_margin},
                {"kinds", kinds},
                {"note", "seed-bank search; a missing sign-changing solution is evidence, not proof"}};
  out.tables.push_back(std::move(t));
  return out;
}

}  // namespace

std::string to_string(RunKind kind) {
  switch (kind) {
    case RunKind::check: return "check";
    case RunKind::extinction: return "extinction";
    case RunKind::eigen: return "eigen";
    case RunKind::coexist: return "coexist";
    case RunKind::simulate: return "simulate";
    case RunKind::front: return "front";
    case RunKind::sweep: return "sweep";
    case RunKind::segregate: return "segregate";
  }
  return "unknown";
}

RunOutput execute(const Scenario& scenario, const RunRequest& request) {
  validate_scenario(scenario);
  SystemParams params = scenario.params;
  if (request.k >= 0.0) params.k = request.k;
  params.validate();
  if (request.species != 1 && request.species != 2)
    throw UsageError("tracked species must be 1 or 2");
  if (request.segregate < 0 || request.segregate > 2)
    throw UsageError("segregate kind must be eta, gamma or both");

  RunOutput out;
  switch (request.kind) {
    case RunKind::check: out = run_check(scenario); break;
    case RunKind::extinction: out = run_extinction(scenario, params); break;
    case RunKind::eigen: out = run_eigen(scenario, params); break;
    case RunKind::coexist: out = run_coexist(scenario, params); break;
    case RunKind::simulate:
      out = run_simulate(scenario, params,
                         request.t_end > 0.0 ? request.t_end : scenario.run.simulate_t_end);
      break;
    case RunKind::front:
      out = run_front_job(scenario, params,
                          request.t_end > 0.0 ? request.t_end : scenario.run.front_t_end,
                          request.species);
      break;
    case RunKind::sweep: out = run_sweep(scenario); break;
    case RunKind::segregate: out = run_segregate(scenario, params, request.segregate); break;
  }
  json report = {{"subcommand", to_string(request.kind)},
                 {"scenario", to_json(scenario)},
                 {"k", params.k},
                 {"status", out.inconclusive ? "inconclusive" : "ok"}};
  report["result"] = std::move(out.report);
  out.report = std::move(report);
  return out;
}

std::string table_csv(const Table& table, const std::string& manifest) {
  std::string out = "# manifest: " + manifest + "\n";
  for (std::size_t i = 0; i < table.columns.size(); ++i) {
    if (i) out += ',';
    out += table.columns[i];
  }
  out += '\n';
  for (const auto& row : table.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i) out += ',';
      out += std::isfinite(row[i]) ? format_number(row[i]) : std::string("nan");
    }
    out += '\n';
  }
  return out;
}

}  // namespace pcomp
