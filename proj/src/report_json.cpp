#include "report_json.hpp"

#include <cmath>

namespace pcomp {

namespace {

// NaN and infinities have no JSON spelling.
json number(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

}  // namespace

json to_json(const SystemParams& p) {
  return {{"L", p.L}, {"d", p.d}, {"k", p.k}, {"alpha", p.alpha}};
}

json to_json(const HypothesisReport& r) {
  return {{"m1", r.m1},
          {"m2", r.m2},
          {"M1", r.M1},
          {"M2", r.M2},
          {"a1", r.a1},
          {"a2", r.a2},
          {"nu_max", r.nu_max},
          {"h2_ok", r.h2_ok},
          {"h3_ok", r.h3_ok},
          {"hfreq_ok", r.hfreq_ok},
          {"hfreq_margin", r.hfreq_margin},
          {"audit_nodes", r.audit_nodes}};
}

json to_json(const Scenario& s) {
  return {{"name", s.name},
          {"params", to_json(s.params)},
          {"mu1", format_series(s.spec.mu[0])},
          {"mu2", format_series(s.spec.mu[1])},
          {"nu1", format_series(s.spec.nu[0])},
          {"nu2", format_series(s.spec.nu[1])},
          {"nodes", s.nodes},
          {"tolerance", s.solver.tolerance},
          {"seed", s.run.seed}};
}

json to_json(const ExtinctionStabilityReport& r) {
  return {{"lambda", r.lambda},
          {"blocks", {r.blocks[0], r.blocks[1]}},
          {"classification", to_string(r.classification)}};
}

json to_json(const MaxPrincipleAudit& a) {
  return {{"holds", {a.holds[0], a.holds[1], a.holds[2], a.holds[3]}},
          {"slack", {a.slack[0], a.slack[1], a.slack[2], a.slack[3]}},
          {"all", a.all()}};
}

json to_json(const InstabilityCertificate& c) {
  return {{"lambda_test", c.lambda_test}, {"max_violation", c.max_violation}, {"ok", c.ok}};
}

json to_json(const StationaryReport& r) {
  return {{"k", r.k},
          {"sup_u1", r.state.u1.sup_norm()},
          {"sup_u2", r.state.u2.sup_norm()},
          {"residual", r.residual_inf},
          {"lambda", r.lambda_principal},
          {"classification", to_string(r.classification)},
          {"audit", to_json(r.audit)},
          {"certificate", to_json(r.certificate)},
          {"seed_index", r.seed_index}};
}

json to_json(const StepTelemetry& t) {
  return {{"steps", t.steps},
          {"clamps", t.clamps},
          {"warning_steps", t.warning_steps},
          {"min_before_clamp", t.min_before_clamp}};
}

json to_json(const FrontResult& r) {
  return {{"c", number(r.c)},
          {"fit_r2", number(r.fit_r2)},
          {"slope_stderr", number(r.slope_stderr)},
          {"pulsation_residual", number(r.pulsation_residual)},
          {"amplitude", r.amplitude},
          {"window", {r.window_start, r.window_end}},
          {"verdict", to_string(r.verdict)},
          {"reason", r.reason}};
}

json to_json(const FrontVerification& v) {
  return {{"phi1_nonincreasing", v.phi1_nonincreasing},
          {"phi2_nondecreasing", v.phi2_nondecreasing},
          {"monotonicity_violation", v.monotonicity_violation},
          {"periodic", v.periodic},
          {"limits", v.limits},
          {"limit_error", v.limit_error},
          {"all", v.all()}};
}

json to_json(const CounterPropagation& c) {
  return {{"lambda", c.lambda},
          {"closed_form", c.closed_form},
          {"direct", c.direct},
          {"argmin_mu", c.argmin_mu},
          {"bound_holds", c.direct >= c.closed_form - 1e-6}};
}

json to_json(const BasinCounts& b) {
  return {{"seeds", b.seeds},         {"failed", b.failed},   {"interior", b.interior},
          {"extinction", b.extinction}, {"trivial", b.trivial}, {"other", b.other}};
}

json to_json(const SweepRecord& r) {
  return {{"k", r.k},
          {"states", r.states},
          {"sup_u1", r.sup_u1},
          {"sup_u2", r.sup_u2},
          {"ratio_min", r.ratio_min},
          {"ratio_max", r.ratio_max},
          {"max_product", r.max_product},
          {"kU_min", r.kU_min},
          {"kU_max", r.kU_max},
          {"segregation", r.segregation},
          {"limit_residual", r.limit_residual},
          {"lambda_max", number(r.lambda_max)},
          {"all_unstable", r.all_unstable},
          {"all_certified", r.all_certified},
          {"basins", to_json(r.basins)}};
}

json to_json(const SweepSummary& s) {
  json records = json::array();
  for (const auto& r : s.records) records.push_back(to_json(r));
  return {{"records", records},
          {"sup_norm_nonincreasing", s.sup_norm_nonincreasing},
          {"segregation_decreasing", s.segregation_decreasing},
          {"kU_bounded_below", s.kU_bounded_below},
          {"ratio_bounded", s.ratio_bounded},
          {"empirical_k_star", s.empirical_k_star ? json(*s.empirical_k_star) : json(nullptr)}};
}

json to_json(const SegregatedSolution& s) {
  return {{"kind", to_string(s.kind)},
          {"classification", to_string(s.classification)},
          {"residual", s.residual},
          {"min", s.z.min()},
          {"max", s.z.max()},
          {"seed_index", s.seed_index}};
}

json to_json(const NodalReport& r) {
  return {{"zeros", r.zeros},
          {"plus_widths", r.plus_widths},
          {"minus_widths", r.minus_widths},
          {"plus_measure", r.plus_measure},
          {"minus_measure", r.minus_measure},
          {"radius1", r.radius1},
          {"radius2", r.radius2},
          {"required_length", r.required_length},
          {"contradiction", r.contradiction}};
}

json to_json(const RadiusResult& r) {
  return {{"finite", r.finite},
          {"radius", number(r.radius)},
          {"lambda_at_radius", r.lambda_at_radius},
          {"periodic_lambda", r.periodic_lambda},
          {"iterations", r.iterations}};
}

}  // namespace pcomp
