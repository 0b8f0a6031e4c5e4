#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "pcomp/asymptotics.hpp"
#include "pcomp/eigen.hpp"
#include "pcomp/evolution.hpp"
#include "pcomp/front.hpp"
#include "pcomp/model.hpp"
#include "pcomp/stationary.hpp"
#include "support.hpp"

using namespace pcomp;
using testing::pi;

namespace {

using Pairs = std::initializer_list<std::pair<double, double>>;

struct Outcome {
  bool pass = true;
  std::ostringstream detail;

  void require(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      detail << " [failed: " << what << "]";
    }
  }
};

struct Criterion {
  int id;
  const char* name;
  double budget_seconds;
  std::function<void(Outcome&)> run;
};

std::vector<StationaryReport> coexistence_at(double k) {
  const ReactionSpec spec = testing::default_spec();
  const SystemParams p = testing::params(2.0, k);
  const PeriodicGrid g(1.0, kDefaultNodes);
  const ExtinctionStates e = compute_extinction_states(spec, p, g);
  CoexistenceOptions o;
  o.threads = 4;
  return find_coexistence_states(p, spec, e, default_seed_bank(e, spec, p), o);
}

void constant_eigenvalue(Outcome& out) {
  const PeriodicGrid g(1.0, 512);
  double worst = 0.0;
  for (auto [delta, m] : Pairs{{1.0, 1.0}, {2.0, 0.7}, {0.5, 3.0}}) {
    const EigenResult r = principal_eigen_periodic(delta, Field::constant(g, m));
    worst = std::max(worst, std::abs(r.lambda + m));
  }
  out.detail << "max |lambda + m| = " << worst;
  out.require(worst <= 1e-8, "error above 1e-8");
}

void radius_formula(Outcome& out) {
  double worst = 0.0;
  for (auto [F, delta] : Pairs{{1.0, 1.0}, {1.0, 4.0}, {2.5, 0.3}, {0.2, 2.0}, {7.0, 0.05}}) {
    const RadiusResult r = radius_R(0.0, [F](double) { return F; }, 1.0, delta);
    out.require(r.finite, "radius not finite");
    worst = std::max(worst, std::abs(r.radius / (pi / 2.0 * std::sqrt(delta / F)) - 1.0));
  }
  out.detail << "max relative error = " << worst;
  out.require(worst <= 1e-5, "relative error above 1e-5");
}

void hfreq_consistency(Outcome& out) {
  std::mt19937_64 rng(20240521);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  double worst = 0.0;
  int agree = 0, below = 0;
  for (int i = 0; i < 20; ++i) {
    ReactionSpec spec = testing::constant_spec(1.0, 1.0);
    spec.mu[0] = FourierSeries(0.5 + 2.0 * u(rng), {0.3 * u(rng)}, {0.2 * u(rng)});
    spec.mu[1] = FourierSeries(0.5 + 2.0 * u(rng), {}, {0.3 * u(rng)});
    const double d = 0.2 + 3.0 * u(rng);
    SystemParams p = testing::params(d, 10.0);
    const HypothesisReport probe = check_hypotheses(spec, p);
    const double threshold = pi * (1.0 / std::sqrt(probe.M1) + std::sqrt(d / probe.M2));
    p.L = threshold * (i % 2 == 0 ? 1.0 - 0.05 * u(rng) : 1.0 + 0.05 * u(rng));
    const HypothesisReport h = check_hypotheses(spec, p);
    const double M1 = h.M1, M2 = h.M2;
    const double r1 = radius_R(0.0, [M1](double) { return M1; }, p.L, 1.0).radius;
    const double r2 = radius_R(0.0, [M2](double) { return M2; }, p.L, d).radius;
    const double margin = 2.0 * (r1 + r2) - p.L;
    worst = std::max(worst, std::abs(margin - h.hfreq_margin));
    agree += (margin > 0.0) == h.hfreq_ok ? 1 : 0;
    below += h.hfreq_ok ? 1 : 0;
  }
  out.detail << agree << "/20 verdicts agree, " << below << " satisfy the condition, max margin gap = "
             << worst;
  out.require(agree == 20, "verdict mismatch");
  out.require(worst <= 1e-6, "margin gap above 1e-6");
  out.require(below > 0 && below < 20, "scenarios do not straddle the boundary");
}

void extinction_states(Outcome& out) {
  const PeriodicGrid g(1.0, kDefaultNodes);
  const ExtinctionStates c =
      compute_extinction_states(testing::constant_spec(1.5, 0.8, 0.5, 2.0), testing::params(2.0, 1.0), g);
  double exact = 0.0;
  for (std::size_t j = 0; j < g.size(); ++j)
    exact = std::max({exact, std::abs(c.u1[j] - 3.0), std::abs(c.u2[j] - 0.4)});

  ReactionSpec spec = testing::default_spec();
  spec.mu[1] = FourierSeries(1.0, {0.2}, {});
  const SystemParams p = testing::params(2.0, 0.0);
  const ExtinctionStates e = compute_extinction_states(spec, p, g);
  const double residual = std::max(e.residual1, e.residual2);

  Stepper st(g, sample(spec, g, 1.0), p, 0.01);
  std::vector<double> u1(g.size(), 0.5), u2(g.size(), 0.0);
  for (int s = 0; s < 6000; ++s) st.step(u1, u2);
  std::vector<double> v1(g.size(), 0.0), v2(g.size(), 0.5);
  for (int s = 0; s < 6000; ++s) st.step(v1, v2);
  const double agreement = std::max(sup_distance(u1, e.u1.values()), sup_distance(v2, e.u2.values()));
  double mean = 0.0;
  for (double v : e.u1.values()) mean += v / static_cast<double>(g.size());

  out.detail << "constant error = " << exact << ", residual = " << residual
             << ", integration gap = " << agreement << ", mean u1 = " << mean;
  out.require(exact <= 1e-10, "constant state not exact");
  out.require(residual <= 1e-10, "residual above 1e-10");
  out.require(agreement <= 1e-6, "long-time integration disagrees");
  out.require(mean > 0.7 && mean < 1.3, "mean outside (0.7, 1.3)");
}

void stability_threshold(Outcome& out) {
  const PeriodicGrid g(1.0, 64);
  const ReactionSpec spec = testing::constant_spec(1.0, 1.0);
  const ExtinctionStates e = compute_extinction_states(spec, testing::params(1.0, 1.0), g);
  int matches = 0, total = 0;
  double worst = 0.0;
  for (double k : {0.2, 0.5, 0.9, 0.97, 1.03, 1.1, 2.0, 10.0}) {
    const SystemParams p = testing::params(1.0, k);
    for (const auto& r : extinction_stability(p, spec, e)) {
      ++total;
      matches += (r.classification == Stability::stable) == (k > 1.0) ? 1 : 0;
      worst = std::max(worst, std::abs(r.lambda - std::min(1.0, k - 1.0)));
    }
  }
  const double k_star = extinction_stability_threshold(testing::params(1.0, 1.0), spec, e, 0.1, 10.0, 1e-6);
  out.detail << matches << "/" << total << " classifications match, threshold k = " << k_star
             << ", max eigenvalue error = " << worst;
  out.require(matches == total, "classification mismatch");
  out.require(std::abs(k_star - 1.0) <= 0.02, "threshold off by more than 0.02");
  out.require(worst <= 1e-8, "eigenvalue differs from alpha k - 1");
}

std::vector<StationaryReport> states100, states1000;

void coexistence_instability(Outcome& out) {
  states100 = coexistence_at(100.0);
  states1000 = coexistence_at(1000.0);
  auto sup = [](const std::vector<StationaryReport>& s) {
    double m = 0.0;
    for (const auto& r : s) m = std::max({m, r.state.u1.sup_norm(), r.state.u2.sup_norm()});
    return m;
  };
  bool all = true;
  double lmax = -1e300;
  for (const auto* list : {&states100, &states1000})
    for (const auto& r : *list) {
      all = all && r.lambda_principal < 0.0 && r.certificate.ok;
      lmax = std::max(lmax, r.lambda_principal);
    }
  out.detail << states100.size() << " states at k=100, " << states1000.size()
             << " at k=1000, max lambda = " << lmax << ", sup-norms " << sup(states100) << " -> "
             << sup(states1000);
  out.require(!states100.empty() && !states1000.empty(), "no coexistence state found");
  out.require(all, "a state is not unstable or lacks a certificate");
  out.require(sup(states1000) < sup(states100), "sup-norm does not decrease");
  out.require(sup(states1000) < 0.05, "sup-norm at k=1000 not below 0.05");
}

void kpp_speed(Outcome& out) {
  const ReactionSpec spec = testing::constant_spec(1.0, 1.0);
  const double d = 2.0;
  const SystemParams p = testing::params(d, 0.0, 1.0, 2.0);
  FrontRunOptions o;
  o.periods = 100;
  o.snapshots = 50;

  o.t_end = 80.0;
  o.initial.center_fraction = 0.1;
  o.initial.species2 = false;
  o.speed.species = 1;
  const FrontRun a = run_front(spec, p, o);
  const double e1 = std::abs(a.result.c / 2.0 - 1.0);

  o.t_end = 60.0;
  o.initial.center_fraction = 0.9;
  o.initial.species1 = false;
  o.initial.species2 = true;
  o.speed.species = 2;
  const FrontRun b = run_front(spec, p, o);
  const double e2 = std::abs(-b.result.c / (2.0 * std::sqrt(d)) - 1.0);

  out.detail << "species 1: c = " << a.result.c << " vs 2 (error " << e1 << "), species 2: c = "
             << b.result.c << " vs -" << 2.0 * std::sqrt(d) << " (error " << e2 << ")";
  out.require(std::isfinite(e1) && e1 <= 0.05, "species-1 speed off by more than 5%");
  out.require(std::isfinite(e2) && e2 <= 0.05, "species-2 speed off by more than 5%");
}

void pulsating_front(Outcome& out) {
  const ReactionSpec spec = testing::default_spec();
  const SystemParams p = testing::params(2.0, 100.0);
  FrontRunOptions o;
  o.periods = 100;
  o.nodes_per_period = 64;
  o.t_end = 60.0;
  const FrontRun run = run_front(spec, p, o);
  const FrontDomain domain(p.L, o.periods, o.nodes_per_period);
  const FrontVerification v =
      verify_front(run.result, domain, run.final_state, tile_extinction(domain, run.cell));
  const FrontResult& r = run.result;
  out.detail << "c = " << r.c << ", r2 = " << r.fit_r2 << ", pulsation = " << r.pulsation_residual
             << " (amplitude " << r.amplitude << "), monotonicity = " << v.monotonicity_violation
             << ", limits = " << v.limit_error << ", verdict " << to_string(r.verdict);
  out.require(r.verdict == FrontVerdict::accepted, "front not accepted");
  out.require(r.fit_r2 >= 0.999, "fit r2 below 0.999");
  out.require(r.pulsation_residual <= 1e-2 * r.amplitude, "pulsation residual too large");
  out.require(v.phi1_nonincreasing && v.phi2_nondecreasing, "profile not monotone");
  out.require(v.limits, "limits off by more than 2%");
}

void counter_propagation(Outcome& out) {
  if (states100.empty() && states1000.empty()) {
    states100 = coexistence_at(100.0);
    states1000 = coexistence_at(1000.0);
  }
  const ReactionSpec spec = testing::default_spec();
  double worst = 1e300;
  std::size_t count = 0;
  for (auto [k, list] : std::initializer_list<std::pair<double, const std::vector<StationaryReport>*>>{
           {100.0, &states100}, {1000.0, &states1000}})
    for (const auto& r : *list) {
      const CounterPropagation c = counter_propagation_bound(r, testing::params(2.0, k), spec);
      worst = std::min(worst, c.direct - c.closed_form);
      ++count;
    }
  out.detail << count << " states, min(direct - closed form) = " << worst;
  out.require(count > 0, "no states to test");
  out.require(worst >= -1e-6, "direct minimum below the closed-form bound");
}

void segregated_sets(Outcome& out) {
  const ReactionSpec spec = testing::default_spec();
  const SystemParams p = testing::params(2.0, 100.0);
  const PeriodicGrid g(1.0, kDefaultNodes);
  const auto gamma = solve_segregated(SegregatedKind::gamma, spec, p, g);
  const auto eta = solve_segregated(SegregatedKind::eta, spec, p, g);
  const ExtinctionStates e = compute_extinction_states(spec, p, g);
  std::vector<double> plus(g.size()), minus(g.size()), zero(g.size(), 0.0);
  for (std::size_t j = 0; j < g.size(); ++j) {
    plus[j] = p.alpha * e.u1[j];
    minus[j] = -p.d * e.u2[j];
  }
  bool eta_ok = eta.size() == 3;
  if (eta_ok) {
    eta_ok = sup_distance(eta[0].z.values(), minus) <= 1e-6 &&
             sup_distance(eta[1].z.values(), zero) <= 1e-6 &&
             sup_distance(eta[2].z.values(), plus) <= 1e-6;
  }
  const bool gamma_ok = gamma.size() == 1 && gamma[0].z.sup_norm() <= 1e-6;

  const ReactionSpec wide = testing::constant_spec(4.0, 4.0);
  const SystemParams q = testing::params(1.0, 100.0, 1.0, 10.0);
  const bool outside = !check_hypotheses(wide, q).hfreq_ok;
  const auto wide_eta = solve_segregated(SegregatedKind::eta, wide, q, PeriodicGrid(10.0, 512));
  std::size_t changing = 0;
  for (const auto& s : wide_eta) changing += s.classification == NodalClass::sign_changing ? 1 : 0;

  out.detail << "H_freq: gamma " << gamma.size() << " solution(s), eta " << eta.size()
             << " solution(s); L=10 d=1 mu=4 (condition violated: " << (outside ? "yes" : "no")
             << "): " << changing << " sign-changing eta solution(s) of " << wide_eta.size();
  out.require(gamma_ok, "gamma set is not {0}");
  out.require(eta_ok, "eta set is not {-d u~2, 0, alpha u~1}");
  out.require(outside, "comparison scenario satisfies the condition");
}

void semiflow(Outcome& out) {
  const ReactionSpec spec = testing::default_spec();
  const SystemParams p = testing::params(2.0, 10.0);
  const PeriodicGrid g(1.0, 128);
  const ExtinctionStates e = compute_extinction_states(spec, p, g);
  EvolutionConfig c;
  c.dt = 1e-3;
  std::mt19937_64 rng(20240521);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  int strict = 0;
  for (int trial = 0; trial < 10; ++trial) {
    std::vector<double> a1(g.size()), a2(g.size()), b1(g.size()), b2(g.size());
    const double phase = 2 * pi * u(rng);
    for (std::size_t j = 0; j < g.size(); ++j) {
      const double w = 0.5 + 0.4 * std::sin(2 * pi * g.x(j) + phase);
      a1[j] = 0.5 * w * e.u1[j];
      b1[j] = a1[j] + 0.3 * u(rng) * e.u1[j] * (j % 7 == 0 ? 1.0 : 0.0);
      b2[j] = 0.4 * (1.0 - w) * e.u2[j];
      a2[j] = b2[j];
    }
    b1[trial] += 0.1;
    const StatePair a{Field(g, a1), Field(g, a2)}, b{Field(g, b1), Field(g, b2)};
    strict += comparison_test(a, b, 0.5, p, spec, c).strict ? 1 : 0;
  }

  const PeriodicGrid wide(4.0, 4 * 64);
  const StatePair w0{Field::sample(wide, [](double x) { return 0.4 + 0.3 * std::sin(0.5 * pi * x); }),
                     Field::sample(wide, [](double x) { return 0.5 + 0.2 * std::cos(1.5 * pi * x); })};
  const StatePair q = poincare_map(w0, 0.5, p, spec, c);
  const StatePair qs = poincare_map({w0.u1.rolled(64), w0.u2.rolled(64)}, 0.5, p, spec, c);
  const double shift = std::max(sup_distance(q.u1.rolled(64).values(), qs.u1.values()),
                                sup_distance(q.u2.rolled(64).values(), qs.u2.values()));

  const StatePair start{Field(g, std::vector<double>(e.u1.vector())), Field::constant(g, 0.3)};
  const StatePair whole = poincare_map(start, 0.8, p, spec, c);
  const StatePair twice = poincare_map(poincare_map(start, 0.3, p, spec, c), 0.5, p, spec, c);
  const double compose = std::max(sup_distance(whole.u1.values(), twice.u1.values()),
                                  sup_distance(whole.u2.values(), twice.u2.values()));

  out.detail << strict << "/10 ordered pairs strictly ordered, shift gap = " << shift
             << ", composition gap = " << compose;
  out.require(strict == 10, "comparison failed");
  out.require(shift == 0.0, "shift equivariance not exact");
  out.require(compose <= 1e-7, "composition gap above 1e-7");
}

}  // namespace

int main(int argc, char** argv) {
  std::set<int> only;
  for (int i = 1; i < argc; ++i) only.insert(std::atoi(argv[i]));

  const std::vector<Criterion> criteria = {
      {1, "constant-coefficient periodic eigenvalue", 1.0, constant_eigenvalue},
      {2, "radius formula", 5.0, radius_formula},
      {3, "high-frequency condition consistency", 30.0, hfreq_consistency},
      {4, "extinction states", 10.0, extinction_states},
      {5, "extinction-state stability threshold", 10.0, stability_threshold},
      {6, "coexistence instability", 300.0, coexistence_instability},
      {7, "scalar KPP speeds", 240.0, kpp_speed},
      {8, "pulsating front at k=100", 600.0, pulsating_front},
      {9, "counter-propagation bound", 120.0, counter_propagation},
      {10, "segregated set equalities", 300.0, segregated_sets},
      {11, "monotone semiflow", 120.0, semiflow},
  };

  int failed = 0;
  for (const auto& c : criteria) {
    if (!only.empty() && !only.contains(c.id)) continue;
    Outcome out;
    const auto t0 = std::chrono::steady_clock::now();
    try {
      c.run(out);
    } catch (const std::exception& e) {
      out.pass = false;
      out.detail << " [exception: " << e.what() << "]";
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (secs > c.budget_seconds) {
      out.pass = false;
      out.detail << " [over the " << c.budget_seconds << " s budget]";
    }
    failed += out.pass ? 0 : 1;
    std::printf("%s criterion %2d (%s): %s (%.2f s)\n", out.pass ? "PASS" : "FAIL", c.id, c.name,
                out.detail.str().c_str(), secs);
    std::fflush(stdout);
  }
  return failed == 0 ? 0 : 1;
}
