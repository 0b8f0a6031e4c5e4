#include <doctest.h>

#include <cmath>
#include <random>

#include "pcomp/errors.hpp"
#include "pcomp/evolution.hpp"
#include "support.hpp"

using namespace pcomp;
using testing::pi;

namespace {

StatePair smooth_pair(const PeriodicGrid& g, std::mt19937_64& rng, double scale) {
  std::uniform_real_distribution<double> a(-0.2, 0.2);
  const double c1 = a(rng), s1 = a(rng), c2 = a(rng), s2 = a(rng);
  auto make = [&](double c, double s) {
    return Field::sample(g, [&](double x) {
      const double w = 2 * pi * x / g.length();
      return scale * (0.5 + c * std::cos(w) + s * std::sin(2 * w));
    });
  };
  return {make(c1, s1), make(c2, s2)};
}

}  // namespace

TEST_CASE("decoupled constant data follow the logistic ODE") {
  const PeriodicGrid g(1.0, 32);
  const ReactionSpec spec = testing::constant_spec(1.0, 2.0, 1.0, 1.0);
  const SystemParams p = testing::params(1.5, 0.0);
  Stepper st(g, sample(spec, g, 1.0), p, 1e-3);
  EvolutionConfig c;
  c.t_end = 2.0;
  const Trajectory tr = integrate(st, {Field::constant(g, 0.1), Field::constant(g, 0.2)}, c);
  auto logistic = [](double r, double u0, double t) { return r * u0 / (u0 + (r - u0) * std::exp(-r * t)); };
  CHECK(tr.times.back() == doctest::Approx(2.0));
  CHECK(tr.states.back().u1[5] == doctest::Approx(logistic(1.0, 0.1, 2.0)).epsilon(1e-5));
  CHECK(tr.states.back().u2[5] == doctest::Approx(logistic(2.0, 0.2, 2.0)).epsilon(1e-5));
  CHECK(tr.telemetry.clamps == 0);
}

TEST_CASE("extinction states are fixed points of the stepper") {
  const PeriodicGrid g(1.0, 128);
  const ReactionSpec spec = testing::default_spec();
  const SystemParams p = testing::params(2.0, 100.0);
  const ExtinctionStates e = compute_extinction_states(spec, p, g);
  Stepper st(g, sample(spec, g, 1.0), p, 1e-3);
  std::vector<double> u1 = e.u1.vector(), u2(128, 0.0);
  for (int s = 0; s < 500; ++s) st.step(u1, u2);
  CHECK(sup_distance(u1, e.u1.values()) < 1e-9);
  CHECK(*std::max_element(u2.begin(), u2.end()) == 0.0);
}

TEST_CASE("IMEX and explicit schemes agree") {
  const PeriodicGrid g(1.0, 64);
  const ReactionSpec spec = testing::default_spec();
  const SystemParams p = testing::params(2.0, 5.0);
  std::mt19937_64 rng(3);
  const StatePair init = smooth_pair(g, rng, 1.0);
  Stepper a(g, sample(spec, g, 1.0), p, 5e-5);
  Stepper b(g, sample(spec, g, 1.0), p, 5e-5, Scheme::explicit_);
  StatePair x = init, y = init;
  for (int s = 0; s < 4000; ++s) {
    x = a.step(x);
    y = b.step(y);
  }
  CHECK(sup_distance(x.u1.values(), y.u1.values()) < 1e-5);
  CHECK(sup_distance(x.u2.values(), y.u2.values()) < 1e-5);
  CHECK_THROWS_AS(Stepper(g, sample(spec, g, 1.0), p, 1e-3, Scheme::explicit_), UsageError);
}

TEST_CASE("time-step bounds") {
  const PeriodicGrid g(1.0, 64);
  const ReactionSpec spec = testing::default_spec();
  const SystemParams p = testing::params(2.0, 100.0);
  const ExtinctionStates e = compute_extinction_states(spec, p, g);
  const double bound = stability_bound(spec, p, e);
  CHECK(bound == doctest::Approx(0.5 / (1.3 + 100.0 * std::max(e.u1.max(), e.u2.max()))).epsilon(1e-3));
  CHECK(default_dt(spec, p, e) <= 0.25 * bound + 1e-15);
  CHECK(default_dt(spec, testing::params(2.0, 0.0), e) == doctest::Approx(1e-3));
}

TEST_CASE("Poincare map commutes with period shifts") {
  const ReactionSpec spec = testing::default_spec();
  const SystemParams p = testing::params(2.0, 10.0);
  const PeriodicGrid g(4.0, 128);  // four periods of 32 nodes
  std::mt19937_64 rng(5);
  const StatePair init = smooth_pair(g, rng, 0.8);
  EvolutionConfig c;
  c.dt = 2e-3;
  const StatePair a = poincare_map(init, 0.2, p, spec, c);
  const StatePair shifted{init.u1.rolled(32), init.u2.rolled(32)};
  const StatePair b = poincare_map(shifted, 0.2, p, spec, c);
  CHECK(sup_distance(a.u1.rolled(32).values(), b.u1.values()) == 0.0);
  CHECK(sup_distance(a.u2.rolled(32).values(), b.u2.values()) == 0.0);
}

TEST_CASE("semiflow composition") {
  const ReactionSpec spec = testing::default_spec();
  const SystemParams p = testing::params(2.0, 10.0);
  const PeriodicGrid g(1.0, 64);
  std::mt19937_64 rng(9);
  const StatePair init = smooth_pair(g, rng, 0.8);
  EvolutionConfig c;
  c.dt = 1e-3;
  const StatePair whole = poincare_map(init, 0.5, p, spec, c);
  const StatePair half = poincare_map(poincare_map(init, 0.2, p, spec, c), 0.3, p, spec, c);
  CHECK(sup_distance(whole.u1.values(), half.u1.values()) < 1e-7);
  CHECK(sup_distance(whole.u2.values(), half.u2.values()) < 1e-7);
}

TEST_CASE("comparison principle in the cooperative order") {
  const ReactionSpec spec = testing::default_spec();
  const SystemParams p = testing::params(2.0, 10.0);
  const PeriodicGrid g(1.0, 64);
  const ExtinctionStates e = compute_extinction_states(spec, p, g);
  std::mt19937_64 rng(13);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  EvolutionConfig c;
  c.dt = 1e-3;
  for (int trial = 0; trial < 3; ++trial) {
    std::vector<double> a1(64), a2(64), b1(64), b2(64);
    for (std::size_t j = 0; j < 64; ++j) {
      a1[j] = 0.6 * u(rng) * e.u1[j];
      b1[j] = a1[j] + 0.2 * u(rng) * e.u1[j];
      b2[j] = 0.6 * u(rng) * e.u2[j];
      a2[j] = b2[j] + 0.2 * u(rng) * e.u2[j];
    }
    const StatePair a{Field(g, a1), Field(g, a2)}, b{Field(g, b1), Field(g, b2)};
    REQUIRE(cooperative_le(a, b));
    const ComparisonResult r = comparison_test(a, b, 0.5, p, spec, c);
    CHECK(r.strict);
    CHECK(r.min_gap > 0.0);
    CHECK_THROWS_AS(comparison_test(b, a, 0.5, p, spec, c), UsageError);
  }
}

TEST_CASE("transform J is an involution reversing the second component") {
  const PeriodicGrid g(1.0, 16);
  const Field ext = Field::constant(g, 2.0);
  const Field u = Field::sample(g, [](double x) { return x; });
  CHECK(sup_distance(transform_J(transform_J(u, ext), ext).values(), u.values()) == 0.0);
  CHECK(transform_J(u, ext)[3] == doctest::Approx(2.0 - u[3]));
}
