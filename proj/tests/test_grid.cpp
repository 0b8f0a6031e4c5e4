#include <doctest.h>

#include <cmath>

#include "pcomp/errors.hpp"
#include "pcomp/grid.hpp"
#include "support.hpp"

using namespace pcomp;
using testing::pi;

TEST_CASE("grid construction") {
  CHECK_THROWS_AS(PeriodicGrid(1.0, 15), ConfigError);
  CHECK_THROWS_AS(PeriodicGrid(0.0, 64), ConfigError);
  const PeriodicGrid g(2.5, 100);
  CHECK(g.dx() * 100 == doctest::Approx(2.5).epsilon(1e-15));
  CHECK(g.x(0) == 0.0);
  CHECK(g.wrap(-1) == 99);
  CHECK(g.wrap(100) == 0);
  CHECK(refine(g, 4).size() == 400);
  CHECK_THROWS_AS(refine(g, 1), ConfigError);
  CHECK_THROWS_AS(Field(g, std::vector<double>(99, 0.0)), UsageError);
  CHECK_THROWS_AS(Field(g, std::vector<double>(100, std::nan(""))), NumericalError);
}

TEST_CASE("periodic second derivative converges at second order") {
  auto error = [](std::size_t n) {
    const PeriodicGrid g(2.0, n);
    const Field u = Field::sample(g, [](double x) { return std::sin(pi * x) + 0.5 * std::cos(2 * pi * x); });
    const Field d2 = second_derivative_periodic(u, 3.0);
    double e = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      const double x = g.x(j);
      const double exact = 3.0 * (-pi * pi * std::sin(pi * x) - 2.0 * pi * pi * std::cos(2 * pi * x));
      e = std::max(e, std::abs(d2[j] - exact));
    }
    return e;
  };
  const double e1 = error(64), e2 = error(128);
  CHECK(e2 < 0.1);
  CHECK(e1 / e2 == doctest::Approx(4.0).epsilon(0.02));
}

TEST_CASE("dirichlet second derivative uses zero ghost values") {
  const Interval iv(0.3, 0.5, 63);
  std::vector<double> u(iv.nodes);
  for (std::size_t j = 0; j < iv.nodes; ++j) u[j] = std::sin(pi * (iv.x(j) - 0.3 + 0.5));
  const auto d2 = second_derivative_dirichlet(u, iv, 1.0);
  for (std::size_t j = 0; j < iv.nodes; ++j)
    CHECK(d2[j] == doctest::Approx(-pi * pi * u[j]).epsilon(2e-3).scale(1e-3));
  CHECK_THROWS_AS(Interval(0.0, -1.0, 32), ConfigError);
}

TEST_CASE("roll is an exact index shift") {
  const PeriodicGrid g(1.0, 32);
  const Field u = Field::sample(g, [](double x) { return x * x; });
  const Field r = u.rolled(3);
  for (std::size_t j = 0; j < 32; ++j) CHECK(r[(j + 3) % 32] == u[j]);
  CHECK(sup_distance(u.rolled(32).values(), u.values()) == 0.0);
}
