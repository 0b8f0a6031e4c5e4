#include <doctest.h>

#include <Eigen/Dense>
#include <cmath>

#include "pcomp/eigen.hpp"
#include "pcomp/errors.hpp"
#include "support.hpp"

using namespace pcomp;
using testing::pi;

namespace {

// Galerkin oracle in the Fourier basis exp(2 pi i q x / L), |q| <= Q, for
// -delta d2 - f with f = c0 + a cos + b sin (one harmonic): the continuum value.
double fourier_oracle(double delta, double c0, double a, double b, double L, int Q = 40) {
  const int m = 2 * Q + 1;
  Eigen::MatrixXcd h = Eigen::MatrixXcd::Zero(m, m);
  const std::complex<double> up(a / 2.0, -b / 2.0);  // coefficient of exp(+i w x)
  for (int i = 0; i < m; ++i) {
    const double q = i - Q;
    h(i, i) = delta * std::pow(2.0 * pi * q / L, 2) - c0;
    if (i + 1 < m) {
      h(i + 1, i) = -up;
      h(i, i + 1) = -std::conj(up);
    }
  }
  return Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd>(h).eigenvalues()(0);
}

}  // namespace

TEST_CASE("constant coefficient periodic eigenvalue is -m") {
  const PeriodicGrid g(1.0, 512);
  for (auto [delta, m] : {std::pair{1.0, 1.0}, {2.0, 0.7}, {0.5, 3.0}}) {
    const EigenResult r = principal_eigen_periodic(delta, Field::constant(g, m));
    CHECK(std::abs(r.lambda + m) < 1e-8);
    CHECK(r.residual < 1e-8);
    for (double v : r.phi) CHECK(v == doctest::Approx(1.0).epsilon(1e-8));
  }
}

TEST_CASE("heterogeneous periodic eigenvalue against a Fourier-Galerkin oracle") {
  const double L = 1.5, delta = 0.8;
  const PeriodicGrid g(L, 512);
  const Field f = Field::sample(g, [&](double x) {
    return 1.0 + 0.6 * std::cos(2 * pi * x / L) - 0.4 * std::sin(2 * pi * x / L);
  });
  const EigenResult r = principal_eigen_periodic(delta, f);
  CHECK(r.lambda == doctest::Approx(fourier_oracle(delta, 1.0, 0.6, -0.4, L)).epsilon(1e-5));
  CHECK(r.residual < 1e-8);
  double lo = 1.0, hi = 0.0;
  for (double v : r.phi) {
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  CHECK(lo > 0.0);
  CHECK(hi == doctest::Approx(1.0));
  // The principal value lies below the constant-state value -mean(f).
  CHECK(r.lambda < -1.0);
}

TEST_CASE("dirichlet eigenvalue of a constant coefficient") {
  for (auto [delta, F, R] : {std::tuple{1.0, 1.0, 0.7}, {2.0, 0.3, 1.9}}) {
    const double exact = delta * std::pow(pi / (2.0 * R), 2) - F;
    const double got = dirichlet_eigenvalue(delta, [F](double) { return F; }, Interval(0.0, R, 1023));
    CHECK(got == doctest::Approx(exact).epsilon(1e-5));
  }
}

TEST_CASE("radius formula for constant coefficients") {
  for (auto [F, delta] : {std::pair{1.0, 1.0}, {1.0, 4.0}, {2.5, 0.3}, {0.2, 2.0}, {7.0, 0.05}}) {
    const RadiusResult r = radius_R(0.0, [F](double) { return F; }, 1.0, delta);
    REQUIRE(r.finite);
    CHECK(std::abs(r.radius / (pi / 2.0 * std::sqrt(delta / F)) - 1.0) < 1e-5);
  }
  const RadiusResult none = radius_R(0.0, [](double) { return -1.0; }, 1.0, 1.0);
  CHECK_FALSE(none.finite);
}

TEST_CASE("radius of a heterogeneous coefficient lies between the constant bounds") {
  auto f = [](double x) { return 1.0 + 0.5 * std::sin(2 * pi * x); };
  const RadiusResult r = radius_R(0.25, f, 1.0, 1.0);
  REQUIRE(r.finite);
  CHECK(r.radius > pi / 2.0 / std::sqrt(1.5));
  CHECK(r.radius < pi / 2.0 / std::sqrt(0.5));
  CHECK(std::abs(r.lambda_at_radius) < 1e-6);
}

TEST_CASE("cooperative system eigenvalue") {
  const std::size_t n = 128;
  const PeriodicGrid g(1.0, n);
  SUBCASE("decoupled blocks give the smaller scalar eigenvalue") {
    CoopOperator op{g, 2.0, std::vector<double>(n, 0.3), std::vector<double>(n, -0.4),
                    std::vector<double>(n, 0.0), std::vector<double>(n, 0.0)};
    CHECK(principal_eigen_system(op).lambda == doctest::Approx(-0.3).epsilon(1e-10));
  }
  SUBCASE("triangular coupling") {
    CoopOperator op{g, 1.0, std::vector<double>(n, -1.0), std::vector<double>(n, -2.0),
                    std::vector<double>(n, 3.0), std::vector<double>(n, 0.0)};
    const SystemEigenResult r = principal_eigen_system(op);
    CHECK(r.lambda == doctest::Approx(1.0).epsilon(1e-10));
    CHECK(r.residual < 1e-8);
  }
  SUBCASE("symmetric coupled constant system") {
    // constant mode of [[a, b], [b, a]]: eigenvalues a +- b; lambda(-A) = -(a + b)
    CoopOperator op{g, 1.0, std::vector<double>(n, -0.5), std::vector<double>(n, -0.5),
                    std::vector<double>(n, 2.0), std::vector<double>(n, 2.0)};
    const SystemEigenResult r = principal_eigen_system(op);
    CHECK(r.lambda == doctest::Approx(-1.5).epsilon(1e-10));
    for (double v : r.phi1) CHECK(v == doctest::Approx(1.0).epsilon(1e-8));
    CHECK(op.irreducible());
  }
  SUBCASE("negative coupling is rejected") {
    CoopOperator op{g, 1.0, std::vector<double>(n, 0.0), std::vector<double>(n, 0.0),
                    std::vector<double>(n, -1.0), std::vector<double>(n, 0.0)};
    CHECK_THROWS_AS(op.validate(), UsageError);
  }
}

TEST_CASE("decay-rate family shifts the constant modes") {
  const std::size_t n = 64;
  const PeriodicGrid g(1.0, n);
  CoopOperator op{g, 3.0, std::vector<double>(n, 0.5), std::vector<double>(n, 0.2),
                  std::vector<double>(n, 0.0), std::vector<double>(n, 0.0)};
  const double mu = 0.7;
  CHECK(principal_eigen_system(op.with_decay_rate(mu)).lambda ==
        doctest::Approx(std::min(-0.5 - mu * mu, -0.2 - 3.0 * mu * mu)).epsilon(1e-10));
}
