#include <doctest.h>

#include <Eigen/Dense>
#include <random>

#include "pcomp/tridiag.hpp"

using namespace pcomp;

TEST_CASE("tridiagonal and cyclic solves match a dense solve") {
  std::mt19937 rng(7);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int trial = 0; trial < 5; ++trial) {
    const std::size_t n = 17 + static_cast<std::size_t>(trial) * 9;
    std::vector<double> lo(n), di(n), up(n), rhs(n);
    for (std::size_t i = 0; i < n; ++i) {
      lo[i] = u(rng);
      up[i] = u(rng);
      di[i] = 3.0 + u(rng);
      rhs[i] = u(rng);
    }
    Eigen::MatrixXd plain = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
    for (std::size_t i = 0; i < n; ++i) {
      const auto r = static_cast<Eigen::Index>(i);
      plain(r, r) = di[i];
      if (i > 0) plain(r, r - 1) = lo[i];
      if (i + 1 < n) plain(r, r + 1) = up[i];
    }
    Eigen::MatrixXd cyclic = plain;
    cyclic(0, static_cast<Eigen::Index>(n - 1)) = lo[0];
    cyclic(static_cast<Eigen::Index>(n - 1), 0) = up[n - 1];
    const Eigen::VectorXd b = Eigen::Map<Eigen::VectorXd>(rhs.data(), static_cast<Eigen::Index>(n));

    std::vector<double> x1 = rhs, x2 = rhs;
    TridiagonalSolver(lo, di, up).solve_in_place(x1);
    CyclicTridiagonalSolver(lo, di, up).solve_in_place(x2);
    const Eigen::VectorXd e1 = plain.lu().solve(b), e2 = cyclic.lu().solve(b);
    for (std::size_t i = 0; i < n; ++i) {
      CHECK(x1[i] == doctest::Approx(e1(static_cast<Eigen::Index>(i))).epsilon(1e-12));
      CHECK(x2[i] == doctest::Approx(e2(static_cast<Eigen::Index>(i))).epsilon(1e-12));
    }
  }
}

TEST_CASE("Sturm count and smallest eigenvalue agree with a dense eigensolver") {
  std::mt19937 rng(11);
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  const std::size_t n = 40;
  std::vector<double> di(n), off(n - 1);
  for (auto& v : di) v = u(rng);
  for (auto& v : off) v = u(rng);
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(i)) = di[i];
    if (i + 1 < n) {
      m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(i + 1)) = off[i];
      m(static_cast<Eigen::Index>(i + 1), static_cast<Eigen::Index>(i)) = off[i];
    }
  }
  const Eigen::VectorXd ev = Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(m).eigenvalues();
  for (double sigma : {-3.0, -0.5, 0.0, 1.2, 4.0}) {
    std::size_t below = 0;
    for (Eigen::Index i = 0; i < ev.size(); ++i) below += ev(i) < sigma ? 1 : 0;
    CHECK(sturm_count(di, off, sigma) == below);
  }
  const double lmin = smallest_eigenvalue_tridiagonal(di, off);
  CHECK(lmin == doctest::Approx(ev(0)).epsilon(1e-12));
  const auto v = inverse_iteration_tridiagonal(di, off, lmin);
  double res = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    double mv = di[i] * v[i];
    if (i > 0) mv += off[i - 1] * v[i - 1];
    if (i + 1 < n) mv += off[i] * v[i + 1];
    res = std::max(res, std::abs(mv - lmin * v[i]));
  }
  CHECK(res < 1e-9);
}
