#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace pcomp {

/// LU factorization (no pivoting) of a tridiagonal matrix with rows
/// lower[i] * x[i-1] + diag[i] * x[i] + upper[i] * x[i+1]. Intended for the
/// diagonally dominant matrices produced by implicit diffusion.
class TridiagonalSolver {
 public:
  TridiagonalSolver(std::vector<double> lower, std::vector<double> diag, std::vector<double> upper);

  std::size_t size() const noexcept { return pivot_.size(); }
  void solve_in_place(std::span<double> rhs) const;

 private:
  std::vector<double> lower_;
  std::vector<double> upper_;  // upper band divided by the pivots
  std::vector<double> pivot_;  // reciprocal pivots
};

/// Tridiagonal matrix with the two periodic corner entries
/// (row 0 couples to n-1 through `lower[0]`, row n-1 to 0 through `upper[n-1]`),
/// solved by Sherman-Morrison on top of a plain tridiagonal factorization.
class CyclicTridiagonalSolver {
 public:
  CyclicTridiagonalSolver(std::vector<double> lower, std::vector<double> diag,
                          std::vector<double> upper);

  std::size_t size() const noexcept { return z_.size(); }
  void solve_in_place(std::span<double> rhs) const;

 private:
  TridiagonalSolver inner_;
  std::vector<double> z_;
  double corner_first_;
  double corner_last_;
  double gamma_;
  double denom_;
};

/// Number of eigenvalues strictly below sigma of the symmetric tridiagonal
/// matrix (diag, off), by counting negative pivots of T - sigma I.
std::size_t sturm_count(std::span<const double> diag, std::span<const double> off, double sigma);

/// Smallest eigenvalue of a symmetric tridiagonal matrix by Sturm bisection,
/// accurate to a few ulps of the Gershgorin bound.
double smallest_eigenvalue_tridiagonal(std::span<const double> diag, std::span<const double> off);

/// Eigenvector for an eigenvalue `lambda` previously isolated from below, by
/// inverse iteration on T - sigma I with sigma slightly below lambda.
std::vector<double> inverse_iteration_tridiagonal(std::span<const double> diag,
                                                  std::span<const double> off, double lambda);

}  // namespace pcomp
