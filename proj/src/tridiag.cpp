#include "pcomp/tridiag.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "pcomp/errors.hpp"

namespace pcomp {

TridiagonalSolver::TridiagonalSolver(std::vector<double> lower, std::vector<double> diag,
                                     std::vector<double> upper)
    : lower_(std::move(lower)), upper_(std::move(upper)), pivot_(std::move(diag)) {
  const std::size_t n = pivot_.size();
  if (n == 0 || lower_.size() != n || upper_.size() != n)
    throw UsageError("tridiagonal solver: inconsistent band sizes");
  // Forward elimination stores the multipliers in lower_ and the pivots in pivot_.
  for (std::size_t i = 1; i < n; ++i) {
    if (pivot_[i - 1] == 0.0) throw NumericalError("tridiagonal solver: zero pivot");
    lower_[i] /= pivot_[i - 1];
    pivot_[i] -= lower_[i] * upper_[i - 1];
  }
  if (pivot_[n - 1] == 0.0) throw NumericalError("tridiagonal solver: zero pivot");
  // Back substitution then reads x[i] = rhs[i] / p[i] - (upper[i] / p[i]) x[i+1].
  for (std::size_t i = 0; i < n; ++i) {
    pivot_[i] = 1.0 / pivot_[i];
    upper_[i] *= pivot_[i];
  }
}

void TridiagonalSolver::solve_in_place(std::span<double> rhs) const {
  const std::size_t n = pivot_.size();
  if (rhs.size() != n) throw UsageError("tridiagonal solver: rhs size mismatch");
  for (std::size_t i = 1; i < n; ++i) rhs[i] -= lower_[i] * rhs[i - 1];
  rhs[n - 1] *= pivot_[n - 1];
  for (std::size_t i = n - 1; i-- > 0;) rhs[i] = rhs[i] * pivot_[i] - upper_[i] * rhs[i + 1];
}

namespace {

// Modified diagonal for the Sherman-Morrison split A = B + u v^T with
// u = (gamma, 0, ..., 0, corner_last), v = (1, 0, ..., 0, corner_first / gamma).
TridiagonalSolver make_inner(const std::vector<double>& lower, std::vector<double> diag,
                             const std::vector<double>& upper, double gamma) {
  const std::size_t n = diag.size();
  diag[0] -= gamma;
  diag[n - 1] -= upper[n - 1] * lower[0] / gamma;
  std::vector<double> lo(lower), up(upper);
  lo[0] = 0.0;
  up[n - 1] = 0.0;
  return TridiagonalSolver(std::move(lo), std::move(diag), std::move(up));
}

}  // namespace

CyclicTridiagonalSolver::CyclicTridiagonalSolver(std::vector<double> lower,
                                                 std::vector<double> diag,
                                                 std::vector<double> upper)
    : inner_(make_inner(lower, diag, upper, -diag.at(0))),
      corner_first_(lower.at(0)),
      corner_last_(upper.at(upper.size() - 1)),
      gamma_(-diag.at(0)) {
  const std::size_t n = diag.size();
  if (n < 3) throw UsageError("cyclic tridiagonal solver needs at least 3 unknowns");
  z_.assign(n, 0.0);
  z_[0] = gamma_;
  z_[n - 1] = corner_last_;
  inner_.solve_in_place(z_);
  denom_ = 1.0 + z_[0] + corner_first_ * z_[n - 1] / gamma_;
  if (denom_ == 0.0) throw NumericalError("cyclic tridiagonal solver: singular update");
}

void CyclicTridiagonalSolver::solve_in_place(std::span<double> rhs) const {
  const std::size_t n = z_.size();
  inner_.solve_in_place(rhs);
  const double factor = (rhs[0] + corner_first_ * rhs[n - 1] / gamma_) / denom_;
  for (std::size_t i = 0; i < n; ++i) rhs[i] -= factor * z_[i];
}

std::size_t sturm_count(std::span<const double> diag, std::span<const double> off, double sigma) {
  const std::size_t n = diag.size();
  if (off.size() + 1 != n && !(n == 0 && off.empty()))
    throw UsageError("sturm_count: off-diagonal must have n-1 entries");
  constexpr double tiny = std::numeric_limits<double>::min() * 1e8;
  std::size_t count = 0;
  double q = 1.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double e2 = i == 0 ? 0.0 : off[i - 1] * off[i - 1];
    q = (diag[i] - sigma) - (i == 0 ? 0.0 : e2 / q);
    if (q == 0.0) q = -tiny;
    if (q < 0.0) ++count;
  }
  return count;
}

double smallest_eigenvalue_tridiagonal(std::span<const double> diag, std::span<const double> off) {
  const std::size_t n = diag.size();
  if (n == 0) throw UsageError("empty tridiagonal matrix");
  double lo = std::numeric_limits<double>::infinity();
  double hi = -lo;
  for (std::size_t i = 0; i < n; ++i) {
    const double r = (i > 0 ? std::abs(off[i - 1]) : 0.0) + (i + 1 < n ? std::abs(off[i]) : 0.0);
    lo = std::min(lo, diag[i] - r);
    hi = std::max(hi, diag[i] + r);
  }
  const double scale = std::max(std::abs(lo), std::abs(hi));
  const double eps = std::numeric_limits<double>::epsilon();
  for (int it = 0; it < 200 && hi - lo > 2.0 * eps * scale; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    if (sturm_count(diag, off, mid) >= 1)
      hi = mid;
    else
      lo = mid;
  }
  return 0.5 * (lo + hi);
}

std::vector<double> inverse_iteration_tridiagonal(std::span<const double> diag,
                                                  std::span<const double> off, double lambda) {
  const std::size_t n = diag.size();
  double scale = 0.0;
  for (std::size_t i = 0; i < n; ++i) scale = std::max(scale, std::abs(diag[i]));
  const double sigma = lambda - 1e-10 * std::max(1.0, scale);
  std::vector<double> lower(n, 0.0), d(n), upper(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    d[i] = diag[i] - sigma;
    if (i > 0) lower[i] = off[i - 1];
    if (i + 1 < n) upper[i] = off[i];
  }
  TridiagonalSolver solver(std::move(lower), std::move(d), std::move(upper));
  std::vector<double> v(n, 1.0);
  for (int it = 0; it < 4; ++it) {
    solver.solve_in_place(v);
    double norm = 0.0;
    for (double x : v) norm = std::max(norm, std::abs(x));
    if (!(norm > 0.0) || !std::isfinite(norm))
      throw NumericalError("inverse iteration broke down");
    for (double& x : v) x /= norm;
  }
  return v;
}

}  // namespace pcomp
