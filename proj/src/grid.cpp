#include "pcomp/grid.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "pcomp/errors.hpp"

namespace pcomp {

PeriodicGrid::PeriodicGrid(double length, std::size_t nodes) : length_(length), nodes_(nodes) {
  if (!(length > 0.0) || !std::isfinite(length))
    throw ConfigError("periodic grid length must be positive and finite");
  if (nodes < kMinNodes)
    throw ConfigError("periodic grid needs at least " + std::to_string(kMinNodes) + " nodes, got " +
                      std::to_string(nodes));
}

std::size_t PeriodicGrid::wrap(std::ptrdiff_t j) const noexcept {
  const auto n = static_cast<std::ptrdiff_t>(nodes_);
  const std::ptrdiff_t r = j % n;
  return static_cast<std::size_t>(r < 0 ? r + n : r);
}

PeriodicGrid refine(const PeriodicGrid& grid, std::size_t factor) {
  if (factor < 2) throw ConfigError("refinement factor must be at least 2");
  if (grid.size() > static_cast<std::size_t>(-1) / factor)
    throw ConfigError("refined node count overflows");
  return PeriodicGrid(grid.length(), grid.size() * factor);
}

Field::Field(PeriodicGrid grid, std::vector<double> values)
    : grid_(grid), values_(std::move(values)) {
  if (values_.size() != grid_.size())
    throw UsageError("field has " + std::to_string(values_.size()) + " values for a grid of " +
                     std::to_string(grid_.size()) + " nodes");
  for (std::size_t j = 0; j < values_.size(); ++j)
    if (!std::isfinite(values_[j]))
      throw NumericalError("non-finite field value at node " + std::to_string(j));
}

Field Field::constant(const PeriodicGrid& grid, double value) {
  return Field(grid, std::vector<double>(grid.size(), value));
}

Field Field::sample(const PeriodicGrid& grid, const std::function<double(double)>& fn) {
  std::vector<double> v(grid.size());
  for (std::size_t j = 0; j < v.size(); ++j) v[j] = fn(grid.x(j));
  return Field(grid, std::move(v));
}

double Field::min() const { return *std::min_element(values_.begin(), values_.end()); }
double Field::max() const { return *std::max_element(values_.begin(), values_.end()); }

double Field::sup_norm() const {
  double s = 0.0;
  for (double v : values_) s = std::max(s, std::abs(v));
  return s;
}

Field Field::rolled(std::ptrdiff_t shift) const {
  std::vector<double> out(values_.size());
  for (std::size_t j = 0; j < out.size(); ++j)
    out[j] = values_[grid_.wrap(static_cast<std::ptrdiff_t>(j) - shift)];
  return Field(grid_, std::move(out));
}

double sup_distance(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) throw UsageError("sup_distance: size mismatch");
  double s = 0.0;
  for (std::size_t j = 0; j < a.size(); ++j) s = std::max(s, std::abs(a[j] - b[j]));
  return s;
}

Field second_derivative_periodic(const Field& u, double diffusivity) {
  if (!(diffusivity > 0.0)) throw UsageError("diffusivity must be positive");
  const auto& g = u.grid();
  const std::size_t n = g.size();
  const double scale = diffusivity / (g.dx() * g.dx());
  std::vector<double> out(n);
  for (std::size_t j = 0; j < n; ++j) {
    const double left = u[j == 0 ? n - 1 : j - 1];
    const double right = u[j + 1 == n ? 0 : j + 1];
    out[j] = scale * ((left - u[j]) + (right - u[j]));
  }
  return Field(g, std::move(out));
}

Interval::Interval(double c, double r, std::size_t m) : center(c), radius(r), nodes(m) {
  if (!(r > 0.0) || !std::isfinite(r)) throw ConfigError("interval radius must be positive");
  if (m < kMinNodes)
    throw ConfigError("interval needs at least " + std::to_string(kMinNodes) + " nodes");
}

std::vector<double> second_derivative_dirichlet(std::span<const double> u, const Interval& interval,
                                                double diffusivity) {
  if (!(diffusivity > 0.0)) throw UsageError("diffusivity must be positive");
  if (u.size() != interval.nodes) throw UsageError("value count does not match interval nodes");
  const std::size_t m = u.size();
  const double scale = diffusivity / (interval.h() * interval.h());
  std::vector<double> out(m);
  for (std::size_t j = 0; j < m; ++j) {
    const double left = j == 0 ? 0.0 : u[j - 1];
    const double right = j + 1 == m ? 0.0 : u[j + 1];
    out[j] = scale * ((left - u[j]) + (right - u[j]));
  }
  return out;
}

}  // namespace pcomp
