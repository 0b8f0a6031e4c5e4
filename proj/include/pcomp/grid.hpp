#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

namespace pcomp {

inline constexpr std::size_t kMinNodes = 16;
inline constexpr std::size_t kDefaultNodes = 256;

/// Uniform nodes x_j = j * dx, j = 0..n-1, covering one period [0, L).
/// Index arithmetic wraps modulo n, so a shift by one period is an exact
/// index roll.
class PeriodicGrid {
 public:
  PeriodicGrid(double length, std::size_t nodes);

  double length() const noexcept { return length_; }
  std::size_t size() const noexcept { return nodes_; }
  double dx() const noexcept { return length_ / static_cast<double>(nodes_); }
  double x(std::size_t j) const noexcept { return static_cast<double>(j) * dx(); }
  std::size_t wrap(std::ptrdiff_t j) const noexcept;

  bool operator==(const PeriodicGrid&) const = default;

 private:
  double length_;
  std::size_t nodes_;
};

PeriodicGrid refine(const PeriodicGrid& grid, std::size_t factor);

/// Grid-sampled scalar function on a periodic grid. Entries are always finite.
class Field {
 public:
  Field(PeriodicGrid grid, std::vector<double> values);

  static Field constant(const PeriodicGrid& grid, double value);
  static Field sample(const PeriodicGrid& grid, const std::function<double(double)>& fn);

  const PeriodicGrid& grid() const noexcept { return grid_; }
  std::size_t size() const noexcept { return values_.size(); }
  std::span<const double> values() const noexcept { return values_; }
  const std::vector<double>& vector() const noexcept { return values_; }
  double operator[](std::size_t j) const noexcept { return values_[j]; }

  double min() const;
  double max() const;
  double sup_norm() const;
  /// (rolled)[j] = (*this)[j - shift], i.e. the function x -> u(x - shift*dx).
  Field rolled(std::ptrdiff_t shift) const;

 private:
  PeriodicGrid grid_;
  std::vector<double> values_;
};

double sup_distance(std::span<const double> a, std::span<const double> b);

/// diffusivity * (u[j-1] - 2u[j] + u[j+1]) / dx^2 with wraparound.
Field second_derivative_periodic(const Field& u, double diffusivity);

/// Open ball B(center, radius) resolved by `nodes` interior points with
/// spacing h = 2R/(nodes+1); the endpoints carry the Dirichlet ghost value 0.
struct Interval {
  Interval(double center, double radius, std::size_t nodes);

  double center;
  double radius;
  std::size_t nodes;

  double h() const noexcept { return 2.0 * radius / static_cast<double>(nodes + 1); }
  double x(std::size_t j) const noexcept {
    return center - radius + static_cast<double>(j + 1) * h();
  }
};

std::vector<double> second_derivative_dirichlet(std::span<const double> u, const Interval& interval,
                                                double diffusivity);

}  // namespace pcomp
