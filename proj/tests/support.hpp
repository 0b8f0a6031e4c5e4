#pragma once

#include <cmath>
#include <numbers>

#include "pcomp/model.hpp"

namespace testing {

inline pcomp::ReactionSpec constant_spec(double mu1, double mu2, double nu1 = 1.0, double nu2 = 1.0) {
  using pcomp::FourierSeries;
  pcomp::ReactionSpec s;
  s.mu = {FourierSeries::constant(mu1), FourierSeries::constant(mu2)};
  s.nu = {FourierSeries::constant(nu1), FourierSeries::constant(nu2)};
  return s;
}

// mu1 = 1 + 0.3 sin(2 pi x / L), everything else 1.
inline pcomp::ReactionSpec default_spec() {
  pcomp::ReactionSpec s = constant_spec(1.0, 1.0);
  s.mu[0] = pcomp::FourierSeries(1.0, {0.0}, {0.3});
  return s;
}

inline pcomp::SystemParams params(double d, double k, double alpha = 1.0, double L = 1.0) {
  return pcomp::SystemParams{d, k, alpha, L};
}

inline constexpr double pi = std::numbers::pi;

}  // namespace testing
