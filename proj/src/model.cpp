#include "pcomp/model.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "pcomp/errors.hpp"

namespace pcomp {

FourierSeries::FourierSeries(double mean, std::vector<double> cos_amplitudes,
                             std::vector<double> sin_amplitudes)
    : mean_(mean), cos_(std::move(cos_amplitudes)), sin_(std::move(sin_amplitudes)) {
  const std::size_t h = std::max(cos_.size(), sin_.size());
  cos_.resize(h, 0.0);
  sin_.resize(h, 0.0);
  if (!std::isfinite(mean_)) throw UsageError("Fourier coefficient is not finite");
  for (std::size_t q = 0; q < h; ++q)
    if (!std::isfinite(cos_[q]) || !std::isfinite(sin_[q]))
      throw UsageError("Fourier coefficient is not finite");
}

bool FourierSeries::is_constant() const noexcept {
  return std::all_of(cos_.begin(), cos_.end(), [](double c) { return c == 0.0; }) &&
         std::all_of(sin_.begin(), sin_.end(), [](double s) { return s == 0.0; });
}

double FourierSeries::operator()(double x, double period) const {
  double value = mean_;
  const double w = 2.0 * std::numbers::pi * x / period;
  for (std::size_t q = 0; q < cos_.size(); ++q) {
    const double arg = static_cast<double>(q + 1) * w;
    if (cos_[q] != 0.0) value += cos_[q] * std::cos(arg);
    if (sin_[q] != 0.0) value += sin_[q] * std::sin(arg);
  }
  return value;
}

FourierSeries FourierSeries::mirrored() const {
  std::vector<double> s(sin_.size());
  std::transform(sin_.begin(), sin_.end(), s.begin(), [](double v) { return -v; });
  return FourierSeries(mean_, cos_, std::move(s));
}

void SystemParams::validate() const {
  auto check = [](double v, const char* name) {
    if (!(v > 0.0) || !std::isfinite(v))
      throw UsageError(std::string("system parameter ") + name + " must be positive and finite");
  };
  check(d, "d");
  if (!(k >= 0.0) || !std::isfinite(k))
    throw UsageError("system parameter k must be non-negative and finite");
  check(alpha, "alpha");
  check(L, "L");
}

namespace {

void check_species(int species) {
  if (species != 1 && species != 2)
    throw UsageError("species index must be 1 or 2, got " + std::to_string(species));
}

}  // namespace

const FourierSeries& ReactionSpec::growth(int species) const {
  check_species(species);
  return mu[static_cast<std::size_t>(species - 1)];
}

const FourierSeries& ReactionSpec::crowding(int species) const {
  check_species(species);
  return nu[static_cast<std::size_t>(species - 1)];
}

ReactionSpec ReactionSpec::swapped() const {
  return ReactionSpec{{mu[1], mu[0]}, {nu[1], nu[0]}};
}

double eval_f(const ReactionSpec& spec, int species, double u, double x, double period) {
  return spec.growth(species)(x, period) - spec.crowding(species)(x, period) * u;
}

double eval_g(const ReactionSpec& spec, int species, double u, double x, double period) {
  return spec.growth(species)(x, period) - 2.0 * spec.crowding(species)(x, period) * u;
}

double eval_eta(const ReactionSpec& spec, const SystemParams& params, double z, double x) {
  const double zp = std::max(z, 0.0);
  const double zm = -std::min(z, 0.0);
  double value = 0.0;
  if (zp > 0.0) value += eval_f(spec, 1, zp / params.alpha, x, params.L) * zp;
  if (zm > 0.0) value -= eval_f(spec, 2, zm / params.d, x, params.L) * zm / params.d;
  return value;
}

double eval_gamma(const ReactionSpec& spec, const SystemParams& params, double z, double x) {
  const double zp = std::max(z, 0.0);
  const double zm = -std::min(z, 0.0);
  return spec.growth(1)(x, params.L) * zp - spec.growth(2)(x, params.L) * zm / params.d;
}

SampledReaction sample(const ReactionSpec& spec, const PeriodicGrid& grid, double period) {
  SampledReaction out;
  for (std::size_t i = 0; i < 2; ++i) {
    out.mu[i].resize(grid.size());
    out.nu[i].resize(grid.size());
    for (std::size_t j = 0; j < grid.size(); ++j) {
      out.mu[i][j] = spec.mu[i](grid.x(j), period);
      out.nu[i][j] = spec.nu[i](grid.x(j), period);
    }
  }
  return out;
}

HypothesisReport check_hypotheses(const ReactionSpec& spec, const SystemParams& params,
                                  std::size_t audit_nodes) {
  params.validate();
  const PeriodicGrid audit(params.L, audit_nodes);
  const SampledReaction s = sample(spec, audit, params.L);

  HypothesisReport r;
  r.audit_nodes = audit_nodes;
  std::array<double, 2> m{}, M{}, nu_min{}, nu_max{};
  for (std::size_t i = 0; i < 2; ++i) {
    const auto [mu_lo, mu_hi] = std::minmax_element(s.mu[i].begin(), s.mu[i].end());
    const auto [nu_lo, nu_hi] = std::minmax_element(s.nu[i].begin(), s.nu[i].end());
    m[i] = *mu_lo;
    M[i] = *mu_hi;
    nu_min[i] = *nu_lo;
    nu_max[i] = *nu_hi;
    const std::string label = "species " + std::to_string(i + 1);
    if (!(m[i] > 0.0))
      throw ModelError("H2", label + " growth rate f(0, x) = mu(x) has minimum " +
                                 std::to_string(m[i]) + " <= 0 on the audit grid");
    if (!(nu_min[i] > 0.0))
      throw ModelError("H3", label + " crowding coefficient nu(x) has minimum " +
                                 std::to_string(nu_min[i]) + " <= 0, f is not decreasing in u");
  }
  r.m1 = m[0];
  r.m2 = m[1];
  r.M1 = M[0];
  r.M2 = M[1];
  r.a1 = M[0] / nu_min[0];
  r.a2 = M[1] / nu_min[1];
  r.nu_max = std::max(nu_max[0], nu_max[1]);
  r.h2_ok = true;
  r.h3_ok = true;
  r.hfreq_margin =
      std::numbers::pi * (1.0 / std::sqrt(r.M1) + std::sqrt(params.d / r.M2)) - params.L;
  r.hfreq_ok = r.hfreq_margin > 0.0;
  return r;
}

}  // namespace pcomp
