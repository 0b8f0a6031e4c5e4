#pragma once

#include <array>
#include <cstddef>
#include <vector>

#include "pcomp/grid.hpp"

namespace pcomp {

/// Truncated real Fourier series with period L:
///   c0 + sum_q cos_q cos(2 pi q x / L) + sin_q sin(2 pi q x / L),  q = 1..H.
class FourierSeries {
 public:
  FourierSeries() = default;
  FourierSeries(double mean, std::vector<double> cos_amplitudes, std::vector<double> sin_amplitudes);
  static FourierSeries constant(double value) { return FourierSeries(value, {}, {}); }

  double mean() const noexcept { return mean_; }
  const std::vector<double>& cos_amplitudes() const noexcept { return cos_; }
  const std::vector<double>& sin_amplitudes() const noexcept { return sin_; }
  std::size_t harmonics() const noexcept { return cos_.size(); }
  bool is_constant() const noexcept;

  double operator()(double x, double period) const;
  /// The same function seen through x -> -x.
  FourierSeries mirrored() const;

  bool operator==(const FourierSeries&) const = default;

 private:
  double mean_ = 0.0;
  std::vector<double> cos_;
  std::vector<double> sin_;
};

/// Scalars of the competition system. Species 1 diffuses at rate 1, species 2
/// at rate d; k >= 0 is the interspecific competition rate (0 decouples the
/// species) and alpha its asymmetry.
struct SystemParams {
  double d = 1.0;
  double k = 1.0;
  double alpha = 1.0;
  double L = 1.0;

  void validate() const;
  bool operator==(const SystemParams&) const = default;
};

/// Reaction pair f_i(u, x) = mu_i(x) - nu_i(x) u with L-periodic coefficients.
struct ReactionSpec {
  std::array<FourierSeries, 2> mu;
  std::array<FourierSeries, 2> nu;

  const FourierSeries& growth(int species) const;
  const FourierSeries& crowding(int species) const;
  /// Pair with the species labels exchanged.
  ReactionSpec swapped() const;

  bool operator==(const ReactionSpec&) const = default;
};

double eval_f(const ReactionSpec& spec, int species, double u, double x, double period);
/// Partial derivative of u -> u f_i(u, x): mu_i(x) - 2 nu_i(x) u.
double eval_g(const ReactionSpec& spec, int species, double u, double x, double period);
/// eta(z, x) = f1(z/alpha, x) z+ - (1/d) f2(-z/d, x) z-.
double eval_eta(const ReactionSpec& spec, const SystemParams& params, double z, double x);
/// gamma(z, x) = f1(0, x) z+ - (1/d) f2(0, x) z-.
double eval_gamma(const ReactionSpec& spec, const SystemParams& params, double z, double x);

/// Coefficients sampled on the nodes of a grid; the form every solver uses.
struct SampledReaction {
  std::array<std::vector<double>, 2> mu;
  std::array<std::vector<double>, 2> nu;
};

SampledReaction sample(const ReactionSpec& spec, const PeriodicGrid& grid, double period);

struct HypothesisReport {
  double m1 = 0.0, m2 = 0.0;  // min over the audit grid of f_i(0, .)
  double M1 = 0.0, M2 = 0.0;  // max over the audit grid of f_i(0, .)
  double a1 = 0.0, a2 = 0.0;  // max mu_i / min nu_i: f_i(u, .) < 0 for u > a_i
  double nu_max = 0.0;        // max over both species of nu_i
  bool h2_ok = false;
  bool h3_ok = false;
  bool hfreq_ok = false;
  /// pi (1/sqrt(M1) + sqrt(d/M2)) - L
  double hfreq_margin = 0.0;
  std::size_t audit_nodes = 0;
};

inline constexpr std::size_t kAuditFactor = 8;

/// Audits the coefficients on a grid `audit_nodes` fine and evaluates the
/// high-frequency condition. Throws ModelError naming H2 (mu not positive) or
/// H3 (nu not positive).
HypothesisReport check_hypotheses(const ReactionSpec& spec, const SystemParams& params,
                                  std::size_t audit_nodes = kAuditFactor * kDefaultNodes);

}  // namespace pcomp
