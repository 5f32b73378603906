#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace fppvar {

enum class Family
{
  exponential,
  gamma,
  beta,
  uniform,
  chi2,
  halfnormal,
};

/// Thrown for laws with zero variance (point masses). They fall outside the
/// absolutely continuous class the library works with.
class DegenerateDistribution : public std::invalid_argument
{
public:
  using std::invalid_argument::invalid_argument;
};

/// A continuous edge-time law on [0, inf) with density h, distribution
/// function H and quantile H^{-1}. The density is positive exactly on the
/// open support (lower(), upper()).
///
/// Spec grammar accepted by parse():
///   exp:rate=1  gamma:shape=2[,rate=1]  beta:a=2,b=3  uniform:lo=0,hi=1
///   chi2:k=2,alpha=0.5  halfnormal[:scale=1]
///
/// chi2:k,alpha is the law with density proportional to e^{-alpha t} t^{k/2-1},
/// i.e. Gamma(shape k/2, rate alpha).
class EdgeDistribution
{
public:
  static EdgeDistribution exponential(double rate = 1.0);
  static EdgeDistribution gamma(double shape, double rate = 1.0);
  static EdgeDistribution beta(double a, double b);
  static EdgeDistribution uniform(double lo, double hi);
  static EdgeDistribution chi2(int k, double alpha);
  static EdgeDistribution halfnormal(double scale = 1.0);

  static EdgeDistribution parse(std::string_view spec);

  Family family() const { return family_; }
  const std::string& spec() const { return spec_; }

  double lower() const { return lower_; }
  double upper() const { return upper_; }
  bool bounded() const;
  bool in_open_support(double y) const { return y > lower_ && y < upper_; }

  double density(double y) const;
  double log_density(double y) const;
  double cdf(double y) const;
  /// 1 - H(y), computed directly in the upper tail.
  double sf(double y) const;
  double log_cdf(double y) const;
  double log_sf(double y) const;
  double quantile(double p) const;

  double mean() const;
  double variance() const;
  double second_moment() const { return variance() + mean() * mean(); }

  /// alpha with h(x) ~ (x - lower)^alpha near the lower endpoint, when known.
  std::optional<double> left_exponent() const { return left_exponent_; }
  /// beta with h(x) ~ (upper - x)^beta near a finite upper endpoint, when known.
  std::optional<double> right_exponent() const { return right_exponent_; }

  /// Copy with the analytic endpoint exponents removed.
  EdgeDistribution without_exponents() const;

private:
  EdgeDistribution() = default;

  Family family_ = Family::exponential;
  std::string spec_;
  double p1_ = 1.0; // rate / shape / a / lo / scale
  double p2_ = 1.0; // rate / b / hi
  double lower_ = 0.0;
  double upper_ = 0.0;
  std::optional<double> left_exponent_;
  std::optional<double> right_exponent_;
};

/// n draws by inverse-cdf sampling; identical for identical (seed, n).
std::vector<double> sample(const EdgeDistribution& dist, std::uint64_t seed, std::size_t n);

/// Kolmogorov-Smirnov distance between the empirical law of `values` and H.
double ks_statistic(const EdgeDistribution& dist, std::vector<double> values);

/// psi(y) = g(G^{-1}(H(y))) / h(y), evaluated in log space. Uses the upper
/// tail 1 - H(y) whenever H(y) > 1/2 so both ends keep relative precision.
double psi(const EdgeDistribution& dist, double y);

enum class NearGammaVerdict
{
  sufficient_conditions_pass,
  direct_evidence_only,
  fail,
  not_checkable,
};

std::string to_string(NearGammaVerdict verdict);

/// Numerical evidence about the nearly-gamma conditions for one law.
///
/// The direct fields estimate A in psi(y) <= A sqrt(y) and the exponent eps
/// in nu(psi <= a) = O(a^eps) on a quantile grid; they are evidence, not a
/// proof. The sufficient fields test the endpoint-exponent and tail-ratio
/// conditions with a fixed ratio band [1/5, 5].
struct NearGammaReport
{
  std::string distribution;

  bool direct_checked = false;
  std::size_t grid_size = 0;
  double direct_A_hat = 0.0;
  double direct_A_hat_refined = 0.0; ///< same estimate on the doubled grid
  double direct_epsilon_hat = 0.0;   ///< +inf when nu(psi <= a) vanishes on the grid
  bool direct_pass_a = false;
  bool direct_pass_b = false;
  bool direct_pass = false;

  bool sufficient_checked = false;
  bool sufficient_alpha_ok = false;
  bool sufficient_beta_or_tail_ok = false;
  double left_band_lo = 0.0, left_band_hi = 0.0;   ///< normalized h/(x-lower)^alpha range
  double right_band_lo = 0.0, right_band_hi = 0.0; ///< normalized tail-ratio range

  NearGammaVerdict verdict = NearGammaVerdict::fail;
};

NearGammaReport check_near_gamma_sufficient(const EdgeDistribution& dist);
NearGammaReport check_near_gamma_direct(const EdgeDistribution& dist, std::size_t quantile_grid_size);

/// Both checks merged into one verdict.
NearGammaReport classify_near_gamma(const EdgeDistribution& dist,
                                    std::size_t quantile_grid_size = 1000);

} // namespace fppvar
