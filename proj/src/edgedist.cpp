#include "fppvar/edgedist.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <limits>
#include <map>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include <boost/math/special_functions/beta.hpp>
#include <boost/math/special_functions/erf.hpp>
#include <boost/math/special_functions/gamma.hpp>

#include "fppvar/gausskit.hpp"
#include "fppvar/seeding.hpp"

namespace fppvar {

namespace bm = boost::math;

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::string format_number(double x)
{
  std::ostringstream os;
  os.precision(17);
  os << x;
  return os.str();
}

double parse_number(std::string_view text, std::string_view key)
{
  double value = 0.0;
  const auto* end = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(text.data(), end, value);
  if (ec != std::errc() || ptr != end || !std::isfinite(value))
    throw std::invalid_argument("distribution spec: bad value for '" + std::string(key) + "'");
  return value;
}

std::map<std::string, double, std::less<>> parse_params(std::string_view body)
{
  std::map<std::string, double, std::less<>> out;
  while (!body.empty()) {
    const auto comma = body.find(',');
    const auto item = body.substr(0, comma);
    const auto eq = item.find('=');
    if (eq == std::string_view::npos || eq == 0)
      throw std::invalid_argument("distribution spec: expected key=value, got '" +
                                  std::string(item) + "'");
    const auto key = item.substr(0, eq);
    out[std::string(key)] = parse_number(item.substr(eq + 1), key);
    if (comma == std::string_view::npos)
      break;
    body.remove_prefix(comma + 1);
  }
  return out;
}

double take(std::map<std::string, double, std::less<>>& params, std::string_view key,
            std::optional<double> fallback = std::nullopt)
{
  auto it = params.find(key);
  if (it == params.end()) {
    if (fallback)
      return *fallback;
    throw std::invalid_argument("distribution spec: missing parameter '" + std::string(key) + "'");
  }
  const double v = it->second;
  params.erase(it);
  return v;
}

// Upper regularized incomplete gamma in log space; switches to the
// asymptotic series once Q underflows.
double log_gamma_q(double shape, double x)
{
  const double q = bm::gamma_q(shape, x);
  if (q > 1e-290)
    return std::log(q);
  double term = 1.0, series = 1.0;
  for (int k = 1; k < 30; ++k) {
    term *= (shape - k) / x;
    series += term;
    if (std::abs(term) < 1e-17)
      break;
  }
  return (shape - 1.0) * std::log(x) - x - std::lgamma(shape) + std::log(series);
}

double logistic(double u) { return 1.0 / (1.0 + std::exp(-u)); }

} // namespace

EdgeDistribution EdgeDistribution::exponential(double rate)
{
  if (!(rate > 0.0) || !std::isfinite(rate))
    throw std::invalid_argument("exp: rate must be positive");
  EdgeDistribution d;
  d.family_ = Family::exponential;
  d.p1_ = rate;
  d.lower_ = 0.0;
  d.upper_ = kInf;
  d.left_exponent_ = 0.0;
  d.spec_ = "exp:rate=" + format_number(rate);
  return d;
}

EdgeDistribution EdgeDistribution::gamma(double shape, double rate)
{
  if (!(shape > 0.0) || !(rate > 0.0) || !std::isfinite(shape) || !std::isfinite(rate))
    throw std::invalid_argument("gamma: shape and rate must be positive");
  EdgeDistribution d;
  d.family_ = Family::gamma;
  d.p1_ = shape;
  d.p2_ = rate;
  d.lower_ = 0.0;
  d.upper_ = kInf;
  d.left_exponent_ = shape - 1.0;
  d.spec_ = "gamma:shape=" + format_number(shape) + ",rate=" + format_number(rate);
  return d;
}

EdgeDistribution EdgeDistribution::beta(double a, double b)
{
  if (!(a > 0.0) || !(b > 0.0) || !std::isfinite(a) || !std::isfinite(b))
    throw std::invalid_argument("beta: a and b must be positive");
  EdgeDistribution d;
  d.family_ = Family::beta;
  d.p1_ = a;
  d.p2_ = b;
  d.lower_ = 0.0;
  d.upper_ = 1.0;
  d.left_exponent_ = a - 1.0;
  d.right_exponent_ = b - 1.0;
  d.spec_ = "beta:a=" + format_number(a) + ",b=" + format_number(b);
  return d;
}

EdgeDistribution EdgeDistribution::uniform(double lo, double hi)
{
  if (!std::isfinite(lo) || !std::isfinite(hi) || lo < 0.0)
    throw std::invalid_argument("uniform: bounds must be finite with lo >= 0");
  if (hi == lo)
    throw DegenerateDistribution("uniform: lo == hi is a point mass");
  if (hi < lo)
    throw std::invalid_argument("uniform: requires lo < hi");
  EdgeDistribution d;
  d.family_ = Family::uniform;
  d.p1_ = lo;
  d.p2_ = hi;
  d.lower_ = lo;
  d.upper_ = hi;
  d.left_exponent_ = 0.0;
  d.right_exponent_ = 0.0;
  d.spec_ = "uniform:lo=" + format_number(lo) + ",hi=" + format_number(hi);
  return d;
}

EdgeDistribution EdgeDistribution::chi2(int k, double alpha)
{
  if (k < 1)
    throw std::invalid_argument("chi2: k must be a positive integer");
  if (!(alpha > 0.0) || !std::isfinite(alpha))
    throw std::invalid_argument("chi2: alpha must be positive");
  EdgeDistribution d = gamma(0.5 * k, alpha);
  d.family_ = Family::chi2;
  d.spec_ = "chi2:k=" + std::to_string(k) + ",alpha=" + format_number(alpha);
  return d;
}

EdgeDistribution EdgeDistribution::halfnormal(double scale)
{
  if (!(scale > 0.0) || !std::isfinite(scale))
    throw std::invalid_argument("halfnormal: scale must be positive");
  EdgeDistribution d;
  d.family_ = Family::halfnormal;
  d.p1_ = scale;
  d.lower_ = 0.0;
  d.upper_ = kInf;
  d.left_exponent_ = 0.0;
  d.spec_ = scale == 1.0 ? "halfnormal" : "halfnormal:scale=" + format_number(scale);
  return d;
}

EdgeDistribution EdgeDistribution::parse(std::string_view spec)
{
  const auto colon = spec.find(':');
  const auto name = spec.substr(0, colon);
  auto params = parse_params(colon == std::string_view::npos ? std::string_view{}
                                                              : spec.substr(colon + 1));
  auto finish = [&](EdgeDistribution d) {
    if (!params.empty())
      throw std::invalid_argument("distribution spec: unknown parameter '" +
                                  params.begin()->first + "' for '" + std::string(name) + "'");
    return d;
  };

  if (name == "exp")
    return finish(exponential(take(params, "rate", 1.0)));
  if (name == "gamma") {
    const double shape = take(params, "shape");
    return finish(gamma(shape, take(params, "rate", 1.0)));
  }
  if (name == "beta") {
    const double a = take(params, "a");
    return finish(beta(a, take(params, "b")));
  }
  if (name == "uniform") {
    const double lo = take(params, "lo", 0.0);
    return finish(uniform(lo, take(params, "hi", 1.0)));
  }
  if (name == "chi2") {
    const double k = take(params, "k");
    if (k != std::floor(k))
      throw std::invalid_argument("chi2: k must be an integer");
    return finish(chi2(static_cast<int>(k), take(params, "alpha", 0.5)));
  }
  if (name == "halfnormal")
    return finish(halfnormal(take(params, "scale", 1.0)));
  if (name == "point" || name == "const")
    throw DegenerateDistribution("distribution spec: '" + std::string(name) +
                                 "' is a point mass with zero variance");
  throw std::invalid_argument("distribution spec: unknown family '" + std::string(name) + "'");
}

bool EdgeDistribution::bounded() const { return std::isfinite(upper_); }

double EdgeDistribution::log_density(double y) const
{
  if (!in_open_support(y))
    return -kInf;
  switch (family_) {
  case Family::exponential:
    return std::log(p1_) - p1_ * y;
  case Family::gamma:
  case Family::chi2:
    return p1_ * std::log(p2_) + (p1_ - 1.0) * std::log(y) - p2_ * y - std::lgamma(p1_);
  case Family::beta:
    return (p1_ - 1.0) * std::log(y) + (p2_ - 1.0) * std::log1p(-y) -
           (std::lgamma(p1_) + std::lgamma(p2_) - std::lgamma(p1_ + p2_));
  case Family::uniform:
    return -std::log(p2_ - p1_);
  case Family::halfnormal:
    return std::numbers::ln2 + gauss::log_pdf(y / p1_) - std::log(p1_);
  }
  return -kInf;
}

double EdgeDistribution::density(double y) const
{
  if (!in_open_support(y))
    return 0.0;
  return std::exp(log_density(y));
}

double EdgeDistribution::cdf(double y) const
{
  if (std::isnan(y))
    throw std::domain_error("cdf: NaN argument");
  if (y <= lower_)
    return 0.0;
  if (y >= upper_)
    return 1.0;
  switch (family_) {
  case Family::exponential:
    return -std::expm1(-p1_ * y);
  case Family::gamma:
  case Family::chi2:
    return bm::gamma_p(p1_, p2_ * y);
  case Family::beta:
    return bm::ibeta(p1_, p2_, y);
  case Family::uniform:
    return (y - p1_) / (p2_ - p1_);
  case Family::halfnormal:
    return std::erf(y / (p1_ * std::numbers::sqrt2));
  }
  return 0.0;
}

double EdgeDistribution::sf(double y) const
{
  if (std::isnan(y))
    throw std::domain_error("sf: NaN argument");
  if (y <= lower_)
    return 1.0;
  if (y >= upper_)
    return 0.0;
  switch (family_) {
  case Family::exponential:
    return std::exp(-p1_ * y);
  case Family::gamma:
  case Family::chi2:
    return bm::gamma_q(p1_, p2_ * y);
  case Family::beta:
    return bm::ibetac(p1_, p2_, y);
  case Family::uniform:
    return (p2_ - y) / (p2_ - p1_);
  case Family::halfnormal:
    return 2.0 * gauss::ccdf(y / p1_);
  }
  return 0.0;
}

double EdgeDistribution::log_cdf(double y) const
{
  if (y <= lower_)
    return -kInf;
  if (y >= upper_)
    return 0.0;
  if (family_ == Family::exponential)
    return std::log(-std::expm1(-p1_ * y));
  return std::log(cdf(y));
}

double EdgeDistribution::log_sf(double y) const
{
  if (y <= lower_)
    return 0.0;
  if (y >= upper_)
    return -kInf;
  switch (family_) {
  case Family::exponential:
    return -p1_ * y;
  case Family::gamma:
  case Family::chi2:
    return log_gamma_q(p1_, p2_ * y);
  case Family::halfnormal:
    return std::numbers::ln2 + gauss::log_cdf(-y / p1_);
  default:
    return std::log(sf(y));
  }
}

double EdgeDistribution::quantile(double p) const
{
  if (!(p > 0.0 && p < 1.0))
    throw std::domain_error("quantile: probability must lie in (0,1)");
  switch (family_) {
  case Family::exponential:
    return -std::log1p(-p) / p1_;
  case Family::gamma:
  case Family::chi2:
    return (p <= 0.5 ? bm::gamma_p_inv(p1_, p) : bm::gamma_q_inv(p1_, 1.0 - p)) / p2_;
  case Family::beta:
    return p <= 0.5 ? bm::ibeta_inv(p1_, p2_, p) : bm::ibetac_inv(p1_, p2_, 1.0 - p);
  case Family::uniform:
    return p1_ + p * (p2_ - p1_);
  case Family::halfnormal:
    return p <= 0.5 ? p1_ * std::numbers::sqrt2 * bm::erf_inv(p)
                    : -p1_ * gauss::quantile(0.5 * (1.0 - p));
  }
  return 0.0;
}

double EdgeDistribution::mean() const
{
  switch (family_) {
  case Family::exponential:
    return 1.0 / p1_;
  case Family::gamma:
  case Family::chi2:
    return p1_ / p2_;
  case Family::beta:
    return p1_ / (p1_ + p2_);
  case Family::uniform:
    return 0.5 * (p1_ + p2_);
  case Family::halfnormal:
    return p1_ * std::sqrt(2.0 / std::numbers::pi);
  }
  return 0.0;
}

double EdgeDistribution::variance() const
{
  switch (family_) {
  case Family::exponential:
    return 1.0 / (p1_ * p1_);
  case Family::gamma:
  case Family::chi2:
    return p1_ / (p2_ * p2_);
  case Family::beta: {
    const double s = p1_ + p2_;
    return p1_ * p2_ / (s * s * (s + 1.0));
  }
  case Family::uniform:
    return (p2_ - p1_) * (p2_ - p1_) / 12.0;
  case Family::halfnormal:
    return p1_ * p1_ * (1.0 - 2.0 / std::numbers::pi);
  }
  return 0.0;
}

EdgeDistribution EdgeDistribution::without_exponents() const
{
  EdgeDistribution copy = *this;
  copy.left_exponent_.reset();
  copy.right_exponent_.reset();
  return copy;
}

std::vector<double> sample(const EdgeDistribution& dist, std::uint64_t seed, std::size_t n)
{
  RandomStream stream(seed);
  std::vector<double> out(n);
  for (auto& v : out)
    v = dist.quantile(stream.uniform());
  return out;
}

double ks_statistic(const EdgeDistribution& dist, std::vector<double> values)
{
  if (values.empty())
    throw std::invalid_argument("ks_statistic: empty sample");
  std::sort(values.begin(), values.end());
  const double n = static_cast<double>(values.size());
  double d = 0.0;
  for (std::size_t i = 0; i < values.size(); ++i) {
    const double H = dist.cdf(values[i]);
    d = std::max({d, (i + 1) / n - H, H - i / n});
  }
  return d;
}

double psi(const EdgeDistribution& dist, double y)
{
  if (!std::isfinite(y) || !dist.in_open_support(y))
    throw std::domain_error("psi: argument outside the open support");
  const double H = dist.cdf(y);
  const double log_q = H <= 0.5 ? (H > 0.0 ? std::log(H) : dist.log_cdf(y)) : dist.log_sf(y);
  return std::exp(gauss::log_g_of_Ginv_tail(log_q) - dist.log_density(y));
}

std::string to_string(NearGammaVerdict verdict)
{
  switch (verdict) {
  case NearGammaVerdict::sufficient_conditions_pass:
    return "sufficient-conditions-pass";
  case NearGammaVerdict::direct_evidence_only:
    return "direct-evidence-only";
  case NearGammaVerdict::fail:
    return "fail";
  case NearGammaVerdict::not_checkable:
    return "not-checkable-by-sufficient-conditions";
  }
  return "fail";
}

namespace {

constexpr double kBandLo = 0.2;
constexpr double kBandHi = 5.0;

struct Band
{
  double lo = kInf, hi = -kInf;
  bool ok = true;
};

// Ratios normalized by `ref` must stay inside [1/5, 5].
Band normalized_band(const std::vector<double>& ratios, double ref)
{
  Band band;
  if (!(ref > 0.0) || !std::isfinite(ref)) {
    band.ok = false;
    return band;
  }
  for (double r : ratios) {
    const double v = r / ref;
    if (!(v > 0.0) || !std::isfinite(v)) {
      band.ok = false;
      continue;
    }
    band.lo = std::min(band.lo, v);
    band.hi = std::max(band.hi, v);
  }
  band.ok = band.ok && band.lo >= kBandLo && band.hi <= kBandHi;
  return band;
}

// Endpoint exponent check: h(x) / dist(x, endpoint)^exponent on a geometric
// grid approaching the endpoint, normalized by the value closest to it.
Band endpoint_band(const EdgeDistribution& dist, double exponent, bool left)
{
  constexpr int levels = 41;
  const double width = left ? dist.quantile(0.25) - dist.lower() : dist.upper() - dist.quantile(0.75);
  std::vector<double> ratios;
  ratios.reserve(levels);
  for (int j = 0; j < levels; ++j) {
    const double delta = std::ldexp(width, -j);
    const double x = left ? dist.lower() + delta : dist.upper() - delta;
    ratios.push_back(std::exp(dist.log_density(x) - exponent * std::log(delta)));
  }
  return normalized_band(ratios, ratios.back());
}

// (1 - H(t)) / h(t) on t in [median, 40 * mean], normalized at the median.
Band tail_band(const EdgeDistribution& dist)
{
  constexpr int points = 200;
  const double a = dist.quantile(0.5);
  const double b = 40.0 * dist.mean();
  std::vector<double> ratios;
  ratios.reserve(points);
  for (int j = 0; j < points; ++j) {
    const double t = a * std::pow(b / a, static_cast<double>(j) / (points - 1));
    ratios.push_back(std::exp(dist.log_sf(t) - dist.log_density(t)));
  }
  return normalized_band(ratios, ratios.front());
}

struct DirectEstimate
{
  double A_hat = 0.0;
  double epsilon_hat = 0.0;
};

// Quantile grid uniform in logit(p) over p in [1e-12, 1 - 1e-12], so cells
// near both endpoints resolve small probabilities.
DirectEstimate direct_estimate(const EdgeDistribution& dist, std::size_t n)
{
  const double U = std::log(1e12);
  const double du = 2.0 * U / static_cast<double>(n);
  std::vector<double> psi_values(n), masses(n);
  double A_hat = 0.0;
  for (std::size_t j = 0; j < n; ++j) {
    const double u = -U + (static_cast<double>(j) + 0.5) * du;
    double y;
    double mass;
    if (u <= 0.0) {
      y = dist.quantile(logistic(u));
      mass = logistic(u + 0.5 * du) - logistic(u - 0.5 * du);
    } else {
      // H^{-1}(1 - q) with q = logistic(-u) kept exact.
      const double q = logistic(-u);
      y = dist.quantile(1.0 - q);
      if (dist.family() != Family::uniform && q < 1e-6) {
        // Refine in the upper tail where 1 - q loses digits.
        const double target = std::log(q);
        for (int it = 0; it < 8; ++it) {
          const double residual = dist.log_sf(y) - target;
          const double slope = -std::exp(dist.log_density(y) - dist.log_sf(y));
          if (!std::isfinite(slope) || slope == 0.0)
            break;
          const double next = y - residual / slope;
          if (!dist.in_open_support(next))
            break;
          y = next;
        }
      }
      mass = logistic(-u + 0.5 * du) - logistic(-u - 0.5 * du);
    }
    if (!dist.in_open_support(y)) {
      psi_values[j] = std::numeric_limits<double>::quiet_NaN();
      masses[j] = 0.0;
      continue;
    }
    psi_values[j] = psi(dist, y);
    masses[j] = mass;
    if (y > 0.0)
      A_hat = std::max(A_hat, psi_values[j] / std::sqrt(y));
  }

  // Least-squares slope of log nu(psi <= a) against log a on a in [1e-4, 1e-1].
  constexpr int levels = 25;
  std::vector<double> xs, ys;
  for (int k = 0; k < levels; ++k) {
    const double a = std::pow(10.0, -4.0 + 3.0 * k / (levels - 1));
    double m = 0.0;
    for (std::size_t j = 0; j < n; ++j)
      if (psi_values[j] <= a)
        m += masses[j];
    if (m > 0.0) {
      xs.push_back(std::log(a));
      ys.push_back(std::log(m));
    }
  }
  DirectEstimate est;
  est.A_hat = A_hat;
  if (xs.size() < 3) {
    est.epsilon_hat = kInf;
    return est;
  }
  const double k = static_cast<double>(xs.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    mx += xs[i];
    my += ys[i];
  }
  mx /= k;
  my /= k;
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sxx += (xs[i] - mx) * (xs[i] - mx);
    sxy += (xs[i] - mx) * (ys[i] - my);
  }
  est.epsilon_hat = sxy / sxx;
  return est;
}

} // namespace

NearGammaReport check_near_gamma_sufficient(const EdgeDistribution& dist)
{
  NearGammaReport report;
  report.distribution = dist.spec();
  const auto alpha = dist.left_exponent();
  const auto beta = dist.right_exponent();
  if (!alpha || (dist.bounded() && !beta)) {
    report.verdict = NearGammaVerdict::not_checkable;
    return report;
  }
  report.sufficient_checked = true;

  const Band left = endpoint_band(dist, *alpha, true);
  report.left_band_lo = left.lo;
  report.left_band_hi = left.hi;
  report.sufficient_alpha_ok = *alpha > -1.0 && left.ok;

  const Band right = dist.bounded() ? endpoint_band(dist, *beta, false) : tail_band(dist);
  report.right_band_lo = right.lo;
  report.right_band_hi = right.hi;
  report.sufficient_beta_or_tail_ok = right.ok && (!dist.bounded() || *beta > -1.0);

  report.verdict = report.sufficient_alpha_ok && report.sufficient_beta_or_tail_ok
                       ? NearGammaVerdict::sufficient_conditions_pass
                       : NearGammaVerdict::fail;
  return report;
}

NearGammaReport check_near_gamma_direct(const EdgeDistribution& dist, std::size_t quantile_grid_size)
{
  if (quantile_grid_size < 100)
    throw std::invalid_argument("check_near_gamma_direct: grid size must be at least 100");

  NearGammaReport report;
  report.distribution = dist.spec();
  report.direct_checked = true;
  report.grid_size = quantile_grid_size;

  const DirectEstimate coarse = direct_estimate(dist, quantile_grid_size);
  const DirectEstimate fine = direct_estimate(dist, 2 * quantile_grid_size);
  report.direct_A_hat = coarse.A_hat;
  report.direct_A_hat_refined = fine.A_hat;
  report.direct_epsilon_hat = coarse.epsilon_hat;
  report.direct_pass_a = std::isfinite(coarse.A_hat) && coarse.A_hat > 0.0 &&
                         std::abs(fine.A_hat - coarse.A_hat) < 0.1 * coarse.A_hat;
  report.direct_pass_b = coarse.epsilon_hat > 0.05;
  report.direct_pass = report.direct_pass_a && report.direct_pass_b;
  report.verdict = report.direct_pass ? NearGammaVerdict::direct_evidence_only : NearGammaVerdict::fail;
  return report;
}

NearGammaReport classify_near_gamma(const EdgeDistribution& dist, std::size_t quantile_grid_size)
{
  NearGammaReport report = check_near_gamma_direct(dist, quantile_grid_size);
  const NearGammaReport sufficient = check_near_gamma_sufficient(dist);
  report.sufficient_checked = sufficient.sufficient_checked;
  report.sufficient_alpha_ok = sufficient.sufficient_alpha_ok;
  report.sufficient_beta_or_tail_ok = sufficient.sufficient_beta_or_tail_ok;
  report.left_band_lo = sufficient.left_band_lo;
  report.left_band_hi = sufficient.left_band_hi;
  report.right_band_lo = sufficient.right_band_lo;
  report.right_band_hi = sufficient.right_band_hi;

  if (sufficient.verdict == NearGammaVerdict::sufficient_conditions_pass)
    report.verdict = NearGammaVerdict::sufficient_conditions_pass;
  else if (report.direct_pass)
    report.verdict = NearGammaVerdict::direct_evidence_only;
  else
    report.verdict = NearGammaVerdict::fail;
  return report;
}

} // namespace fppvar
