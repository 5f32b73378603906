#include "fppvar/gausskit.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <stdexcept>
#include <string>

#include <boost/math/quadrature/gauss.hpp>

namespace fppvar::gauss {

namespace {

constexpr double kSqrtHalf = 0.70710678118654752440084436210485;

void require_finite(double x, const char* what)
{
  if (!std::isfinite(x))
    throw std::domain_error(std::string(what) + ": non-finite argument");
}

void require_probability(double p, const char* what)
{
  if (!(p > 0.0 && p < 1.0))
    throw std::domain_error(std::string(what) + ": probability must lie in (0,1)");
}

// Acklam's rational approximation to the normal quantile, |rel err| < 1.2e-9.
double quantile_initial(double p)
{
  static constexpr double a[] = {-3.969683028665376e+01, 2.209460984245205e+02,
                                 -2.759285104469687e+02, 1.383577518672690e+02,
                                 -3.066479806614716e+01, 2.506628277459239e+00};
  static constexpr double b[] = {-5.447609879822406e+01, 1.615858368580409e+02,
                                 -1.556989798598866e+02, 6.680131188771972e+01,
                                 -1.328068155288572e+01};
  static constexpr double c[] = {-7.784894002430293e-03, -3.223964580411365e-01,
                                 -2.400758277161838e+00, -2.549732539343734e+00,
                                 4.374664141464968e+00,  2.938163982698783e+00};
  static constexpr double d[] = {7.784695709041462e-03, 3.224671290700398e-01,
                                 2.445134137142996e+00, 3.754408661907416e+00};
  constexpr double p_low = 0.02425;

  if (p < p_low) {
    const double q = std::sqrt(-2.0 * std::log(p));
    return (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
           ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
  }
  const double q = p - 0.5;
  const double r = q * q;
  return (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * q /
         (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
}

// Quantile for q <= 1/2, where G(x) keeps full relative precision.
double quantile_lower(double q)
{
  double x = quantile_initial(q);
  for (int it = 0; it < 6; ++it) {
    const double e = cdf(x) - q;
    const double u = e / pdf(x);
    const double step = u / (1.0 + 0.5 * x * u);
    x -= step;
    if (std::abs(step) <= 1e-16 * std::max(1.0, std::abs(x)))
      break;
  }
  return x;
}

} // namespace

double pdf(double x)
{
  require_finite(x, "gauss::pdf");
  return kInvSqrt2Pi * std::exp(-0.5 * x * x);
}

double log_pdf(double x)
{
  require_finite(x, "gauss::log_pdf");
  return -0.5 * x * x - kLogSqrt2Pi;
}

double cdf(double x)
{
  require_finite(x, "gauss::cdf");
  return 0.5 * std::erfc(-x * kSqrtHalf);
}

double ccdf(double x)
{
  require_finite(x, "gauss::ccdf");
  return 0.5 * std::erfc(x * kSqrtHalf);
}

double mills_ratio(double s)
{
  require_finite(s, "gauss::mills_ratio");
  if (s < 0.0)
    throw std::domain_error("gauss::mills_ratio: argument must be nonnegative");
  if (s < 6.0)
    return ccdf(s) / pdf(s);

  // R(s) = 1/(s + 1/(s + 2/(s + 3/(s + ...)))), modified Lentz.
  constexpr double tiny = 1e-300;
  double f = s;
  double C = f;
  double D = 0.0;
  for (int k = 1; k < 500; ++k) {
    D = s + k * D;
    if (std::abs(D) < tiny)
      D = tiny;
    C = s + k / C;
    if (std::abs(C) < tiny)
      C = tiny;
    D = 1.0 / D;
    const double delta = C * D;
    f *= delta;
    if (std::abs(delta - 1.0) < 1e-16)
      break;
  }
  return 1.0 / f;
}

double log_cdf(double x)
{
  require_finite(x, "gauss::log_cdf");
  if (x > 0.0)
    return std::log1p(-ccdf(x));
  if (x > -6.0)
    return std::log(cdf(x));
  return log_pdf(x) + std::log(mills_ratio(-x));
}

double quantile(double p)
{
  require_probability(p, "gauss::quantile");
  if (p == 0.5)
    return 0.0;
  // 1 - p is exact for p >= 1/2.
  return p < 0.5 ? quantile_lower(p) : -quantile_lower(1.0 - p);
}

double log_g_of_Ginv_tail(double log_q)
{
  if (std::isnan(log_q) || log_q > -std::numbers::ln2 + 1e-15)
    throw std::domain_error("gauss::log_g_of_Ginv_tail: requires log q <= log(1/2)");
  if (log_q == -INFINITY)
    return -INFINITY;
  if (log_q >= std::log(kTailSwitch))
    return log_pdf(quantile(std::exp(log_q)));

  // Solve log g(s) + log R(s) = log q for s = -G^{-1}(q) > 0. The derivative
  // of the left side is -1/R(s), so Newton's step is (residual) * R(s).
  double s = std::sqrt(-2.0 * log_q);
  double R = mills_ratio(s);
  for (int it = 0; it < 60; ++it) {
    const double residual = log_pdf(s) + std::log(R) - log_q;
    const double step = residual * R;
    s += step;
    R = mills_ratio(s);
    if (std::abs(step) <= 4e-16 * s)
      break;
  }
  // q = g(s) R(s)
  return log_q - std::log(R);
}

double g_of_Ginv(double p)
{
  require_probability(p, "gauss::g_of_Ginv");
  const double q = p <= 0.5 ? p : 1.0 - p;
  if (q >= kTailSwitch)
    return pdf(quantile(q));
  return std::exp(log_g_of_Ginv_tail(std::log(q)));
}

QuadratureRule gauss_hermite(int order)
{
  if (order < 1 || order > 400)
    throw std::invalid_argument("gauss_hermite: order must be in [1, 400]");

  // Physicists' Hermite nodes by Newton iteration on the orthonormal
  // recurrence, then rescaled to the probabilists' normalization.
  const int n = order;
  std::vector<double> x(n), w(n);
  const double pim4 = 0.75112554446494248285870300477623;
  double z = 0.0;
  for (int i = 0; i < (n + 1) / 2; ++i) {
    if (i == 0)
      z = std::sqrt(2.0 * n + 1.0) - 1.85575 * std::pow(2.0 * n + 1.0, -0.16667);
    else if (i == 1)
      z -= 1.14 * std::pow(static_cast<double>(n), 0.426) / z;
    else if (i == 2)
      z = 1.86 * z - 0.86 * x[0];
    else if (i == 3)
      z = 1.91 * z - 0.91 * x[1];
    else
      z = 2.0 * z - x[i - 2];

    double pp = 0.0;
    for (int it = 0, converged = 0; it < 100 && converged < 2; ++it) {
      double p1 = pim4;
      double p2 = 0.0;
      for (int j = 0; j < n; ++j) {
        const double p3 = p2;
        p2 = p1;
        p1 = z * std::sqrt(2.0 / (j + 1)) * p2 - std::sqrt(static_cast<double>(j) / (j + 1)) * p3;
      }
      pp = std::sqrt(2.0 * n) * p2;
      const double z1 = z;
      z = z1 - p1 / pp;
      // One extra pass after convergence so pp is evaluated at the root.
      if (std::abs(z - z1) <= 1e-15 * std::max(1.0, std::abs(z)))
        ++converged;
    }
    x[i] = z;
    x[n - 1 - i] = -z;
    w[i] = 2.0 / (pp * pp);
    w[n - 1 - i] = w[i];
  }

  QuadratureRule rule;
  rule.order = order;
  rule.nodes.resize(n);
  rule.weights.resize(n);
  const double inv_sqrt_pi = 0.56418958354775628694807945156077;
  for (int i = 0; i < n; ++i) {
    // x is decreasing; store increasing.
    rule.nodes[i] = std::numbers::sqrt2 * x[n - 1 - i];
    rule.weights[i] = w[n - 1 - i] * inv_sqrt_pi;
  }
  if (n % 2 == 1)
    rule.nodes[n / 2] = 0.0;
  return rule;
}

const QuadratureRule& default_rule()
{
  static const QuadratureRule rule = gauss_hermite(64);
  return rule;
}

double ou_apply(const RealFunction& f, double t, double y, const QuadratureRule& rule)
{
  require_finite(t, "ou_apply");
  require_finite(y, "ou_apply");
  if (t < 0.0)
    throw std::domain_error("ou_apply: time must be nonnegative");
  if (t == 0.0)
    return f(y);
  const double a = std::exp(-t);
  const double b = std::sqrt(-std::expm1(-2.0 * t));
  return rule.integrate([&](double z) { return f(a * y + b * z); });
}

double check_commutation(const RealFunction& f, const RealFunction& df, double t,
                         const QuadratureRule& rule, std::span<const double> grid)
{
  double worst = 0.0;
  const double decay = std::exp(-t);
  for (double y : grid) {
    const double h = 1e-5 * std::max(1.0, std::abs(y));
    const double fd = (ou_apply(f, t, y + h, rule) - ou_apply(f, t, y - h, rule)) / (2.0 * h);
    const double exact = decay * ou_apply(df, t, y, rule);
    worst = std::max(worst, std::abs(fd - exact));
  }
  return worst;
}

HypercontractivityReport check_hypercontractivity(const RealFunction& f, double t,
                                                  const QuadratureRule& rule)
{
  require_finite(t, "check_hypercontractivity");
  if (t < 0.0)
    throw std::domain_error("check_hypercontractivity: time must be nonnegative");

  HypercontractivityReport report;
  report.q_star = 1.0 + std::exp(-2.0 * t);
  const double second = rule.integrate([&](double z) {
    const double v = ou_apply(f, t, z, rule);
    return v * v;
  });
  report.lhs = std::sqrt(second);
  const double q = report.q_star;
  const double moment = rule.integrate([&](double z) { return std::pow(std::abs(f(z)), q); });
  report.rhs = std::pow(moment, 1.0 / q);
  report.slack = report.rhs - report.lhs;
  report.holds = report.lhs <= report.rhs + 1e-8;
  return report;
}

VarianceHeatReport variance_heat_identity(const RealFunction& F, const RealFunction& dF,
                                          const QuadratureRule& rule, double horizon)
{
  if (!(horizon > 0.0) || !std::isfinite(horizon))
    throw std::domain_error("variance_heat_identity: horizon must be positive");

  VarianceHeatReport report;
  report.horizon = horizon;
  const double mean = rule.integrate(F);
  report.variance = rule.integrate([&](double y) {
    const double c = F(y) - mean;
    return c * c;
  });

  // d/dy P_t F = e^{-t} P_t F'.
  auto integrand = [&](double t) {
    const double energy = rule.integrate([&](double y) {
      const double v = ou_apply(dF, t, y, rule);
      return v * v;
    });
    return 2.0 * std::exp(-2.0 * t) * energy;
  };

  constexpr int panels = 40;
  const double width = horizon / panels;
  double total = 0.0;
  for (int k = 0; k < panels; ++k)
    total += boost::math::quadrature::gauss<double, 15>::integrate(integrand, k * width,
                                                                     (k + 1) * width);
  report.integral_side = total;

  const double grad_sq = rule.integrate([&](double y) {
    const double v = dF(y);
    return v * v;
  });
  report.tail_estimate = std::exp(-2.0 * horizon) * grad_sq;
  report.discrepancy = std::abs(report.variance - report.integral_side - report.tail_estimate);
  return report;
}

} // namespace fppvar::gauss
