#pragma once

#include <functional>
#include <span>
#include <vector>

/// Standard Gaussian primitives and the Ornstein-Uhlenbeck semigroup.
///
/// Notation: g is the N(0,1) density, G its distribution function. All
/// functions reject non-finite input with std::domain_error.
namespace fppvar::gauss {

inline constexpr double kInvSqrt2Pi = 0.39894228040143267793994605993438;
inline constexpr double kLogSqrt2Pi = 0.91893853320467274178032973640562;

/// Below this tail probability g_of_Ginv switches to the log-space branch.
inline constexpr double kTailSwitch = 1e-12;

double pdf(double x);
double log_pdf(double x);

/// G(x), via erfc so that the lower tail keeps full relative precision.
double cdf(double x);
/// 1 - G(x) without cancellation.
double ccdf(double x);
/// log G(x); finite for every finite x, including x far below -38.
double log_cdf(double x);

/// Mills ratio (1 - G(s)) / g(s) for s >= 0.
double mills_ratio(double s);

/// G^{-1}(p) for p in (0,1). Rational initial guess polished by Halley
/// steps on G; |G(x) - p| <= 1e-12 max(p, 1-p) down to p = 1e-300.
double quantile(double p);

/// g(G^{-1}(p)). Symmetric in p <-> 1-p. For min(p,1-p) < kTailSwitch the
/// value is obtained in log space from the Mills ratio, so it stays finite
/// and positive for tail probabilities far below double underflow of x^2.
double g_of_Ginv(double p);

/// log g(G^{-1}(q)) given log q, with q <= 1/2.
double log_g_of_Ginv_tail(double log_q);

/// Gauss-Hermite rule normalized against the standard Gaussian measure:
/// sum_j w_j f(x_j) ~ integral of f d(gamma).
struct QuadratureRule
{
  std::vector<double> nodes;
  std::vector<double> weights;
  int order = 0;

  template <class F>
  double integrate(F&& f) const
  {
    double sum = 0.0;
    for (std::size_t j = 0; j < nodes.size(); ++j)
      sum += weights[j] * f(nodes[j]);
    return sum;
  }
};

QuadratureRule gauss_hermite(int order);

/// The order-64 rule, built once.
const QuadratureRule& default_rule();

using RealFunction = std::function<double(double)>;

/// Mehler's formula: P_t f(y) = E f(y e^{-t} + Z sqrt(1 - e^{-2t})).
double ou_apply(const RealFunction& f, double t, double y,
                const QuadratureRule& rule = default_rule());

/// Max over `grid` of |d/dy P_t f - e^{-t} P_t f'|, the left side by a
/// central difference with step 1e-5 max(1,|y|).
double check_commutation(const RealFunction& f, const RealFunction& df, double t,
                         const QuadratureRule& rule, std::span<const double> grid);

struct HypercontractivityReport
{
  double lhs = 0.0;    ///< ||P_t f||_2
  double rhs = 0.0;    ///< ||f||_{q*(t)}
  double q_star = 0.0; ///< 1 + e^{-2t}
  double slack = 0.0;  ///< rhs - lhs
  bool holds = false;  ///< lhs <= rhs + 1e-8
};

HypercontractivityReport check_hypercontractivity(const RealFunction& f, double t,
                                                  const QuadratureRule& rule = default_rule());

struct VarianceHeatReport
{
  double variance = 0.0;
  double integral_side = 0.0; ///< 2 int_0^T E[(d/dy P_t F)^2] dt
  double tail_estimate = 0.0; ///< e^{-2T} ||F'||_2^2
  double discrepancy = 0.0;
  double horizon = 0.0;
};

/// One-dimensional check of Var(F) = 2 int_0^inf E[(d/dy P_t F)^2] dt.
/// Time integral: composite 15-point Gauss-Legendre on [0, T], T = 20.
VarianceHeatReport variance_heat_identity(const RealFunction& F, const RealFunction& dF,
                                          const QuadratureRule& rule = default_rule(),
                                          double horizon = 20.0);

} // namespace fppvar::gauss
