#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "fppvar/edgedist.hpp"
#include "fppvar/gausskit.hpp"

namespace fppvar {

/// f(x, y) on {0,1}^S x R^n with analytic partials in the continuous block.
/// The discrete part carries the uniform Bernoulli product measure, the
/// continuous part the standard Gaussian measure.
struct TestFunction
{
  using Value = std::function<double(std::span<const std::uint8_t>, std::span<const double>)>;
  using Partial =
      std::function<double(std::span<const std::uint8_t>, std::span<const double>, int)>;

  std::string id;
  int discrete_arity = 0;
  int continuous_arity = 1;
  Value value;
  Partial partial;
};

/// The fixed registry, in a stable order.
const std::vector<TestFunction>& test_functions();
/// Registry lookup; throws std::invalid_argument for an unknown id.
const TestFunction& find_test_function(const std::string& id);

/// Largest |analytic - central difference| / max(1, |analytic|) over
/// `points` random (x, y) with y ~ N(0,1), step 1e-5 max(1, |y_i|).
double partial_derivative_error(const TestFunction& f, std::uint64_t seed, int points = 20);

/// Tensor Gauss-Hermite order used per axis for n continuous variables
/// (64, 48, 24, 12, 8, 6 for n = 1..6). Throws for n outside 1..6.
int default_order_for_dimension(int n);

struct McOptions
{
  std::size_t samples = 100000;
  std::uint64_t seed = 1;
  unsigned workers = 0; ///< 0: one per hardware thread; results do not depend on it
};

/// Chunks used by every Monte Carlo estimator; each chunk draws from its own
/// derived seed and the jackknife runs over chunks.
inline constexpr std::size_t kMcChunks = 64;

struct ContinuousTerm
{
  int index = 0;
  double l1 = 0.0;
  double l2sq = 0.0;
  double ratio = 0.0;
  double phi_of_ratio = 0.0;
  double contribution = 0.0;
};

struct InequalityReport
{
  std::string function;
  std::string method; ///< "quadrature" or "monte-carlo"
  double lhs_variance = 0.0;
  double discrete_term = 0.0;
  std::vector<ContinuousTerm> continuous_terms;
  double rhs_total = 0.0;
  double classical_rhs = 0.0; ///< same bound with every phi replaced by 1
  double margin = 0.0;        ///< rhs_total - lhs_variance
  double tolerance = 0.0;
  bool holds = false; ///< margin >= -tolerance
  double lhs_error = 0.0;
  double rhs_error = 0.0;
  std::size_t samples = 0;
  std::uint64_t seed = 0;
};

/// ||grad_q f||_2^2 with grad_q f = f - (average over bit q), by exhaustive
/// enumeration of the cube and tensor quadrature in y.
double discrete_gradient_norm(const TestFunction& f, int q);

/// The modified Poincare bound
///   Var f <= sum_q ||grad_q f||_2^2 + sum_i ||d_i f||_2^2 phi(||d_i f||_1 / ||d_i f||_2)
/// by tensor quadrature (n <= 6). With n = 1 the L1 norms are integrated
/// adaptively between sign changes of d_1 f.
InequalityReport verify_modified_poincare(const TestFunction& f);
InequalityReport verify_modified_poincare(const TestFunction& f, const McOptions& mc);

struct VarianceSplitReport
{
  double lhs = 0.0;                      ///< Var f
  double expected_conditional_var = 0.0; ///< E_y Var_x f
  double var_of_conditional_mean = 0.0;  ///< Var_y E_x f
  double rhs = 0.0;
  double discrepancy = 0.0;
};

VarianceSplitReport verify_variance_split(const TestFunction& f);

struct TensorisationReport
{
  int bits = 0;
  double variance = 0.0;
  double gradient_sum = 0.0;
  double margin = 0.0;
  bool holds = false; ///< variance <= gradient_sum + 1e-12
};

using CubeFunction = std::function<double(std::span<const std::uint8_t>)>;

/// Var(g) <= sum_q ||grad_q g||_2^2 on {0,1}^S by exhaustive enumeration.
TensorisationReport verify_tensorisation(const CubeFunction& g, int bits);

/// c(k) = 2 sqrt(k) / ((k-1) int_0^pi sin^{k-2}), Wallis recurrence.
double c_k(int k);
/// c(k) = sqrt(k) int_0^pi |cos| sin^{k-2} / int_0^pi sin^{k-2}, by quadrature.
double c_k_integral_form(int k);

/// One-dimensional chi-square corollary under nu(dt) ~ e^{-alpha t} t^{k/2-1}:
///   Var g <= (2/alpha) ||D g||_2^2 phi(c(k) ||D g||_1 / ||D g||_2),  D g = g'(y) sqrt(y).
InequalityReport verify_chi2_inequality(const gauss::RealFunction& g, const gauss::RealFunction& dg,
                                        int k, double alpha, const McOptions& mc);

/// One-dimensional change of variables under an edge law nu:
///   Var f <= 2 ||D f||_2^2 phi(||D f||_1 / ||D f||_2),  D f = psi(y) f'(y).
InequalityReport verify_change_of_variables(const gauss::RealFunction& f,
                                            const gauss::RealFunction& df,
                                            const EdgeDistribution& dist, const McOptions& mc);

/// Nelson's bound ||P_t f||_2 <= ||f||_{1+e^{-2t}} with the semigroup acting
/// on y, checked separately on every slice x of the cube. The report carries
/// the slice with the smallest slack.
gauss::HypercontractivityReport check_hypercontractivity(const TestFunction& f, double t);

} // namespace fppvar
