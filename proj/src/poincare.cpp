#include "fppvar/poincare.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/tools/roots.hpp>

#include "fppvar/parallel.hpp"
#include "fppvar/phifunc.hpp"
#include "fppvar/seeding.hpp"
#include "fppvar/stats.hpp"

namespace fppvar {

namespace {

using Bits = std::span<const std::uint8_t>;
using Reals = std::span<const double>;

double sigmoid(double s) { return 1.0 / (1.0 + std::exp(-s)); }

double softplus(double s) { return s > 0.0 ? s + std::log1p(std::exp(-s)) : std::log1p(std::exp(s)); }

std::vector<TestFunction> build_registry()
{
  std::vector<TestFunction> r;
  auto add = [&](std::string id, int S, int n, TestFunction::Value v, TestFunction::Partial p) {
    r.push_back(TestFunction{std::move(id), S, n, std::move(v), std::move(p)});
  };

  add("linear-1d", 0, 1, [](Bits, Reals y) { return y[0]; }, [](Bits, Reals, int) { return 1.0; });
  add("quadratic-1d", 0, 1, [](Bits, Reals y) { return y[0] * y[0]; },
      [](Bits, Reals y, int) { return 2.0 * y[0]; });
  add("cubic-1d", 0, 1, [](Bits, Reals y) { return y[0] * y[0] * y[0]; },
      [](Bits, Reals y, int) { return 3.0 * y[0] * y[0]; });
  add("sine-1d", 0, 1, [](Bits, Reals y) { return std::sin(y[0]); },
      [](Bits, Reals y, int) { return std::cos(y[0]); });
  add("constant", 0, 1, [](Bits, Reals) { return 1.0; }, [](Bits, Reals, int) { return 0.0; });
  add("bit-1", 1, 1, [](Bits x, Reals) { return static_cast<double>(x[0]); },
      [](Bits, Reals, int) { return 0.0; });
  add("bit-times-y", 1, 1, [](Bits x, Reals y) { return x[0] * y[0]; },
      [](Bits x, Reals, int) { return static_cast<double>(x[0]); });
  add("bit-plus-y", 1, 1, [](Bits x, Reals y) { return x[0] + y[0]; },
      [](Bits, Reals, int) { return 1.0; });
  add(
      "bump-mixed", 2, 1,
      [](Bits x, Reals y) { return (1.0 + x[0] + 2.0 * x[1]) * std::exp(-0.5 * y[0] * y[0]); },
      [](Bits x, Reals y, int) {
        return -(1.0 + x[0] + 2.0 * x[1]) * y[0] * std::exp(-0.5 * y[0] * y[0]);
      });
  add(
      "softmax-2d", 0, 2, [](Bits, Reals y) { return std::max(y[0], y[1]) + std::log1p(std::exp(-std::abs(y[0] - y[1]))); },
      [](Bits, Reals y, int i) { return sigmoid(y[i] - y[1 - i]); });
  add(
      "mixed-2d", 2, 2,
      [](Bits x, Reals y) { return x[0] * y[0] + x[1] * std::sin(y[1]) + 0.5 * y[0] * y[1]; },
      [](Bits x, Reals y, int i) {
        return i == 0 ? x[0] + 0.5 * y[1] : x[1] * std::cos(y[1]) + 0.5 * y[0];
      });
  add(
      "tanh-sum-3d", 0, 3, [](Bits, Reals y) { return std::tanh(y[0] + y[1] + y[2]); },
      [](Bits, Reals y, int) {
        const double c = std::cosh(y[0] + y[1] + y[2]);
        return 1.0 / (c * c);
      });
  // Smoothed minimum of three passage times plus a bit: a toy geodesic choice.
  add(
      "softmin-3d", 1, 3,
      [](Bits x, Reals y) {
        const double m = std::min({y[0], y[1], y[2]});
        double s = 0.0;
        for (double v : y)
          s += std::exp(-(v - m));
        return m - std::log(s) + x[0];
      },
      [](Bits, Reals y, int i) {
        const double m = std::min({y[0], y[1], y[2]});
        double s = 0.0;
        for (double v : y)
          s += std::exp(-(v - m));
        return std::exp(-(y[i] - m)) / s;
      });
  add(
      "ramp-4d", 0, 4, [](Bits, Reals y) { return softplus(0.5 * (y[0] + y[1] + y[2] + y[3])); },
      [](Bits, Reals y, int) { return 0.5 * sigmoid(0.5 * (y[0] + y[1] + y[2] + y[3])); });
  return r;
}

std::vector<std::uint8_t> bits_of(std::uint64_t mask, int S)
{
  std::vector<std::uint8_t> x(S);
  for (int q = 0; q < S; ++q)
    x[q] = static_cast<std::uint8_t>((mask >> q) & 1U);
  return x;
}

void require_cube_size(int S)
{
  if (S < 0 || S > 20)
    throw std::invalid_argument("discrete arity must lie in [0, 20]");
}

// Tensor product of a 1-d rule in n dimensions; fn(y, weight).
template <class Fn>
void for_each_node(const gauss::QuadratureRule& rule, int n, Fn&& fn)
{
  const int m = rule.order;
  std::vector<int> idx(n, 0);
  std::vector<double> y(n);
  for (;;) {
    double w = 1.0;
    for (int i = 0; i < n; ++i) {
      y[i] = rule.nodes[idx[i]];
      w *= rule.weights[idx[i]];
    }
    fn(std::span<const double>(y), w);
    int i = 0;
    while (i < n && ++idx[i] == m)
      idx[i++] = 0;
    if (i == n)
      return;
  }
}

// Values of f on every (cube vertex, tensor node), vertex-major.
struct Tabulation
{
  int S = 0, n = 0;
  std::size_t vertices = 0, nodes = 0;
  std::vector<double> weights;
  std::vector<std::vector<double>> points;
  std::vector<double> values;
};

Tabulation tabulate(const TestFunction& f, const gauss::QuadratureRule& rule)
{
  Tabulation t;
  t.S = f.discrete_arity;
  t.n = f.continuous_arity;
  require_cube_size(t.S);
  t.vertices = std::size_t{1} << t.S;
  for_each_node(rule, t.n, [&](Reals y, double w) {
    t.points.emplace_back(y.begin(), y.end());
    t.weights.push_back(w);
  });
  t.nodes = t.weights.size();
  t.values.resize(t.vertices * t.nodes);
  for (std::size_t mask = 0; mask < t.vertices; ++mask) {
    const auto x = bits_of(mask, t.S);
    for (std::size_t j = 0; j < t.nodes; ++j)
      t.values[mask * t.nodes + j] = f.value(x, t.points[j]);
  }
  return t;
}

gauss::QuadratureRule rule_for(const TestFunction& f)
{
  return gauss::gauss_hermite(default_order_for_dimension(f.continuous_arity));
}

double discrete_term_of(const Tabulation& t, int q)
{
  double total = 0.0;
  for (std::size_t mask = 0; mask < t.vertices; ++mask) {
    const std::size_t flipped = mask ^ (std::size_t{1} << q);
    for (std::size_t j = 0; j < t.nodes; ++j) {
      const double g = 0.5 * (t.values[mask * t.nodes + j] - t.values[flipped * t.nodes + j]);
      total += t.weights[j] * g * g;
    }
  }
  return total / static_cast<double>(t.vertices);
}

// int |h| dgamma on the line, split at sign changes of h so every piece is
// smooth for Gauss-Kronrod. The mass beyond |y| = 12 is below 1e-32.
double gaussian_abs_integral(const std::function<double(double)>& h)
{
  constexpr double L = 12.0;
  constexpr int cells = 2400;
  std::vector<double> cuts{-L};
  double ya = -L, ha = h(ya);
  for (int j = 1; j <= cells; ++j) {
    const double yb = -L + 2.0 * L * j / cells;
    const double hb = h(yb);
    if (ha == 0.0) {
      if (ya > cuts.back())
        cuts.push_back(ya);
    } else if (ha * hb < 0.0) {
      boost::uintmax_t iters = 200;
      const auto root = boost::math::tools::toms748_solve(
          h, ya, yb, ha, hb, boost::math::tools::eps_tolerance<double>(52), iters);
      const double c = 0.5 * (root.first + root.second);
      if (c > cuts.back())
        cuts.push_back(c);
    }
    ya = yb;
    ha = hb;
  }
  cuts.push_back(L);

  double total = 0.0;
  for (std::size_t k = 0; k + 1 < cuts.size(); ++k) {
    total += boost::math::quadrature::gauss_kronrod<double, 31>::integrate(
        [&](double y) { return std::abs(h(y)) * gauss::pdf(y); }, cuts[k], cuts[k + 1], 12, 1e-14);
  }
  return total;
}

void finish_report(InequalityReport& r)
{
  r.margin = r.rhs_total - r.lhs_variance;
  r.holds = r.margin >= -r.tolerance;
}

ContinuousTerm make_term(int index, double l1, double l2sq, double factor, double ratio_scale)
{
  ContinuousTerm term;
  term.index = index;
  term.l1 = l1;
  term.l2sq = l2sq;
  if (l2sq > 0.0) {
    term.ratio = l1 / std::sqrt(l2sq);
    term.phi_of_ratio = phi(std::clamp(ratio_scale * term.ratio, 0.0, 1.0));
  }
  term.contribution = factor * term.l2sq * term.phi_of_ratio;
  return term;
}

// Monte Carlo core shared by the Proposition and its corollaries. Each draw
// reports f, the squared discrete gradients and the continuous gradients.
struct McLayout
{
  int discrete = 0;
  int continuous = 1;
  double factor = 1.0;      ///< multiplier on every continuous contribution
  double ratio_scale = 1.0; ///< multiplier inside phi
};

using McDraw = std::function<void(RandomStream&, double& f, std::span<double> dq2,
                                  std::span<double> grad)>;

struct McEstimate
{
  double lhs = 0.0, discrete = 0.0, rhs = 0.0, classical = 0.0;
  std::vector<ContinuousTerm> terms;
};

// sums layout: count, f, f^2, dq2[S], |grad|[n], grad^2[n]
McEstimate estimate_from_sums(const McLayout& L, const std::vector<double>& s)
{
  McEstimate e;
  const double N = s[0];
  const double mean = s[1] / N;
  e.lhs = std::max(0.0, (s[2] - N * mean * mean) / (N - 1.0));
  for (int q = 0; q < L.discrete; ++q)
    e.discrete += s[3 + q] / N;
  e.rhs = e.discrete;
  e.classical = e.discrete;
  for (int i = 0; i < L.continuous; ++i) {
    const double l1 = s[3 + L.discrete + i] / N;
    const double l2 = s[3 + L.discrete + L.continuous + i] / N;
    e.terms.push_back(make_term(i, l1, l2, L.factor, L.ratio_scale));
    e.rhs += e.terms.back().contribution;
    e.classical += L.factor * l2;
  }
  return e;
}

InequalityReport run_monte_carlo(const McLayout& L, const McOptions& mc, const McDraw& draw)
{
  if (mc.samples < 1000)
    throw std::invalid_argument("Monte Carlo mode needs at least 1000 samples");

  const std::size_t width = 3 + L.discrete + 2 * L.continuous;
  std::vector<std::vector<double>> chunk_sums(kMcChunks, std::vector<double>(width, 0.0));
  parallel_for(kMcChunks, mc.workers, [&](std::size_t c) {
    const std::size_t begin = c * mc.samples / kMcChunks;
    const std::size_t end = (c + 1) * mc.samples / kMcChunks;
    RandomStream stream(derive_seed(mc.seed, c));
    std::vector<double> dq2(L.discrete), grad(L.continuous);
    auto& s = chunk_sums[c];
    for (std::size_t k = begin; k < end; ++k) {
      double f = 0.0;
      draw(stream, f, dq2, grad);
      if (!std::isfinite(f))
        throw std::domain_error("Monte Carlo draw produced a non-finite value");
      s[0] += 1.0;
      s[1] += f;
      s[2] += f * f;
      for (int q = 0; q < L.discrete; ++q)
        s[3 + q] += dq2[q];
      for (int i = 0; i < L.continuous; ++i) {
        s[3 + L.discrete + i] += std::abs(grad[i]);
        s[3 + L.discrete + L.continuous + i] += grad[i] * grad[i];
      }
    }
  });

  std::vector<double> total(width), column(kMcChunks);
  for (std::size_t j = 0; j < width; ++j) {
    for (std::size_t c = 0; c < kMcChunks; ++c)
      column[c] = chunk_sums[c][j];
    total[j] = stats::pairwise_sum(column);
  }
  const McEstimate full = estimate_from_sums(L, total);

  std::vector<double> loo_lhs(kMcChunks), loo_rhs(kMcChunks);
  for (std::size_t c = 0; c < kMcChunks; ++c) {
    std::vector<double> rest(width);
    for (std::size_t j = 0; j < width; ++j)
      rest[j] = total[j] - chunk_sums[c][j];
    const McEstimate e = estimate_from_sums(L, rest);
    loo_lhs[c] = e.lhs;
    loo_rhs[c] = e.rhs;
  }

  InequalityReport r;
  r.method = "monte-carlo";
  r.lhs_variance = full.lhs;
  r.discrete_term = full.discrete;
  r.continuous_terms = full.terms;
  r.rhs_total = full.rhs;
  r.classical_rhs = full.classical;
  r.lhs_error = stats::jackknife_se(loo_lhs);
  r.rhs_error = stats::jackknife_se(loo_rhs);
  r.tolerance = 3.0 * std::hypot(r.lhs_error, r.rhs_error);
  r.samples = mc.samples;
  r.seed = mc.seed;
  finish_report(r);
  return r;
}

} // namespace

const std::vector<TestFunction>& test_functions()
{
  static const std::vector<TestFunction> registry = build_registry();
  return registry;
}

const TestFunction& find_test_function(const std::string& id)
{
  for (const auto& f : test_functions())
    if (f.id == id)
      return f;
  throw std::invalid_argument("unknown test function '" + id + "'");
}

double partial_derivative_error(const TestFunction& f, std::uint64_t seed, int points)
{
  RandomStream stream(seed);
  double worst = 0.0;
  std::vector<std::uint8_t> x(f.discrete_arity);
  std::vector<double> y(f.continuous_arity);
  for (int p = 0; p < points; ++p) {
    for (auto& b : x)
      b = stream.coin() ? 1 : 0;
    for (auto& v : y)
      v = gauss::quantile(stream.uniform());
    for (int i = 0; i < f.continuous_arity; ++i) {
      const double h = 1e-5 * std::max(1.0, std::abs(y[i]));
      auto yp = y, ym = y;
      yp[i] += h;
      ym[i] -= h;
      const double fd = (f.value(x, yp) - f.value(x, ym)) / (2.0 * h);
      const double exact = f.partial(x, y, i);
      worst = std::max(worst, std::abs(fd - exact) / std::max(1.0, std::abs(exact)));
    }
  }
  return worst;
}

int default_order_for_dimension(int n)
{
  static constexpr int orders[] = {64, 48, 24, 12, 8, 6};
  if (n < 1 || n > 6)
    throw std::invalid_argument("tensor quadrature supports 1 to 6 continuous variables");
  return orders[n - 1];
}

double discrete_gradient_norm(const TestFunction& f, int q)
{
  if (q < 0 || q >= f.discrete_arity)
    throw std::out_of_range("discrete coordinate out of range");
  return discrete_term_of(tabulate(f, rule_for(f)), q);
}

InequalityReport verify_modified_poincare(const TestFunction& f)
{
  const auto rule = rule_for(f);
  const Tabulation t = tabulate(f, rule);
  const double inv_vertices = 1.0 / static_cast<double>(t.vertices);

  InequalityReport r;
  r.function = f.id;
  r.method = "quadrature";

  double mean = 0.0;
  for (std::size_t mask = 0; mask < t.vertices; ++mask)
    for (std::size_t j = 0; j < t.nodes; ++j)
      mean += t.weights[j] * t.values[mask * t.nodes + j];
  mean *= inv_vertices;
  double var = 0.0;
  for (std::size_t mask = 0; mask < t.vertices; ++mask)
    for (std::size_t j = 0; j < t.nodes; ++j) {
      const double c = t.values[mask * t.nodes + j] - mean;
      var += t.weights[j] * c * c;
    }
  r.lhs_variance = var * inv_vertices;

  for (int q = 0; q < t.S; ++q)
    r.discrete_term += discrete_term_of(t, q);
  r.rhs_total = r.discrete_term;
  r.classical_rhs = r.discrete_term;

  for (int i = 0; i < t.n; ++i) {
    double l1 = 0.0, l2 = 0.0;
    for (std::size_t mask = 0; mask < t.vertices; ++mask) {
      const auto x = bits_of(mask, t.S);
      for (std::size_t j = 0; j < t.nodes; ++j) {
        const double d = f.partial(x, t.points[j], i);
        l2 += t.weights[j] * d * d;
        if (t.n > 1)
          l1 += t.weights[j] * std::abs(d);
      }
      if (t.n == 1) {
        l1 += gaussian_abs_integral([&](double y) {
          const double yy[1] = {y};
          return f.partial(x, yy, 0);
        });
      }
    }
    r.continuous_terms.push_back(make_term(i, l1 * inv_vertices, l2 * inv_vertices, 1.0, 1.0));
    r.rhs_total += r.continuous_terms.back().contribution;
    r.classical_rhs += r.continuous_terms.back().l2sq;
  }

  r.tolerance = 1e-6 * (1.0 + r.rhs_total);
  finish_report(r);
  return r;
}

InequalityReport verify_modified_poincare(const TestFunction& f, const McOptions& mc)
{
  require_cube_size(f.discrete_arity);
  McLayout L;
  L.discrete = f.discrete_arity;
  L.continuous = f.continuous_arity;
  InequalityReport r = run_monte_carlo(
      L, mc, [&](RandomStream& stream, double& value, std::span<double> dq2, std::span<double> grad) {
        std::vector<std::uint8_t> x(L.discrete);
        std::vector<double> y(L.continuous);
        for (auto& b : x)
          b = stream.coin() ? 1 : 0;
        for (auto& v : y)
          v = gauss::quantile(stream.uniform());
        value = f.value(x, y);
        for (int q = 0; q < L.discrete; ++q) {
          x[q] ^= 1;
          const double g = 0.5 * (value - f.value(x, y));
          x[q] ^= 1;
          dq2[q] = g * g;
        }
        for (int i = 0; i < L.continuous; ++i)
          grad[i] = f.partial(x, y, i);
      });
  r.function = f.id;
  return r;
}

VarianceSplitReport verify_variance_split(const TestFunction& f)
{
  const auto rule = rule_for(f);
  const Tabulation t = tabulate(f, rule);
  const double inv_vertices = 1.0 / static_cast<double>(t.vertices);

  std::vector<double> cond_mean(t.nodes), cond_var(t.nodes);
  for (std::size_t j = 0; j < t.nodes; ++j) {
    double m = 0.0;
    for (std::size_t mask = 0; mask < t.vertices; ++mask)
      m += t.values[mask * t.nodes + j];
    m *= inv_vertices;
    double v = 0.0;
    for (std::size_t mask = 0; mask < t.vertices; ++mask) {
      const double c = t.values[mask * t.nodes + j] - m;
      v += c * c;
    }
    cond_mean[j] = m;
    cond_var[j] = v * inv_vertices;
  }

  double mean = 0.0;
  for (std::size_t j = 0; j < t.nodes; ++j)
    mean += t.weights[j] * cond_mean[j];

  VarianceSplitReport r;
  for (std::size_t j = 0; j < t.nodes; ++j) {
    const double c = cond_mean[j] - mean;
    r.var_of_conditional_mean += t.weights[j] * c * c;
    r.expected_conditional_var += t.weights[j] * cond_var[j];
    for (std::size_t mask = 0; mask < t.vertices; ++mask) {
      const double d = t.values[mask * t.nodes + j] - mean;
      r.lhs += t.weights[j] * d * d * inv_vertices;
    }
  }
  r.rhs = r.expected_conditional_var + r.var_of_conditional_mean;
  r.discrepancy = std::abs(r.lhs - r.rhs);
  return r;
}

TensorisationReport verify_tensorisation(const CubeFunction& g, int bits)
{
  require_cube_size(bits);
  const std::size_t count = std::size_t{1} << bits;
  std::vector<double> values(count);
  for (std::size_t mask = 0; mask < count; ++mask)
    values[mask] = g(bits_of(mask, bits));

  long double mean = 0.0L;
  for (double v : values)
    mean += v;
  mean /= static_cast<long double>(count);
  long double var = 0.0L;
  for (double v : values)
    var += (v - mean) * (v - mean);
  var /= static_cast<long double>(count);

  long double grad = 0.0L;
  for (int q = 0; q < bits; ++q)
    for (std::size_t mask = 0; mask < count; ++mask) {
      const long double d = 0.5L * (values[mask] - values[mask ^ (std::size_t{1} << q)]);
      grad += d * d;
    }
  grad /= static_cast<long double>(count);

  TensorisationReport r;
  r.bits = bits;
  r.variance = static_cast<double>(var);
  r.gradient_sum = static_cast<double>(grad);
  r.margin = r.gradient_sum - r.variance;
  r.holds = r.margin >= -1e-12;
  return r;
}

double c_k(int k)
{
  if (k < 2)
    throw std::invalid_argument("c(k) requires k >= 2");
  // W(m) = int_0^pi sin^m, W(m) = (m-1)/m W(m-2).
  const int m = k - 2;
  double w = (m % 2 == 0) ? std::numbers::pi : 2.0;
  for (int j = (m % 2 == 0) ? 2 : 3; j <= m; j += 2)
    w *= static_cast<double>(j - 1) / j;
  return 2.0 * std::sqrt(static_cast<double>(k)) / ((k - 1) * w);
}

double c_k_integral_form(int k)
{
  if (k < 2)
    throw std::invalid_argument("c(k) requires k >= 2");
  using boost::math::quadrature::gauss_kronrod;
  const double half_pi = 0.5 * std::numbers::pi;
  // Both integrands are symmetric about pi/2; integrate the smooth half.
  const double num = gauss_kronrod<double, 61>::integrate(
      [k](double t) { return std::cos(t) * std::pow(std::sin(t), k - 2); }, 0.0, half_pi, 15, 1e-15);
  const double den = gauss_kronrod<double, 61>::integrate(
      [k](double t) { return std::pow(std::sin(t), k - 2); }, 0.0, half_pi, 15, 1e-15);
  return std::sqrt(static_cast<double>(k)) * num / den;
}

InequalityReport verify_chi2_inequality(const gauss::RealFunction& g, const gauss::RealFunction& dg,
                                        int k, double alpha, const McOptions& mc)
{
  if (!(alpha > 0.0))
    throw std::invalid_argument("chi2 inequality: alpha must be positive");
  const EdgeDistribution dist = EdgeDistribution::chi2(k, alpha);
  McLayout L;
  L.factor = 2.0 / alpha;
  L.ratio_scale = c_k(k);
  InequalityReport r =
      run_monte_carlo(L, mc, [&](RandomStream& stream, double& value, std::span<double>, std::span<double> grad) {
        const double y = dist.quantile(stream.uniform());
        value = g(y);
        grad[0] = dg(y) * std::sqrt(y);
      });
  r.function = "chi2:" + dist.spec();
  return r;
}

InequalityReport verify_change_of_variables(const gauss::RealFunction& f,
                                            const gauss::RealFunction& df,
                                            const EdgeDistribution& dist, const McOptions& mc)
{
  McLayout L;
  L.factor = 2.0;
  InequalityReport r =
      run_monte_carlo(L, mc, [&](RandomStream& stream, double& value, std::span<double>, std::span<double> grad) {
        const double y = dist.quantile(stream.uniform());
        value = f(y);
        const double d = df(y);
        if (!std::isfinite(d))
          throw std::domain_error("change of variables: derivative not finite on the support");
        grad[0] = psi(dist, y) * d;
      });
  r.function = "change-of-variables:" + dist.spec();
  return r;
}

gauss::HypercontractivityReport check_hypercontractivity(const TestFunction& f, double t)
{
  if (!(t >= 0.0) || !std::isfinite(t))
    throw std::domain_error("check_hypercontractivity: time must be nonnegative");
  static constexpr int orders[] = {64, 24, 12, 8, 6, 5};
  const int n = f.continuous_arity;
  if (n < 1 || n > 6)
    throw std::invalid_argument("check_hypercontractivity: 1 to 6 continuous variables");
  require_cube_size(f.discrete_arity);
  const auto rule = gauss::gauss_hermite(orders[n - 1]);

  std::vector<std::vector<double>> points;
  std::vector<double> weights;
  for_each_node(rule, n, [&](Reals y, double w) {
    points.emplace_back(y.begin(), y.end());
    weights.push_back(w);
  });

  const double a = std::exp(-t);
  const double b = std::sqrt(-std::expm1(-2.0 * t));
  const double q = 1.0 + std::exp(-2.0 * t);

  gauss::HypercontractivityReport worst;
  bool first = true;
  std::vector<double> shifted(n);
  const std::size_t vertices = std::size_t{1} << f.discrete_arity;
  for (std::size_t mask = 0; mask < vertices; ++mask) {
    const auto x = bits_of(mask, f.discrete_arity);
    double second = 0.0, moment = 0.0;
    for (std::size_t o = 0; o < points.size(); ++o) {
      double pt = 0.0;
      for (std::size_t in = 0; in < points.size(); ++in) {
        for (int i = 0; i < n; ++i)
          shifted[i] = a * points[o][i] + b * points[in][i];
        pt += weights[in] * f.value(x, shifted);
      }
      second += weights[o] * pt * pt;
      moment += weights[o] * std::pow(std::abs(f.value(x, points[o])), q);
    }
    gauss::HypercontractivityReport slice;
    slice.q_star = q;
    slice.lhs = std::sqrt(second);
    slice.rhs = std::pow(moment, 1.0 / q);
    slice.slack = slice.rhs - slice.lhs;
    slice.holds = slice.lhs <= slice.rhs + 1e-8;
    if (first || slice.slack < worst.slack)
      worst = slice;
    first = false;
  }
  worst.holds = worst.lhs <= worst.rhs + 1e-8;
  return worst;
}

} // namespace fppvar
