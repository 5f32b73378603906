#include "fppvar/experiments.hpp"

#include <algorithm>
#include <cinttypes>
#include <cmath>
#include <cstdio>
#include <memory>
#include <stdexcept>

#include "fppvar/fpp.hpp"
#include "fppvar/parallel.hpp"
#include "fppvar/seeding.hpp"
#include "fppvar/stats.hpp"

namespace fppvar {

namespace {

constexpr std::size_t kGroups = 64;

double sample_variance(std::span<const double> x)
{
  const double mean = stats::pairwise_sum(x) / static_cast<double>(x.size());
  std::vector<double> sq(x.size());
  for (std::size_t i = 0; i < x.size(); ++i)
    sq[i] = (x[i] - mean) * (x[i] - mean);
  return stats::pairwise_sum(sq) / static_cast<double>(x.size() - 1);
}

std::string format_real(double x)
{
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

} // namespace

VarianceEstimate estimate_variance(const EdgeDistribution& dist, int d, int n, std::size_t samples,
                                   std::uint64_t seed, unsigned workers)
{
  if (!(dist.variance() > 0.0))
    throw DegenerateDistribution("estimate_variance: edge law has zero variance");
  if (n < 2)
    throw std::invalid_argument("estimate_variance: n must be at least 2");
  if (samples < 100)
    throw std::invalid_argument("estimate_variance: at least 100 samples required");

  auto grid = std::make_shared<const GridSpec>(GridSpec::for_target(d, n, default_padding(n)));
  std::vector<int> origin(d, 0), target(d, 0);
  target[0] = n;
  const std::size_t s = grid->vertex(origin), t = grid->vertex(target);
  const std::uint64_t row_seed = derive_seed(seed, static_cast<std::uint64_t>(n));

  std::vector<double> f(samples);
  parallel_for(samples, workers, [&](std::size_t r) {
    const WeightField field = WeightField::sample(grid, dist, derive_seed(row_seed, r));
    f[r] = passage_time(field, s, t).distance;
  });

  VarianceEstimate est;
  est.n = n;
  est.samples = samples;
  est.seed = seed;
  est.mean = stats::pairwise_sum(f) / static_cast<double>(samples);
  est.var = sample_variance(f);
  est.se_var = est.var * std::sqrt(2.0 / static_cast<double>(samples - 1));
  est.se_mean = std::sqrt(est.var / static_cast<double>(samples));
  est.mean_over_n = est.mean / n;
  est.edge_second_moment = dist.second_moment();

  // Delete-a-group jackknife over contiguous index groups.
  std::vector<double> loo(kGroups), rest;
  for (std::size_t g = 0; g < kGroups; ++g) {
    const std::size_t begin = g * samples / kGroups, end = (g + 1) * samples / kGroups;
    rest.clear();
    rest.insert(rest.end(), f.begin(), f.begin() + static_cast<std::ptrdiff_t>(begin));
    rest.insert(rest.end(), f.begin() + static_cast<std::ptrdiff_t>(end), f.end());
    loo[g] = sample_variance(rest);
  }
  est.se_var_jackknife = stats::jackknife_se(loo);
  est.jackknife_consistent =
      est.se_var_jackknife <= 2.0 * est.se_var && est.se_var <= 2.0 * est.se_var_jackknife;
  return est;
}

SweepResult sweep(const EdgeDistribution& dist, int d, const std::vector<int>& ns,
                  std::size_t samples, std::uint64_t seed, unsigned workers)
{
  if (ns.empty())
    throw std::invalid_argument("sweep: empty n list");
  for (std::size_t i = 1; i < ns.size(); ++i)
    if (ns[i] <= ns[i - 1])
      throw std::invalid_argument("sweep: n list must be strictly increasing without duplicates");
  SweepResult result;
  result.distribution = dist.spec();
  result.d = d;
  for (int n : ns)
    result.rows.push_back(estimate_variance(dist, d, n, samples, seed, workers));
  return result;
}

std::string to_csv(const SweepResult& result)
{
  std::string out = "n,samples,mean,var,se_var,mean_over_n,var_over_n,var_logn_over_n,seed\n";
  for (const auto& r : result.rows) {
    const double n = r.n;
    out += std::to_string(r.n) + ',' + std::to_string(r.samples) + ',' + format_real(r.mean) + ',' +
           format_real(r.var) + ',' + format_real(r.se_var) + ',' + format_real(r.mean_over_n) + ',' +
           format_real(r.var / n) + ',' + format_real(r.var * std::log(n) / n) + ',' +
           std::to_string(r.seed) + '\n';
  }
  return out;
}

ScalingFit fit_scaling(const std::vector<VarianceEstimate>& rows)
{
  if (rows.size() < 3)
    throw std::invalid_argument("fit_scaling: at least 3 rows required");
  ScalingFit fit;
  double lo = INFINITY, hi = 0.0;
  std::vector<double> x, y, w;
  for (const auto& r : rows) {
    if (!(r.var > 0.0) || r.n < 2)
      throw std::invalid_argument("fit_scaling: rows need n >= 2 and positive variance");
    const double q = r.var * std::log(r.n) / r.n;
    lo = std::min(lo, q);
    hi = std::max(hi, q);
    x.push_back(std::log(r.n));
    y.push_back(std::log(r.var));
    // se of ln var is se_var / var; rows without errors get unit weight.
    const double s = r.se_var > 0.0 ? r.se_var / r.var : 1.0;
    w.push_back(1.0 / (s * s));
  }
  fit.ratio_bound = hi / lo;

  const double k = static_cast<double>(x.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= k;
  my /= k;
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
  }
  fit.slope_loglog = sxy / sxx;
  fit.intercept = my - fit.slope_loglog * mx;

  double rss = 0.0, var_slope = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double e = y[i] - fit.intercept - fit.slope_loglog * x[i];
    rss += e * e;
    // Var(sum c_i y_i) with c_i = (x_i - mx)/sxx and Var(y_i) = 1/w_i.
    const double c = (x[i] - mx) / sxx;
    var_slope += c * c / w[i];
  }
  fit.slope_se_known = std::sqrt(var_slope);
  fit.slope_se_residual = std::sqrt(rss / (k - 2.0) / sxx);
  fit.slope_se = std::max(fit.slope_se_known, fit.slope_se_residual);
  return fit;
}

SweepChecks check_sweep(const SweepResult& result)
{
  SweepChecks checks;
  checks.var_over_n_nonincreasing = true;
  const auto& rows = result.rows;
  for (std::size_t i = 1; i < rows.size(); ++i) {
    const double a = rows[i - 1].var / rows[i - 1].n, b = rows[i].var / rows[i].n;
    const double se = std::hypot(rows[i - 1].se_var / rows[i - 1].n, rows[i].se_var / rows[i].n);
    const double z = se > 0.0 ? (b - a) / se : 0.0;
    checks.step_z.push_back(z);
    if (z > 2.0)
      checks.var_over_n_nonincreasing = false;
  }
  if (rows.size() >= 2) {
    const auto& p = rows[rows.size() - 2];
    const auto& q = rows.back();
    const double se = std::hypot(p.se_mean / p.n, q.se_mean / q.n);
    checks.mean_stabilization_z = se > 0.0 ? std::abs(q.mean_over_n - p.mean_over_n) / se : 0.0;
    checks.mean_stabilized = checks.mean_stabilization_z <= 3.0;
  }
  return checks;
}

} // namespace fppvar
