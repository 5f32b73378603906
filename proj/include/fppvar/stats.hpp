#pragma once

#include <cmath>
#include <cstddef>
#include <span>

namespace fppvar::stats {

/// Pairwise summation in index order. The result depends only on the values
/// and their order, never on how they were produced.
inline double pairwise_sum(std::span<const double> v)
{
  if (v.size() <= 8) {
    double s = 0.0;
    for (double x : v)
      s += x;
    return s;
  }
  const std::size_t half = v.size() / 2;
  return pairwise_sum(v.first(half)) + pairwise_sum(v.subspan(half));
}

/// Jackknife standard error from leave-one-group-out estimates.
inline double jackknife_se(std::span<const double> loo)
{
  const double g = static_cast<double>(loo.size());
  if (loo.size() < 2)
    return 0.0;
  double mean = 0.0;
  for (double x : loo)
    mean += x;
  mean /= g;
  double ss = 0.0;
  for (double x : loo)
    ss += (x - mean) * (x - mean);
  return std::sqrt((g - 1.0) / g * ss);
}

} // namespace fppvar::stats
