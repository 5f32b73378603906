#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "fppvar/edgedist.hpp"

namespace fppvar {

/// Summary of N independent passage times f_v, v = n e_1.
struct VarianceEstimate
{
  int n = 0;
  std::size_t samples = 0;
  double mean = 0.0;
  double var = 0.0;               ///< unbiased
  double se_var = 0.0;            ///< var sqrt(2/(N-1)), normal approximation
  double se_var_jackknife = 0.0;  ///< delete-a-group jackknife over 64 groups
  bool jackknife_consistent = false; ///< the two standard errors agree within a factor 2
  double se_mean = 0.0;
  double mean_over_n = 0.0;
  double edge_second_moment = 0.0; ///< E[x_e^2] of the edge law
  std::uint64_t seed = 0;
};

/// Replicate r of the row for n uses the field seed
/// derive_seed(derive_seed(seed, n), r); replicates run on `workers` threads
/// (0: all hardware threads) and the result does not depend on that count.
VarianceEstimate estimate_variance(const EdgeDistribution& dist, int d, int n, std::size_t samples,
                                   std::uint64_t seed, unsigned workers = 0);

struct SweepResult
{
  std::string distribution;
  int d = 2;
  std::vector<VarianceEstimate> rows; ///< strictly increasing in n
};

/// Rejects empty, duplicate or non-increasing n lists.
SweepResult sweep(const EdgeDistribution& dist, int d, const std::vector<int>& ns,
                  std::size_t samples, std::uint64_t seed, unsigned workers = 0);

/// Header n,samples,mean,var,se_var,mean_over_n,var_over_n,var_logn_over_n,seed
/// and one line per row; reals printed with %.17g.
std::string to_csv(const SweepResult& result);

struct ScalingFit
{
  double ratio_bound = 0.0;   ///< max/min of var ln(n)/n over rows
  double slope_loglog = 0.0;  ///< least-squares slope of ln var against ln n
  double intercept = 0.0;
  double slope_se_known = 0.0;    ///< from the per-row errors se_var/var
  double slope_se_residual = 0.0; ///< from the fit residuals
  double slope_se = 0.0;          ///< the larger of the two
};

/// Requires at least 3 rows.
ScalingFit fit_scaling(const std::vector<VarianceEstimate>& rows);

struct SweepChecks
{
  /// var/n at row k+1 minus var/n at row k, over 2 combined standard errors.
  std::vector<double> step_z;
  bool var_over_n_nonincreasing = false;
  /// |mean/n difference| over the combined standard error, last two rows.
  double mean_stabilization_z = 0.0;
  bool mean_stabilized = false;
};

SweepChecks check_sweep(const SweepResult& result);

} // namespace fppvar
