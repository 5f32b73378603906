#include "fppvar/cube_averaging.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace fppvar {

AveragingFunction::AveragingFunction(int m) : m_(m), n_(m * m)
{
  if (m < 1 || m > 64)
    throw std::invalid_argument("averaging function: m must lie in [1, 64]");
  total_ = BigInt(1) << n_;
  k_ = (total_ + m_ - 1) / m_;
  row_.resize(n_ + 1);
  row_[0] = 1;
  for (int j = 0; j < n_; ++j)
    row_[j + 1] = row_[j] * (n_ - j) / (j + 1);
}

void AveragingFunction::check(std::span<const std::uint8_t> x) const
{
  if (static_cast<int>(x.size()) != n_)
    throw std::invalid_argument("averaging function: expected " + std::to_string(n_) + " bits");
  for (auto b : x)
    if (b > 1)
      throw std::invalid_argument("averaging function: entries must be 0 or 1");
}

BigInt AveragingFunction::rank(std::span<const std::uint8_t> x) const
{
  check(x);
  const int w = static_cast<int>(std::count(x.begin(), x.end(), std::uint8_t{1}));

  BigInt below = 0;
  for (int j = 0; j < w; ++j)
    below += row_[j];

  // Ascending lexicographic rank inside the level. c tracks C(n, r) for the
  // n positions still open and r ones still to place.
  BigInt asc = 0;
  BigInt c = row_[w];
  int r = w;
  for (int i = 0; i < n_ && r > 0; ++i) {
    const int n = n_ - i;
    if (x[i]) {
      asc += c * (n - r) / n; // strings with a 0 here
      c = c * r / n;
      --r;
    } else {
      c = c * (n - r) / n;
    }
  }
  return below + (row_[w] - 1 - asc) + 1;
}

std::vector<std::uint8_t> AveragingFunction::unrank(const BigInt& rank) const
{
  if (rank < 1 || rank > total_)
    throw std::out_of_range("averaging function: rank outside [1, 2^{m^2}]");
  BigInt idx = rank - 1;
  int w = 0;
  while (idx >= row_[w]) {
    idx -= row_[w];
    ++w;
  }
  BigInt asc = row_[w] - 1 - idx;

  std::vector<std::uint8_t> x(n_, 0);
  BigInt c = row_[w];
  int r = w;
  for (int i = 0; i < n_ && r > 0; ++i) {
    const int n = n_ - i;
    const BigInt zeros = c * (n - r) / n;
    if (asc >= zeros) {
      x[i] = 1;
      asc -= zeros;
      c = c * r / n;
      --r;
    } else {
      c = zeros;
    }
  }
  return x;
}

int AveragingFunction::value(std::span<const std::uint8_t> x) const
{
  return static_cast<int>(rank(x) / k_);
}

double c1_value(int m)
{
  double best = 0.0;
  for (int mp = 1; mp <= m; ++mp) {
    const AveragingFunction g(mp);
    const int n = mp * mp;
    // 2 C(n, n/2) m' / 2^n, exact until the final conversion.
    const double central = static_cast<double>(g.binomial(n / 2) * 2 * mp) / std::ldexp(1.0, n);
    best = std::max(best, central);
  }
  return best;
}

AveragingReport verify_averaging_properties(int m)
{
  if (m < 1 || m > 4)
    throw std::invalid_argument("exhaustive verification supports m in [1, 4]");
  const AveragingFunction g(m);
  const int n = g.bits();
  const std::uint64_t count = std::uint64_t{1} << n;

  std::vector<std::uint64_t> rank_of(count);
  std::vector<std::uint64_t> point_at(count, count);
  std::vector<std::uint8_t> x(n);
  AveragingReport report;
  report.m = m;
  report.bijection = true;
  for (std::uint64_t mask = 0; mask < count; ++mask) {
    for (int i = 0; i < n; ++i)
      x[i] = (mask >> i) & 1U;
    const auto r = static_cast<std::uint64_t>(g.rank(x));
    rank_of[mask] = r;
    if (r < 1 || r > count || point_at[r - 1] != count)
      report.bijection = false;
    else
      point_at[r - 1] = mask;
  }

  const auto k = static_cast<std::uint64_t>(g.k());
  std::vector<std::uint64_t> level_count(m + 1, 0);
  report.monotone = true;
  int previous = 0;
  for (std::uint64_t r = 1; r <= count; ++r) {
    const int v = static_cast<int>(r / k);
    if (v < previous)
      report.monotone = false;
    previous = v;
    if (v > m)
      throw std::logic_error("g_m exceeded m");
    ++level_count[v];
  }

  for (std::uint64_t mask = 0; mask < count; ++mask)
    for (int i = 0; i < n; ++i) {
      const std::uint64_t other = mask ^ (std::uint64_t{1} << i);
      const std::uint64_t a = rank_of[mask], b = rank_of[other];
      report.max_rank_shift = std::max(report.max_rank_shift, a > b ? a - b : b - a);
      const int ga = static_cast<int>(a / k), gb = static_cast<int>(b / k);
      report.max_value_jump = std::max(report.max_value_jump, std::abs(ga - gb));
    }

  report.rank_shift_bound = 2 * static_cast<std::uint64_t>(g.binomial(n / 2));
  report.gradient_ok = report.max_value_jump <= 1;
  for (auto c : level_count) {
    const double p = static_cast<double>(c) / static_cast<double>(count);
    report.level_probabilities.push_back(p);
    report.max_level_prob = std::max(report.max_level_prob, p);
  }
  report.c1 = c1_value(m);
  report.level_bound = 2.0 * report.c1 / m;
  report.level_ok = report.max_level_prob <= report.level_bound;
  report.ok = report.bijection && report.monotone && report.gradient_ok && report.level_ok &&
              report.max_rank_shift <= report.rank_shift_bound;
  return report;
}

std::vector<int> random_vertex(const AveragingFunction& g,
                               const std::vector<std::vector<std::uint8_t>>& a)
{
  std::vector<int> z;
  z.reserve(a.size());
  for (const auto& row : a)
    z.push_back(g.value(row));
  return z;
}

} // namespace fppvar
