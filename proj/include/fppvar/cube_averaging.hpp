#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

namespace fppvar {

using BigInt = boost::multiprecision::cpp_int;

/// g_m on {0,1}^{m^2}: points are ranked 1..2^{m^2} by Hamming weight and,
/// inside one weight level, in decreasing lexicographic order (bit 0 most
/// significant). Then g_m(x) = floor(rank(x) / k_m) with k_m = ceil(2^{m^2}/m).
///
/// Ranks are exact big integers computed from binomial sums, so evaluation
/// never enumerates the cube.
class AveragingFunction
{
public:
  explicit AveragingFunction(int m);

  int m() const { return m_; }
  int bits() const { return n_; }
  const BigInt& k() const { return k_; }
  const BigInt& total() const { return total_; }
  const BigInt& binomial(int j) const { return row_[j]; } ///< C(m^2, j)

  /// Rank in [1, 2^{m^2}]. Throws std::invalid_argument on wrong length or
  /// entries other than 0/1.
  BigInt rank(std::span<const std::uint8_t> x) const;
  std::vector<std::uint8_t> unrank(const BigInt& r) const;
  int value(std::span<const std::uint8_t> x) const;

private:
  void check(std::span<const std::uint8_t> x) const;

  int m_;
  int n_;
  BigInt total_;
  BigInt k_;
  std::vector<BigInt> row_;
};

/// c1(m) = max over m' <= m of 2 C(m'^2, floor(m'^2/2)) m' / 2^{m'^2}.
double c1_value(int m);

struct AveragingReport
{
  int m = 0;
  bool bijection = false;
  std::uint64_t max_rank_shift = 0;   ///< largest |rank change| under one bit flip
  std::uint64_t rank_shift_bound = 0; ///< 2 C(m^2, floor(m^2/2))
  bool monotone = false;              ///< g_m nondecreasing along the rank order
  int max_value_jump = 0;             ///< largest |g_m change| under one bit flip
  bool gradient_ok = false;           ///< max_value_jump <= 1
  std::vector<double> level_probabilities;
  double max_level_prob = 0.0;
  double c1 = 0.0;
  double level_bound = 0.0; ///< 2 c1 / m
  bool level_ok = false;
  bool ok = false;
};

/// Exhaustive check over all 2^{m^2} points; m in [1, 4].
AveragingReport verify_averaging_properties(int m);

/// z(a) = (g_m(a_1), ..., g_m(a_d)) for a d x m^2 bit matrix.
std::vector<int> random_vertex(const AveragingFunction& g,
                               const std::vector<std::vector<std::uint8_t>>& a);

} // namespace fppvar
