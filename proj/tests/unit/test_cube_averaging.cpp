#include <doctest.h>

#include <algorithm>
#include <bit>
#include <cmath>
#include <map>
#include <stdexcept>

#include "fppvar/cube_averaging.hpp"
#include "fppvar/seeding.hpp"

using namespace fppvar;

namespace {

std::vector<std::uint8_t> from_mask(std::uint64_t mask, int n)
{
  std::vector<std::uint8_t> x(n);
  for (int i = 0; i < n; ++i)
    x[i] = (mask >> (n - 1 - i)) & 1u; // bit 0 is the most significant position
  return x;
}

} // namespace

TEST_CASE("small cases")
{
  const AveragingFunction g(2);
  CHECK(g.bits() == 4);
  CHECK(g.k() == 8);
  CHECK(g.total() == 16);
  CHECK(g.value(std::vector<std::uint8_t>(4, 0)) == 0);
  CHECK(g.value(std::vector<std::uint8_t>(4, 1)) == 2);
  CHECK(g.rank(std::vector<std::uint8_t>(4, 0)) == 1);
  CHECK(g.rank(std::vector<std::uint8_t>(4, 1)) == 16);
  CHECK(g.binomial(2) == 6);

  const AveragingFunction one(1);
  CHECK(one.k() == 2);
  CHECK(one.value(std::vector<std::uint8_t>{0}) == 0);
  CHECK(one.value(std::vector<std::uint8_t>{1}) == 1);
}

TEST_CASE("rank matches a sorted enumeration")
{
  for (int m = 1; m <= 4; ++m) {
    const AveragingFunction g(m);
    const int n = m * m;
    std::vector<std::uint64_t> order(std::uint64_t{1} << n);
    for (std::uint64_t i = 0; i < order.size(); ++i)
      order[i] = i;
    std::stable_sort(order.begin(), order.end(), [](std::uint64_t a, std::uint64_t b) {
      const int wa = std::popcount(a), wb = std::popcount(b);
      return wa != wb ? wa < wb : a > b;
    });
    for (std::uint64_t r = 0; r < order.size(); ++r) {
      const auto x = from_mask(order[r], n);
      if (g.rank(x) != BigInt(r + 1)) {
        CAPTURE(m);
        CAPTURE(r);
        FAIL("rank mismatch");
      }
    }
  }
}

TEST_CASE("exhaustive property check")
{
  const double c1[] = {1.0, 1.5, 1.5, 1.571044921875};
  for (int m = 1; m <= 4; ++m) {
    const auto r = verify_averaging_properties(m);
    CAPTURE(m);
    CHECK(r.bijection);
    CHECK(r.monotone);
    CHECK(r.max_rank_shift <= r.rank_shift_bound);
    CHECK(r.max_value_jump <= 1);
    CHECK(r.gradient_ok);
    CHECK(r.c1 == doctest::Approx(c1[m - 1]).epsilon(1e-14));
    CHECK(r.level_ok);
    CHECK(r.ok);
    double total = 0.0;
    for (double p : r.level_probabilities)
      total += p;
    CHECK(total == doctest::Approx(1.0).epsilon(1e-14));
  }
  const auto r2 = verify_averaging_properties(2);
  CHECK(r2.max_level_prob == doctest::Approx(0.5));
  CHECK(r2.rank_shift_bound == 12);
  CHECK_THROWS_AS(verify_averaging_properties(5), std::invalid_argument);
}

TEST_CASE("unrank inverts rank for m up to 8")
{
  for (int m = 1; m <= 8; ++m) {
    const AveragingFunction g(m);
    RandomStream s(100 + m);
    for (int t = 0; t < 200; ++t) {
      std::vector<std::uint8_t> x(g.bits());
      for (auto& b : x)
        b = s.coin();
      CHECK(g.unrank(g.rank(x)) == x);
    }
    CHECK(g.unrank(1) == std::vector<std::uint8_t>(g.bits(), 0));
    CHECK(g.unrank(g.total()) == std::vector<std::uint8_t>(g.bits(), 1));
  }
}

TEST_CASE("large m evaluates without enumeration")
{
  const AveragingFunction g(32);
  CHECK(g.bits() == 1024);
  CHECK(g.value(std::vector<std::uint8_t>(1024, 1)) == 32);
  CHECK(g.value(std::vector<std::uint8_t>(1024, 0)) == 0);
  // A one-bit flip moves the value by at most one.
  RandomStream s(9);
  for (int t = 0; t < 50; ++t) {
    std::vector<std::uint8_t> x(1024);
    for (auto& b : x)
      b = s.coin();
    const int v = g.value(x);
    const std::size_t i = s.bits() % 1024;
    x[i] ^= 1u;
    CHECK(std::abs(g.value(x) - v) <= 1);
  }
}

TEST_CASE("c1 values")
{
  CHECK(c1_value(1) == 1.0);
  CHECK(c1_value(2) == 1.5);
  CHECK(c1_value(4) == doctest::Approx(1.571044921875).epsilon(1e-15));
  for (int m = 1; m < 12; ++m)
    CHECK(c1_value(m + 1) >= c1_value(m));
  CHECK(c1_value(40) <= 2.0 * std::sqrt(2.0 / 3.141592653589793) + 1e-12);
}

TEST_CASE("errors")
{
  CHECK_THROWS_AS(AveragingFunction(0), std::invalid_argument);
  CHECK_THROWS_AS(AveragingFunction(65), std::invalid_argument);
  const AveragingFunction g(2);
  CHECK_THROWS_AS(g.rank(std::vector<std::uint8_t>(3, 0)), std::invalid_argument);
  CHECK_THROWS_AS(g.rank(std::vector<std::uint8_t>{0, 1, 2, 0}), std::invalid_argument);
  CHECK_THROWS_AS(g.unrank(0), std::out_of_range);
  CHECK_THROWS_AS(g.unrank(17), std::out_of_range);
}

TEST_CASE("random vertex")
{
  const AveragingFunction g(2);
  const auto z = random_vertex(g, {{0, 0, 0, 0}, {1, 1, 1, 1}});
  CHECK(z == std::vector<int>{0, 2});
  CHECK_THROWS_AS(random_vertex(g, {{0, 0, 0}}), std::invalid_argument);
}

TEST_CASE("point probability of the random vertex")
{
  const int m = 3, draws = 100000;
  const AveragingFunction g(m);
  const auto report = verify_averaging_properties(m);
  RandomStream s(77);
  std::map<std::vector<int>, int> counts;
  std::vector<std::vector<std::uint8_t>> a(2, std::vector<std::uint8_t>(g.bits()));
  for (int t = 0; t < draws; ++t) {
    for (auto& row : a)
      for (auto& b : row)
        b = s.coin();
    ++counts[random_vertex(g, a)];
  }
  int top = 0;
  for (const auto& [z, c] : counts)
    top = std::max(top, c);
  const double p = static_cast<double>(top) / draws;
  const double se = std::sqrt(p * (1.0 - p) / draws);
  const double bound = report.max_level_prob * report.max_level_prob;
  CHECK(p <= bound + 3.0 * se);
  CHECK(bound <= std::pow(2.0 * c1_value(m) / m, 2));
}
