#include <doctest.h>

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "fppvar/phifunc.hpp"

using fppvar::phi;
using fppvar::phi_asymptotic;

TEST_CASE("endpoints are exact")
{
  CHECK(phi(0.0) == 0.0);
  CHECK(phi(1.0) == 1.0);
  CHECK(std::abs(phi(1.0 - 1e-12) - 1.0) < 1e-9);
  CHECK(phi(1e-12) > 0.0);
}

TEST_CASE("reference values")
{
  CHECK(std::abs(phi(0.5) - 0.6276535611757067837) < 1e-12);
  CHECK(std::abs(phi(std::sqrt(2.0 / std::numbers::pi)) - 0.8465012735033065) < 1e-12);
}

TEST_CASE("monotone on a fine grid")
{
  double previous = phi(0.0);
  for (int k = 1; k <= 1000; ++k) {
    const double v = phi(k / 1000.0);
    CHECK(v > previous);
    previous = v;
  }
}

TEST_CASE("logarithmic behaviour near zero")
{
  struct Row
  {
    double u, product;
  };
  const Row rows[] = {{1e-3, 0.8798985937643551},
                      {1e-6, 0.9345087281608113},
                      {1e-9, 0.9549363909577346},
                      {1e-12, 0.9656429130137140}};
  double previous = 0.0;
  for (const auto& r : rows) {
    const double p = phi(r.u) * -std::log(r.u);
    CHECK(std::abs(p - r.product) < 1e-10);
    CHECK(p > previous);
    previous = p;
  }
  // Subnormal argument, still integrated rather than replaced by the asymptote.
  CHECK(std::abs(phi(1e-310) * -std::log(1e-310) - 0.998601985829486115) < 1e-9);
  CHECK(phi_asymptotic(1e-6) == doctest::Approx(1.0 / std::log(1e6)));
}

TEST_CASE("domain")
{
  CHECK_THROWS_AS(phi(-0.1), std::domain_error);
  CHECK_THROWS_AS(phi(2.0), std::domain_error);
  CHECK_THROWS_AS(phi(std::nan("")), std::domain_error);
  CHECK_THROWS_AS(phi_asymptotic(1.0), std::domain_error);
}
