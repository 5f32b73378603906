#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>
#include <vector>

#include "fppvar/edgedist.hpp"
#include "fppvar/gausskit.hpp"

using namespace fppvar;

namespace {

const std::vector<std::string> kBuiltins{
    "exp:rate=1",   "exp:rate=2.5",        "gamma:shape=2",      "gamma:shape=0.5,rate=3",
    "beta:a=2,b=3", "beta:a=0.5,b=0.5",    "uniform:lo=0,hi=1",  "uniform:lo=0.5,hi=2",
    "chi2:k=2,alpha=0.5", "chi2:k=5,alpha=1", "halfnormal",       "halfnormal:scale=2"};

} // namespace

TEST_CASE("spec parsing")
{
  CHECK(EdgeDistribution::parse("exp:rate=1").spec() == "exp:rate=1");
  CHECK(EdgeDistribution::parse("exp").spec() == "exp:rate=1");
  CHECK(EdgeDistribution::parse("gamma:shape=2").spec() == "gamma:shape=2,rate=1");
  CHECK(EdgeDistribution::parse("halfnormal").spec() == "halfnormal");
  CHECK(EdgeDistribution::parse("chi2:k=2,alpha=0.5").family() == Family::chi2);
  CHECK(EdgeDistribution::parse("beta:a=2,b=3").upper() == 1.0);
  CHECK_THROWS_AS(EdgeDistribution::parse("lognormal:mu=0"), std::invalid_argument);
  CHECK_THROWS_AS(EdgeDistribution::parse("exp:rate=-1"), std::invalid_argument);
  CHECK_THROWS_AS(EdgeDistribution::parse("exp:lambda=1"), std::invalid_argument);
  CHECK_THROWS_AS(EdgeDistribution::parse("beta:a=2"), std::invalid_argument);
  CHECK_THROWS_AS(EdgeDistribution::parse("gamma:shape=abc"), std::invalid_argument);
  CHECK_THROWS_AS(EdgeDistribution::parse("chi2:k=2.5,alpha=1"), std::invalid_argument);
  CHECK_THROWS_AS(EdgeDistribution::parse("point:at=1"), DegenerateDistribution);
  CHECK_THROWS_AS(EdgeDistribution::parse("uniform:lo=1,hi=1"), DegenerateDistribution);
}

TEST_CASE("the chi-square law is the matching gamma law")
{
  const auto c = EdgeDistribution::chi2(3, 0.7);
  const auto g = EdgeDistribution::gamma(1.5, 0.7);
  for (double y : {0.01, 0.5, 2.0, 9.0}) {
    CHECK(c.cdf(y) == g.cdf(y));
    CHECK(c.density(y) == g.density(y));
  }
}

TEST_CASE("density positive exactly on the open support")
{
  for (const auto& s : kBuiltins) {
    const auto d = EdgeDistribution::parse(s);
    CAPTURE(s);
    CHECK(d.density(d.lower()) == 0.0);
    CHECK(d.density(d.lower() - 0.1) == 0.0);
    if (d.bounded())
      CHECK(d.density(d.upper()) == 0.0);
    for (double p : {1e-9, 0.01, 0.3, 0.5, 0.9, 1.0 - 1e-9}) {
      const double q = d.quantile(p);
      CHECK(q >= d.lower());
      CHECK(q <= d.upper());
      // Beta(1/2,1/2) at 1 - 1e-9 has its quantile within 3e-18 of 1, which rounds to the endpoint.
      if (q > d.lower() && q < d.upper())
        CHECK(d.density(q) > 0.0);
    }
  }
}

TEST_CASE("cdf inverts the quantile on a logit grid")
{
  for (const auto& s : kBuiltins) {
    const auto d = EdgeDistribution::parse(s);
    double worst = 0.0;
    for (int k = 0; k <= 400; ++k) {
      const double u = -std::log(1e12) + 2.0 * std::log(1e12) * k / 400.0;
      const double p = 1.0 / (1.0 + std::exp(-u));
      // Allow the cdf change across one ulp of the quantile: with a density
      // pole at an endpoint that change is far above 1e-10.
      const double x = d.quantile(p), c = d.cdf(x);
      const double ulp = std::max(std::abs(d.cdf(std::nextafter(x, INFINITY)) - c),
                                  std::abs(c - d.cdf(std::nextafter(x, -INFINITY))));
      worst = std::max(worst, std::abs(c - p) - ulp);
    }
    CAPTURE(s);
    CHECK(worst <= 1e-10);
  }
}

TEST_CASE("tails are computed without cancellation")
{
  const auto e = EdgeDistribution::exponential();
  CHECK(e.sf(50.0) == doctest::Approx(std::exp(-50.0)).epsilon(1e-14));
  CHECK(e.log_sf(800.0) == -800.0);
  const auto g = EdgeDistribution::gamma(2.0);
  // log Q(2, x) = log(1 + x) - x.
  CHECK(g.log_sf(900.0) == doctest::Approx(std::log(901.0) - 900.0).epsilon(1e-12));
  const auto h = EdgeDistribution::halfnormal();
  CHECK(std::isfinite(h.log_sf(60.0)));
  CHECK(h.log_sf(60.0) == doctest::Approx(std::log(2.0) + fppvar::gauss::log_cdf(-60.0)));
}

TEST_CASE("moments")
{
  CHECK(EdgeDistribution::exponential(2.0).mean() == 0.5);
  CHECK(EdgeDistribution::gamma(2.0).variance() == 2.0);
  CHECK(EdgeDistribution::beta(2.0, 3.0).variance() == doctest::Approx(0.04));
  CHECK(EdgeDistribution::uniform(0.0, 1.0).second_moment() == doctest::Approx(1.0 / 3.0));
  CHECK(EdgeDistribution::halfnormal().mean() == doctest::Approx(std::sqrt(2.0 / std::numbers::pi)));
}

TEST_CASE("psi reference values")
{
  CHECK(psi(EdgeDistribution::uniform(0.0, 1.0), 0.5) ==
        doctest::Approx(fppvar::gauss::kInvSqrt2Pi).epsilon(1e-15));

  const auto e = EdgeDistribution::exponential();
  const double v = psi(e, 30.0);
  CHECK(v == doctest::Approx(7.488967866174847).epsilon(1e-10));
  const double r = v / std::sqrt(2.0 * 30.0);
  CHECK(r >= 0.9);
  CHECK(r <= 1.1);

  // Direct composition in log space; tends to 1 because 1 - H = 2(1 - G).
  CHECK(psi(EdgeDistribution::halfnormal(), 10.0) == doctest::Approx(0.99324434477693).epsilon(1e-10));
}

TEST_CASE("psi over sqrt(2y) approaches 1 for the exponential law")
{
  const auto e = EdgeDistribution::exponential();
  double previous = 0.0;
  for (double y : {10.0, 20.0, 40.0}) {
    const double r = psi(e, y) / std::sqrt(2.0 * y);
    CHECK(r > previous - 0.05);
    CHECK(std::abs(1.0 - r) < std::abs(1.0 - previous) + 0.05);
    previous = r;
  }
  CHECK(std::abs(1.0 - previous) < 0.05);
}

TEST_CASE("psi is positive and finite across the support")
{
  for (const auto& s : kBuiltins) {
    const auto d = EdgeDistribution::parse(s);
    for (int k = 0; k <= 200; ++k) {
      const double u = -27.0 + 54.0 * k / 200.0;
      const double y = d.quantile(1.0 / (1.0 + std::exp(-u)));
      if (!d.in_open_support(y))
        continue;
      const double v = psi(d, y);
      CAPTURE(s);
      CAPTURE(y);
      CHECK(v > 0.0);
      CHECK(std::isfinite(v));
    }
  }
  CHECK_THROWS_AS(psi(EdgeDistribution::exponential(), 0.0), std::domain_error);
  CHECK_THROWS_AS(psi(EdgeDistribution::uniform(0.0, 1.0), 1.0), std::domain_error);
  CHECK_THROWS_AS(psi(EdgeDistribution::exponential(), -1.0), std::domain_error);
}

TEST_CASE("inverse-cdf sampling")
{
  const auto e = EdgeDistribution::exponential();
  CHECK(sample(e, 77, 3) == sample(e, 77, 3));
  CHECK(sample(e, 77, 3) != sample(e, 78, 3));
  // A prefix of a longer draw equals the shorter draw.
  const auto a = sample(e, 5, 10), b = sample(e, 5, 4);
  CHECK(std::equal(b.begin(), b.end(), a.begin()));

  for (const auto& s : kBuiltins) {
    const auto d = EdgeDistribution::parse(s);
    CAPTURE(s);
    CHECK(ks_statistic(d, sample(d, 2024, 10000)) <= 0.02);
  }

  const auto g = EdgeDistribution::gamma(2.0);
  const auto x = sample(g, 99, 10000);
  double m = 0.0;
  for (double v : x)
    m += v;
  m /= x.size();
  CHECK(std::abs(m - 2.0) <= 3.0 * std::sqrt(2.0 / 10000.0));
}

TEST_CASE("sufficient conditions")
{
  for (const char* s : {"exp:rate=1", "gamma:shape=2", "beta:a=2,b=3", "uniform:lo=0,hi=1",
                        "chi2:k=2,alpha=0.5", "gamma:shape=0.5", "beta:a=0.5,b=0.5"}) {
    const auto r = check_near_gamma_sufficient(EdgeDistribution::parse(s));
    CAPTURE(s);
    CHECK(r.sufficient_checked);
    CHECK(r.sufficient_alpha_ok);
    CHECK(r.sufficient_beta_or_tail_ok);
    CHECK(r.verdict == NearGammaVerdict::sufficient_conditions_pass);
  }
  const auto exp_report = check_near_gamma_sufficient(EdgeDistribution::exponential());
  CHECK(exp_report.right_band_lo == doctest::Approx(1.0));
  CHECK(exp_report.right_band_hi == doctest::Approx(1.0));

  const auto h = check_near_gamma_sufficient(EdgeDistribution::halfnormal());
  CHECK(h.sufficient_alpha_ok);
  CHECK_FALSE(h.sufficient_beta_or_tail_ok);
  CHECK(h.right_band_lo < 0.2);
  CHECK(h.verdict == NearGammaVerdict::fail);

  const auto n = check_near_gamma_sufficient(EdgeDistribution::exponential().without_exponents());
  CHECK_FALSE(n.sufficient_checked);
  CHECK(n.verdict == NearGammaVerdict::not_checkable);
  CHECK(to_string(n.verdict) == "not-checkable-by-sufficient-conditions");
}

TEST_CASE("direct evidence")
{
  const auto u = check_near_gamma_direct(EdgeDistribution::uniform(0.0, 1.0), 1000);
  CHECK(u.direct_pass);
  // Exact small-ball masses 2 y_a with g(G^{-1}(y_a)) = a, fitted the same way.
  CHECK(u.direct_epsilon_hat == doctest::Approx(1.098398612401571).epsilon(0.01));
  // sup psi(y)/sqrt(y) for the uniform law, attained inside (0,1).
  CHECK(u.direct_A_hat == doctest::Approx(u.direct_A_hat_refined).epsilon(1e-3));

  CHECK(check_near_gamma_direct(EdgeDistribution::exponential(), 1000).direct_pass);
  const auto h = check_near_gamma_direct(EdgeDistribution::halfnormal(), 1000);
  CHECK(h.direct_pass);
  CHECK(h.verdict == NearGammaVerdict::direct_evidence_only);
  CHECK_THROWS_AS(check_near_gamma_direct(EdgeDistribution::exponential(), 99), std::invalid_argument);
}

TEST_CASE("classification merges both checks")
{
  for (const auto& s : kBuiltins) {
    const auto r = classify_near_gamma(EdgeDistribution::parse(s));
    CAPTURE(s);
    if (r.verdict == NearGammaVerdict::sufficient_conditions_pass)
      CHECK(r.direct_pass);
    CHECK(r.verdict != NearGammaVerdict::fail);
  }
  CHECK(classify_near_gamma(EdgeDistribution::halfnormal()).verdict ==
        NearGammaVerdict::direct_evidence_only);
}
