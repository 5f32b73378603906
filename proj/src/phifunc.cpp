#include "fppvar/phifunc.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace fppvar {

namespace {

struct Panel
{
  double a, b, fa, fm, fb, whole;
};

template <class F>
double simpson_recurse(const F& f, const Panel& p, double tol, int depth)
{
  const double m = 0.5 * (p.a + p.b);
  const double lm = 0.5 * (p.a + m);
  const double rm = 0.5 * (m + p.b);
  const double flm = f(lm);
  const double frm = f(rm);
  const double left = (m - p.a) / 6.0 * (p.fa + 4.0 * flm + p.fm);
  const double right = (p.b - m) / 6.0 * (p.fm + 4.0 * frm + p.fb);
  const double delta = left + right - p.whole;
  if (depth <= 0 || std::abs(delta) <= 15.0 * tol)
    return left + right + delta / 15.0;
  return simpson_recurse(f, {p.a, m, p.fa, flm, p.fm, left}, 0.5 * tol, depth - 1) +
         simpson_recurse(f, {m, p.b, p.fm, frm, p.fb, right}, 0.5 * tol, depth - 1);
}

template <class F>
double adaptive_simpson(const F& f, double a, double b, double tol)
{
  const double fa = f(a);
  const double fb = f(b);
  const double fm = f(0.5 * (a + b));
  const Panel whole{a, b, fa, fm, fb, (b - a) / 6.0 * (fa + 4.0 * fm + fb)};
  return simpson_recurse(f, whole, tol, 60);
}

} // namespace

double phi(double u)
{
  if (!(u >= 0.0 && u <= 1.0))
    throw std::domain_error("phi: argument must lie in [0,1]");
  if (u == 0.0)
    return 0.0;
  if (u == 1.0)
    return 1.0;

  const double log_u = std::log(u);
  auto integrand = [log_u](double t) {
    const double s = 1.0 + t;
    return 2.0 * std::exp(2.0 * t * log_u) / (s * s);
  };
  // The integrand is peaked at t = 0 with width ~ 1/|ln u|; seed the
  // recursion with that split so narrow peaks are never stepped over.
  const double knee = std::min(0.5, 1.0 / (2.0 * std::abs(log_u)));
  constexpr double tol = 1e-13;
  return adaptive_simpson(integrand, 0.0, knee, tol) + adaptive_simpson(integrand, knee, 1.0, tol);
}

double phi_asymptotic(double u)
{
  if (!(u > 0.0 && u < 1.0))
    throw std::domain_error("phi_asymptotic: argument must lie in (0,1)");
  return -1.0 / std::log(u);
}

} // namespace fppvar
