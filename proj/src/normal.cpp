#include "sticky/normal.hpp"

#include <boost/math/tools/minima.hpp>
#include <cmath>
#include <numbers>
#include <utility>

namespace sticky {

double normal_cdf(double x)
{
  return 0.5 * std::erfc(-x / std::numbers::sqrt2);
}

double normal_pdf(double x)
{
  return std::exp(-0.5 * x * x) / std::sqrt(2.0 * std::numbers::pi);
}

namespace {

std::pair<double, double> maximize_t2_tail()
{
  auto neg = [](double t) { return -t * t * normal_cdf(-t); };
  // coarse grid to bracket, then Brent
  double best_t = 0.0, best = 0.0;
  for (int i = 0; i <= 800; ++i) {
    double t = i * 0.01;
    if (neg(t) < best) {
      best = neg(t);
      best_t = t;
    }
  }
  auto r = boost::math::tools::brent_find_minima(neg, best_t - 0.01, best_t + 0.01, 52);
  return {r.first, -r.second};
}

const std::pair<double, double>& t2_tail_cache()
{
  static const std::pair<double, double> v = maximize_t2_tail();
  return v;
}

} // namespace

double sup_t2_normal_tail()
{
  return t2_tail_cache().second;
}

double argsup_t2_normal_tail()
{
  return t2_tail_cache().first;
}

} // namespace sticky

namespace sticky {

double log_normal_cdf(double x)
{
  if (x > -30.0)
    return std::log(normal_cdf(x));
  // Mills-ratio expansion for the far lower tail
  double t = -x;
  double t2 = t * t;
  return -0.5 * t2 - std::log(t) - 0.5 * std::log(2.0 * std::numbers::pi)
         + std::log1p(-1.0 / t2 + 3.0 / (t2 * t2) - 15.0 / (t2 * t2 * t2));
}

} // namespace sticky
