#include "sticky/metrics.hpp"

#include "sticky/errors.hpp"
#include "sticky/normal.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace sticky {

Sample1D::Sample1D(std::vector<double> values)
  : v_(std::move(values))
{
  for (double x : v_)
    if (!std::isfinite(x))
      throw ParameterError("sample contains non-finite values");
  std::sort(v_.begin(), v_.end());
}

double Sample1D::mean() const
{
  if (v_.empty())
    throw ParameterError("empty sample");
  double s = 0.0;
  for (double x : v_)
    s += x;
  return s / v_.size();
}

double Sample1D::stddev() const
{
  if (v_.size() < 2)
    throw ParameterError("need at least two values");
  double m = mean(), ss = 0.0;
  for (double x : v_)
    ss += (x - m) * (x - m);
  return std::sqrt(ss / (v_.size() - 1));
}

double w1_empirical_1d(const Sample1D& a, const Sample1D& b)
{
  if (a.size() == 0 || b.size() == 0)
    throw ParameterError("w1_empirical_1d: empty sample");
  const Sample1D& small = a.size() <= b.size() ? a : b;
  const Sample1D& large = a.size() <= b.size() ? b : a;
  const std::size_t n = small.size(), M = large.size();
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    std::size_t j = (n == M) ? i : static_cast<std::size_t>((i + 0.5) * M / n);
    s += std::abs(small.values()[i] - large.values()[j]);
  }
  return s / n;
}

double KdeEstimate::integral() const
{
  if (grid.size() < 2)
    return 0.0;
  double dx = grid[1] - grid[0], s = 0.0;
  for (std::size_t i = 0; i + 1 < density.size(); ++i)
    s += 0.5 * (density[i] + density[i + 1]) * dx;
  return s;
}

double silverman_bandwidth(const Sample1D& s)
{
  double sd = s.stddev();
  if (!(sd > 0.0))
    throw ParameterError("degenerate sample (zero variance)");
  return 1.06 * sd * std::pow(static_cast<double>(s.size()), -0.2);
}

KdeEstimate kde_on_grid(const Sample1D& s, double lo, double hi, std::size_t n, double h)
{
  if (n < 2 || !(hi > lo) || !(h > 0.0))
    throw ParameterError("kde_on_grid: invalid grid or bandwidth");
  KdeEstimate k;
  k.bandwidth = h;
  k.grid.resize(n);
  k.density.assign(n, 0.0);
  const double dx = (hi - lo) / (n - 1);
  for (std::size_t i = 0; i < n; ++i)
    k.grid[i] = lo + i * dx;
  // kernel truncated at 9 bandwidths; exp evaluated by the geometric recurrence
  // K(x_{j+1})/K(x_j) = exp(-(2(x_j - y) dx + dx^2) / (2h^2))
  const double cut = 9.0 * h;
  const double q = std::exp(-dx * dx / (h * h));
  const double inv2h2 = 1.0 / (2.0 * h * h);
  for (double y : s.values()) {
    long j0 = static_cast<long>(std::floor((y - lo) / dx));
    long jlo = std::max(0L, static_cast<long>(std::ceil((y - cut - lo) / dx)));
    long jhi = std::min(static_cast<long>(n) - 1, static_cast<long>(std::floor((y + cut - lo) / dx)));
    long js = std::clamp(j0, jlo, jhi);
    if (jlo > jhi)
      continue;
    double d = k.grid[js] - y;
    double val = std::exp(-d * d * inv2h2);
    double ratio = std::exp(-(2.0 * d * dx + dx * dx) * inv2h2);
    for (long j = js; j <= jhi; ++j) {
      k.density[j] += val;
      val *= ratio;
      ratio *= q;
    }
    val = std::exp(-d * d * inv2h2);
    ratio = std::exp((2.0 * d * dx - dx * dx) * inv2h2);
    for (long j = js - 1; j >= jlo; --j) {
      val *= ratio;
      ratio *= q;
      k.density[j] += val;
    }
  }
  const double norm = 1.0 / (s.size() * h * std::sqrt(2.0 * std::numbers::pi));
  for (double& d : k.density)
    d *= norm;
  return k;
}

double tv_kde(const Sample1D& a, const Sample1D& b, GridSpec grid)
{
  if (a.size() < 100 || b.size() < 100)
    throw ParameterError("tv_kde needs at least 100 samples each");
  double ha = silverman_bandwidth(a), hb = silverman_bandwidth(b);
  double pad = grid.pad_bandwidths * std::max(ha, hb);
  double lo = std::min(a.values().front(), b.values().front()) - pad;
  double hi = std::max(a.values().back(), b.values().back()) + pad;
  KdeEstimate fa = kde_on_grid(a, lo, hi, grid.n_points, ha);
  KdeEstimate fb = kde_on_grid(b, lo, hi, grid.n_points, hb);
  const double dx = fa.grid[1] - fa.grid[0];
  double s = 0.0;
  for (std::size_t i = 0; i + 1 < grid.n_points; ++i)
    s += 0.5 * (std::abs(fa.density[i] - fb.density[i]) + std::abs(fa.density[i + 1] - fb.density[i + 1])) * dx;
  return std::clamp(0.5 * s, 0.0, 1.0);
}

double gaussian_tv_same_var(double mean_gap, double std)
{
  if (!(std > 0.0))
    throw ParameterError("std must be positive");
  return std::erf(std::abs(mean_gap) / (2.0 * std) / std::numbers::sqrt2);
}

Ar1Stationary ar1_stationary(double rho, double gamma, double sigma, double shift_a)
{
  if (!(rho > 0.0) || !(gamma > 0.0) || !(sigma > 0.0))
    throw ParameterError("rho, gamma, sigma must be positive");
  if (gamma * rho >= 1.0)
    throw ParameterError("gamma rho must be < 1");
  return {0.0, shift_a, sigma * sigma / (rho * (2.0 - gamma * rho))};
}

} // namespace sticky
