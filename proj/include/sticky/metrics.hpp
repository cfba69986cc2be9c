#pragma once

#include <cstddef>
#include <vector>

namespace sticky {

//! Sorted, finite, equally weighted sample.
class Sample1D
{
public:
  explicit Sample1D(std::vector<double> values);

  const std::vector<double>& values() const { return v_; }
  std::size_t size() const { return v_.size(); }
  double mean() const;
  double stddev() const;

private:
  std::vector<double> v_;
};

//! Exact empirical W1; the larger sample is reduced to matching order statistics.
double w1_empirical_1d(const Sample1D& a, const Sample1D& b);

struct GridSpec
{
  std::size_t n_points = 4096;
  double pad_bandwidths = 4.0;
};

struct KdeEstimate
{
  std::vector<double> grid;
  std::vector<double> density;
  double bandwidth = 0.0;
  double integral() const;
};

//! 1.06 s n^{-1/5}
double silverman_bandwidth(const Sample1D& s);
//! Gaussian KDE evaluated on a uniform grid [lo, hi] with n points.
KdeEstimate kde_on_grid(const Sample1D& s, double lo, double hi, std::size_t n, double bandwidth);

//! Half the L1 distance between the two KDEs, trapezoid rule on a shared grid.
double tv_kde(const Sample1D& a, const Sample1D& b, GridSpec grid = {});

//! 2 Phi(gap / (2 std)) - 1
double gaussian_tv_same_var(double mean_gap, double std);

struct Ar1Stationary
{
  double mean = 0.0;
  double mean_perturbed = 0.0;
  double variance = 0.0;
};

//! Stationary laws of x+ = (1 - rho gamma) x (+ gamma rho a) + sigma sqrt(gamma) z.
Ar1Stationary ar1_stationary(double rho, double gamma, double sigma, double shift_a);

} // namespace sticky
