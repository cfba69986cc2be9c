#pragma once

#include "sticky/rng.hpp"
#include "sticky/sticky_chain.hpp"

#include <functional>
#include <vector>

namespace sticky {

//! Piecewise-linear path through nodes W_k placed at k gamma.
class InterpolatedPath
{
public:
  InterpolatedPath(std::vector<double> nodes, double gamma);
  double operator()(double t) const;
  double horizon() const { return gamma_ * (nodes_.size() - 1); }
  const std::vector<double>& nodes() const { return nodes_; }
  //! Node nearest to t (ties to the later node).
  double nearest_node(double t) const;

private:
  std::vector<double> nodes_;
  double gamma_;
};

double interpolate(const std::vector<double>& nodes, double gamma, double t);

struct LevelFunctionals
{
  double gamma = 0.0;
  std::vector<double> p_zero, p_zero_se;
  std::vector<double> mean, mean_se;
  std::vector<double> second, second_se;
  //! E[sup_{t <= T} W_t^4]
  double sup_fourth = 0.0;
  double sup_fourth_se = 0.0;
};

struct LimitFunctionals
{
  std::vector<double> times;
  std::vector<LevelFunctionals> levels;
};

struct RefinementSpec
{
  double sigma = 1.0;
  double c_inf = 0.2;
  std::function<double(double)> kappa;
  double lip_kappa = 0.5;
  double w0 = 1.0;
  std::vector<double> times;
  //! strictly decreasing, each level half the previous one
  std::vector<double> gamma_ladder;
  long n_paths = 10000;
};

//! Simulates n_paths sticky chains per level. Levels share Brownian increments:
//! the finest level draws one (g, u) pair per step and a coarser step of
//! 2^j fine steps uses g = sum g_fine / 2^{j/2} and the u of its first fine step.
LimitFunctionals refinement_study(const RefinementSpec& spec, const RandomStream& rng, int threads = 1);

} // namespace sticky
