#pragma once

#include "sticky/coupling.hpp"
#include "sticky/model.hpp"
#include "sticky/rng.hpp"

#include <vector>

namespace sticky {

struct StickyParams
{
  double gamma = 0.1;
  double sigma = 1.0;
  double c_inf = 0.0;
  TauMajorant majorant;

  void validate() const;
  //! tau(w) + gamma c_inf
  double shifted_tau(double w) const;
};

//! W+ = 0 if u < pbar(tau(w) + gamma c_inf, g), else tau(w) + gamma c_inf - 2 sigma sqrt(gamma) g.
double sticky_step(const StickyParams& p, double w, double g, double u);

//! Exact one-step probability of landing on 0.
double mass_at_zero(const StickyParams& p, double w);
//! Exact conditional mean E[W_1 | W_0 = w].
double one_step_mean(const StickyParams& p, double w);
//! Exact E[exp(a W_1) - 1 | W_0 = w]; +inf when not representable.
double one_step_exp_moment(const StickyParams& p, double w, double a);

//! Draws (g, u) per step, in that order.
std::vector<double> sticky_trajectory(const StickyParams& p, double w0, long n_steps, RandomStream& rng);
//! Replays the (g, u) pairs of a coupled trajectory.
std::vector<double> sticky_trajectory(const StickyParams& p, double w0, const std::vector<CouplingStepRecord>& records);

struct StickyStationaryEstimate
{
  double atom_at_zero = 0.0;
  double first_moment = 0.0;
  std::vector<double> a_values;
  std::vector<double> exp_moment;
  long n_samples = 0;
  long burn_in = 0;
  double se_atom = 0.0;
  double se_first = 0.0;
  std::vector<double> se_exp;
};

//! Ergodic averages along one chain started at 0, batch-means standard errors.
StickyStationaryEstimate estimate_stationary(const StickyParams& p, long burn_in, long n_samples, RandomStream& rng,
                                             const std::vector<double>& a_values = {}, int n_batches = 100);

} // namespace sticky
