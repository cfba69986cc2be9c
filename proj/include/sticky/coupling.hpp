#pragma once

#include "sticky/model.hpp"
#include "sticky/rng.hpp"

#include <Eigen/Core>
#include <utility>
#include <vector>

namespace sticky {

struct CoupledState
{
  Eigen::VectorXd x;
  Eigen::VectorXd x_tilde;
  //! true iff x and x_tilde are bitwise equal
  bool merged = false;

  static CoupledState make(Eigen::VectorXd x, Eigen::VectorXd x_tilde);
  double distance() const { return merged ? 0.0 : (x - x_tilde).norm(); }
};

struct CouplingStepRecord
{
  Eigen::VectorXd gaussian_z;
  double uniform_u = 0.0;
  //! <e, z>, the scalar noise seen by the dominating chain
  double scalar_g = 0.0;
  bool accepted_merge = false;
  double distance_after = 0.0;
  double norm_E = 0.0;
};

struct CouplingDirection
{
  Eigen::VectorXd E;
  Eigen::VectorXd e;
  double norm_E = 0.0;
};

//! E = T~(x~) - T(x) and its direction; e0 = first basis vector when E = 0.
CouplingDirection coupling_direction(const FarModel& model, double gamma, const Eigen::VectorXd& x,
                                     const Eigen::VectorXd& x_tilde);

//! min(1, exp(a (2 sqrt(v) g - a) / (2 v))) with a = |E| and v = sigma^2 gamma.
double merge_probability(double norm_E, double g, double sigma2_gamma);

//! One step of the sticky reflection coupling. Draws z (d Gaussians) then u.
std::pair<CoupledState, CouplingStepRecord> coupling_step(const FarModel& model, double gamma,
                                                          const CoupledState& state, RandomStream& rng);

struct CoupledTrajectory
{
  std::vector<CoupledState> states;
  std::vector<CouplingStepRecord> records;
};

CoupledTrajectory coupled_trajectory(const FarModel& model, double gamma, const Eigen::VectorXd& x0,
                                     const Eigen::VectorXd& x0_tilde, long n_steps, RandomStream& rng);

} // namespace sticky
