#include "sticky/coupling.hpp"

#include "sticky/errors.hpp"

#include <cmath>

namespace sticky {

CoupledState CoupledState::make(Eigen::VectorXd x, Eigen::VectorXd x_tilde)
{
  if (x.size() != x_tilde.size())
    throw ParameterError("coupled states must have equal dimension");
  CoupledState s;
  s.merged = (x.array() == x_tilde.array()).all();
  s.x = std::move(x);
  s.x_tilde = s.merged ? s.x : std::move(x_tilde);
  return s;
}

CouplingDirection coupling_direction(const FarModel& model, double gamma, const Eigen::VectorXd& x,
                                     const Eigen::VectorXd& x_tilde)
{
  model.check_gamma(gamma);
  CouplingDirection d;
  d.E = model.perturbed_map(gamma, x_tilde) - model.drift_map(gamma, x);
  d.norm_E = d.E.norm();
  if (d.norm_E > 0.0) {
    d.e = d.E / d.norm_E;
  } else {
    d.e = Eigen::VectorXd::Zero(x.size());
    d.e[0] = 1.0;
  }
  return d;
}

double merge_probability(double norm_E, double g, double sigma2_gamma)
{
  if (!(sigma2_gamma > 0.0))
    throw ParameterError("sigma^2 gamma must be positive");
  if (!(norm_E >= 0.0))
    throw ParameterError("norm_E must be non-negative");
  double a = norm_E;
  double expo = a * (2.0 * std::sqrt(sigma2_gamma) * g - a) / (2.0 * sigma2_gamma);
  return expo >= 0.0 ? 1.0 : std::exp(expo);
}

std::pair<CoupledState, CouplingStepRecord> coupling_step(const FarModel& model, double gamma,
                                                          const CoupledState& state, RandomStream& rng)
{
  model.check_gamma(gamma);
  const double v = model.sigma * model.sigma * gamma;
  const double sv = std::sqrt(v);

  CouplingStepRecord rec;
  rec.gaussian_z = rng.gaussian_vector(model.dim);
  rec.uniform_u = rng.uniform();

  CouplingDirection dir = coupling_direction(model, gamma, state.x, state.x_tilde);
  Eigen::VectorXd tx = model.drift_map(gamma, state.x);
  rec.norm_E = dir.norm_E;
  rec.scalar_g = dir.e.dot(rec.gaussian_z);

  CoupledState next;
  next.x = tx + sv * rec.gaussian_z;
  double p = merge_probability(dir.norm_E, rec.scalar_g, v);
  if (rec.uniform_u < p) {
    rec.accepted_merge = true;
    next.x_tilde = next.x;
    next.merged = true;
    rec.distance_after = 0.0;
  } else {
    Eigen::VectorXd reflected = rec.gaussian_z - 2.0 * rec.scalar_g * dir.e;
    next.x_tilde = model.perturbed_map(gamma, state.x_tilde) + sv * reflected;
    next.merged = (next.x.array() == next.x_tilde.array()).all();
    rec.distance_after = (next.x - next.x_tilde).norm();
  }
  return {std::move(next), std::move(rec)};
}

CoupledTrajectory coupled_trajectory(const FarModel& model, double gamma, const Eigen::VectorXd& x0,
                                     const Eigen::VectorXd& x0_tilde, long n_steps, RandomStream& rng)
{
  if (n_steps < 0)
    throw ParameterError("n_steps must be >= 0");
  CoupledTrajectory tr;
  tr.states.reserve(n_steps + 1);
  tr.records.reserve(n_steps);
  tr.states.push_back(CoupledState::make(x0, x0_tilde));
  for (long k = 0; k < n_steps; ++k) {
    auto [s, r] = coupling_step(model, gamma, tr.states.back(), rng);
    tr.states.push_back(std::move(s));
    tr.records.push_back(std::move(r));
  }
  return tr;
}

} // namespace sticky
