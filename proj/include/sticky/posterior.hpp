#pragma once

#include "sticky/model.hpp"
#include "sticky/ode.hpp"

#include <Eigen/Core>
#include <cstdint>
#include <functional>
#include <memory>
#include <string>
#include <vector>

namespace sticky {

struct LogDensity
{
  std::function<double(const Eigen::VectorXd&)> value;
  std::function<Eigen::VectorXd(const Eigen::VectorXd&)> grad;

  //! Independent N(mean_i, sd_i^2) coordinates.
  static LogDensity gaussian(Eigen::VectorXd mean, Eigen::VectorXd sd);
};

enum class ObservationMap { identity, log_state };

//! U(theta) = -ln pi0(theta) - sum_i ln phi(y_i - g(x_theta(t_i))). With the
//! log_state map the stored observations are already log-transformed.
struct PosteriorProblem
{
  std::shared_ptr<const OdeModel> model;
  std::vector<double> obs_times;
  std::vector<Eigen::VectorXd> observations;
  LogDensity noise;
  LogDensity prior;
  ObservationMap obs_map = ObservationMap::identity;
  //! observed state components; empty means all of them
  std::vector<int> observed;
  Eigen::VectorXd theta_true;

  void validate() const;
  std::vector<int> observed_components() const;
};

//! Evaluates U and grad U for one solver; owns scratch buffers (one per thread).
class PotentialEvaluator
{
public:
  PotentialEvaluator(const PosteriorProblem& problem, SolverChoice solver);
  double potential(const Eigen::VectorXd& theta);
  Eigen::VectorXd gradient(const Eigen::VectorXd& theta);
  //! x(t_i) for the chosen solver, one row per observation.
  Eigen::MatrixXd states(const Eigen::VectorXd& theta);

private:
  const PosteriorProblem& problem_;
  AugmentedObserver observer_;
  std::vector<double> buf_;
};

//! grad U(theta) (the negative log-posterior gradient) with the chosen solver.
Eigen::VectorXd grad_log_posterior(const PosteriorProblem& problem, const Eigen::VectorXd& theta, SolverChoice solver);
double potential(const PosteriorProblem& problem, const Eigen::VectorXd& theta, SolverChoice solver);

struct UlaConfig
{
  double gamma = 1e-2;
  long n_iter = 1000;
  long burn_in = 0;
  std::uint64_t seed = 1;
  std::uint64_t stream = 0;
  SolverChoice source = SolverChoice::reference(1e-4);
  Eigen::VectorXd theta0;
  long thin = 1;
  double divergence_radius = 1e8;

  void validate() const;
};

//! theta+ = theta - gamma grad U(theta) + sqrt(2 gamma) Z; rows are post-burn-in samples.
Eigen::MatrixXd ula_sample(const PosteriorProblem& problem, const UlaConfig& config);

//! Generic ULA on an arbitrary gradient (used for the Gaussian-target checks).
Eigen::MatrixXd ula_sample(const std::function<Eigen::VectorXd(const Eigen::VectorXd&)>& grad_U,
                           const UlaConfig& config);

struct SynthSpec
{
  std::string model = "van_der_pol";
  Eigen::VectorXd theta_true;
  double T = 10.0;
  int n_obs = 25;
  //! variance of the additive noise, or sd of the log-normal noise
  double noise = 0.5;
  std::uint64_t seed = 1;
  double h_data = 1e-3;

  static SynthSpec van_der_pol_defaults();
  static SynthSpec lotka_volterra_defaults();
};

//! RK4 data generation at evenly spaced times t_i = i T / N, i = 1..N.
PosteriorProblem synth_data(const SynthSpec& spec);

//! Euler-of-gradient FAR pair: exact map from solver_exact, perturbed from solver_approx; sigma^2 = 2.
FarModel far_model_from_posterior(std::shared_ptr<const PosteriorProblem> problem, SolverChoice exact,
                                  SolverChoice approx, double gamma_max);

} // namespace sticky
