#include "sticky/posterior.hpp"

#include "sticky/errors.hpp"
#include "sticky/rng.hpp"

#include <cmath>
#include <numbers>

namespace sticky {

LogDensity LogDensity::gaussian(Eigen::VectorXd mean, Eigen::VectorXd sd)
{
  if (mean.size() != sd.size() || (sd.array() <= 0.0).any())
    throw ParameterError("gaussian density needs matching sizes and positive sd");
  LogDensity d;
  Eigen::VectorXd inv_var = sd.array().square().inverse();
  double log_norm = -(sd.array().log().sum()) - 0.5 * sd.size() * std::log(2.0 * std::numbers::pi);
  d.value = [mean, inv_var, log_norm](const Eigen::VectorXd& x) {
    return log_norm - 0.5 * ((x - mean).array().square() * inv_var.array()).sum();
  };
  d.grad = [mean, inv_var](const Eigen::VectorXd& x) -> Eigen::VectorXd {
    return -((x - mean).array() * inv_var.array()).matrix();
  };
  return d;
}

void PosteriorProblem::validate() const
{
  if (!model)
    throw ParameterError("posterior problem has no model");
  if (obs_times.size() != observations.size())
    throw ParameterError("obs_times and observations differ in length");
  for (std::size_t i = 0; i < obs_times.size(); ++i) {
    if (!(obs_times[i] >= 0.0) || (i > 0 && !(obs_times[i] > obs_times[i - 1])))
      throw ParameterError("obs_times must be non-negative and strictly increasing");
    if (observations[i].size() != static_cast<Eigen::Index>(observed_components().size()))
      throw ParameterError("observation has wrong dimension");
  }
  for (int j : observed)
    if (j < 0 || j >= model->state_dim())
      throw ParameterError("observed component out of range");
  if (!prior.value || !prior.grad)
    throw ParameterError("prior density missing");
  if (!observations.empty() && (!noise.value || !noise.grad))
    throw ParameterError("noise density missing");
}

std::vector<int> PosteriorProblem::observed_components() const
{
  if (!observed.empty())
    return observed;
  std::vector<int> all(model->state_dim());
  for (int j = 0; j < model->state_dim(); ++j)
    all[j] = j;
  return all;
}

PotentialEvaluator::PotentialEvaluator(const PosteriorProblem& problem, SolverChoice solver)
  : problem_(problem)
  , observer_(*problem.model, solver)
{
  problem.validate();
}

Eigen::MatrixXd PotentialEvaluator::states(const Eigen::VectorXd& theta)
{
  const int n = problem_.model->state_dim();
  const std::size_t D = problem_.model->augmented_dim();
  observer_.observe(theta, problem_.obs_times, buf_);
  Eigen::MatrixXd X(problem_.obs_times.size(), n);
  for (std::size_t i = 0; i < problem_.obs_times.size(); ++i)
    for (int j = 0; j < n; ++j)
      X(i, j) = buf_[i * D + j];
  return X;
}

namespace {

Eigen::VectorXd residual(const PosteriorProblem& p, const std::vector<int>& idx, const double* x, std::size_t i)
{
  Eigen::VectorXd r(idx.size());
  for (std::size_t j = 0; j < idx.size(); ++j) {
    double v = x[idx[j]];
    r[j] = p.observations[i][j] - (p.obs_map == ObservationMap::log_state ? std::log(v) : v);
  }
  return r;
}

} // namespace

double PotentialEvaluator::potential(const Eigen::VectorXd& theta)
{
  const auto& p = problem_;
  double U = -p.prior.value(theta);
  if (p.obs_times.empty())
    return U;
  const std::vector<int> idx = p.observed_components();
  const std::size_t D = p.model->augmented_dim();
  observer_.observe(theta, p.obs_times, buf_);
  for (std::size_t i = 0; i < p.obs_times.size(); ++i)
    U -= p.noise.value(residual(p, idx, buf_.data() + i * D, i));
  return U;
}

Eigen::VectorXd PotentialEvaluator::gradient(const Eigen::VectorXd& theta)
{
  const auto& p = problem_;
  Eigen::VectorXd g = -p.prior.grad(theta);
  if (p.obs_times.empty())
    return g;
  const int n = p.model->state_dim(), d = p.model->param_dim();
  const std::vector<int> idx = p.observed_components();
  const std::size_t D = p.model->augmented_dim();
  observer_.observe(theta, p.obs_times, buf_);
  for (std::size_t i = 0; i < p.obs_times.size(); ++i) {
    const double* z = buf_.data() + i * D;
    Eigen::VectorXd s = p.noise.grad(residual(p, idx, z, i));
    if (p.obs_map == ObservationMap::log_state)
      for (std::size_t j = 0; j < idx.size(); ++j)
        s[j] /= z[idx[j]];
    // d/dtheta [-ln phi(y - g(x))] = A diag(g'(x)) (grad ln phi)(r)
    const double* A = z + n;
    for (int k = 0; k < d; ++k) {
      double acc = 0.0;
      for (std::size_t j = 0; j < idx.size(); ++j)
        acc += A[k * n + idx[j]] * s[j];
      g[k] += acc;
    }
  }
  return g;
}

Eigen::VectorXd grad_log_posterior(const PosteriorProblem& problem, const Eigen::VectorXd& theta, SolverChoice solver)
{
  PotentialEvaluator ev(problem, solver);
  return ev.gradient(theta);
}

double potential(const PosteriorProblem& problem, const Eigen::VectorXd& theta, SolverChoice solver)
{
  PotentialEvaluator ev(problem, solver);
  return ev.potential(theta);
}

void UlaConfig::validate() const
{
  if (!(gamma > 0.0))
    throw ParameterError("ULA gamma must be positive");
  if (n_iter < 1 || burn_in < 0 || burn_in >= n_iter)
    throw ParameterError("ULA needs 0 <= burn_in < n_iter");
  if (thin < 1)
    throw ParameterError("thin must be >= 1");
  if (theta0.size() == 0)
    throw ParameterError("ULA needs an initial theta");
}

Eigen::MatrixXd ula_sample(const std::function<Eigen::VectorXd(const Eigen::VectorXd&)>& grad_U,
                           const UlaConfig& cfg)
{
  cfg.validate();
  const Eigen::Index d = cfg.theta0.size();
  RandomStream rng(cfg.seed, cfg.stream);
  const double s = std::sqrt(2.0 * cfg.gamma);
  Eigen::VectorXd th = cfg.theta0, z(d);
  const long kept = (cfg.n_iter - cfg.burn_in + cfg.thin - 1) / cfg.thin;
  Eigen::MatrixXd out(kept, d);
  long row = 0;
  for (long it = 0; it < cfg.n_iter; ++it) {
    Eigen::VectorXd g = grad_U(th);
    rng.gaussian(z);
    th += -cfg.gamma * g + s * z;
    if (!th.allFinite() || th.norm() > cfg.divergence_radius)
      throw DivergenceError("ULA iterate left the ball of radius " + std::to_string(cfg.divergence_radius), it + 1);
    if (it >= cfg.burn_in && (it - cfg.burn_in) % cfg.thin == 0)
      out.row(row++) = th.transpose();
  }
  return out;
}

Eigen::MatrixXd ula_sample(const PosteriorProblem& problem, const UlaConfig& cfg)
{
  PotentialEvaluator ev(problem, cfg.source);
  if (cfg.theta0.size() != problem.model->param_dim())
    throw ParameterError("theta0 has wrong dimension");
  return ula_sample([&ev](const Eigen::VectorXd& th) { return ev.gradient(th); }, cfg);
}

SynthSpec SynthSpec::van_der_pol_defaults()
{
  SynthSpec s;
  s.model = "van_der_pol";
  s.theta_true = Eigen::VectorXd::Constant(1, 1.0);
  s.T = 10.0;
  s.n_obs = 25;
  s.noise = 0.5;
  return s;
}

SynthSpec SynthSpec::lotka_volterra_defaults()
{
  SynthSpec s;
  s.model = "lotka_volterra";
  s.theta_true = (Eigen::VectorXd(4) << 0.6, 0.025, 0.8, 0.025).finished();
  s.T = 10.0;
  s.n_obs = 50;
  s.noise = 1.0;
  return s;
}

PosteriorProblem synth_data(const SynthSpec& spec)
{
  if (spec.n_obs < 1 || !(spec.T > 0.0) || !(spec.noise > 0.0))
    throw ParameterError("synth_data: n_obs >= 1, T > 0, noise > 0 required");
  PosteriorProblem p;
  p.model = builtin_model(spec.model);
  const int n = p.model->state_dim(), d = p.model->param_dim();
  if (spec.theta_true.size() != d)
    throw ParameterError("theta_true has wrong dimension");
  p.theta_true = spec.theta_true;
  for (int i = 1; i <= spec.n_obs; ++i)
    p.obs_times.push_back(spec.T * i / spec.n_obs);
  AugmentedObserver obs(*p.model, SolverChoice::reference(spec.h_data));
  std::vector<double> buf;
  obs.observe(spec.theta_true, p.obs_times, buf);
  const std::size_t D = p.model->augmented_dim();
  RandomStream rng(spec.seed, 0xDA7A);
  if (spec.model == "lotka_volterra") {
    p.obs_map = ObservationMap::log_state;
    for (int i = 0; i < spec.n_obs; ++i) {
      Eigen::VectorXd y(n);
      for (int j = 0; j < n; ++j)
        y[j] = std::log(buf[i * D + j]) + spec.noise * rng.gaussian();
      p.observations.push_back(y);
    }
    p.noise = LogDensity::gaussian(Eigen::VectorXd::Zero(n), Eigen::VectorXd::Constant(n, spec.noise));
    p.prior = LogDensity::gaussian((Eigen::VectorXd(4) << 1.0, 0.05, 1.0, 0.05).finished(),
                                   (Eigen::VectorXd(4) << 0.5, 0.05, 0.5, 0.05).finished());
  } else {
    // the position only for the second-order oscillator
    if (spec.model == "van_der_pol")
      p.observed = {0};
    const std::vector<int> idx = p.observed_components();
    const int k = static_cast<int>(idx.size());
    const double sd = std::sqrt(spec.noise);
    for (int i = 0; i < spec.n_obs; ++i) {
      Eigen::VectorXd y(k);
      for (int j = 0; j < k; ++j)
        y[j] = buf[i * D + idx[j]] + sd * rng.gaussian();
      p.observations.push_back(y);
    }
    p.noise = LogDensity::gaussian(Eigen::VectorXd::Zero(k), Eigen::VectorXd::Constant(k, sd));
    p.prior = LogDensity::gaussian(Eigen::VectorXd::Zero(d), Eigen::VectorXd::Constant(d, std::sqrt(0.5)));
  }
  p.validate();
  return p;
}

FarModel far_model_from_posterior(std::shared_ptr<const PosteriorProblem> problem, SolverChoice exact,
                                  SolverChoice approx, double gamma_max)
{
  const int d = problem->model->param_dim();
  auto ev_exact = std::make_shared<PotentialEvaluator>(*problem, exact);
  auto ev_approx = std::make_shared<PotentialEvaluator>(*problem, approx);
  FarModel m;
  m.dim = d;
  m.sigma = std::sqrt(2.0);
  m.gamma_max = gamma_max;
  m.drift_map = [problem, ev_exact](double g, const Eigen::VectorXd& x) -> Eigen::VectorXd {
    return x - g * ev_exact->gradient(x);
  };
  m.perturbed_map = [problem, ev_approx](double g, const Eigen::VectorXd& x) -> Eigen::VectorXd {
    return x - g * ev_approx->gradient(x);
  };
  m.family = "ode-posterior";
  m.validate();
  return m;
}

} // namespace sticky
