#include "sticky/model.hpp"

#include "sticky/errors.hpp"

#include <cmath>

namespace sticky {

void AssumptionConstants::validate() const
{
  if (!(contraction_m > 0.0) || !std::isfinite(contraction_m))
    throw ParameterError("contraction_m must be positive");
  if (!(lip_L >= 0.0) || !(radius_R1 >= 0.0) || !(c_inf >= 0.0))
    throw ParameterError("lip_L, radius_R1 and c_inf must be non-negative");
  if (!std::isfinite(lip_L) || !std::isfinite(radius_R1) || !std::isfinite(c_inf))
    throw ParameterError("assumption constants must be finite");
}

TauMajorant::TauMajorant(double lip_L, double contraction_m, double radius_R1, double gamma_max)
  : L_(lip_L)
  , m_(contraction_m)
  , R1_(radius_R1)
  , gamma_max_(gamma_max)
{
  AssumptionConstants{lip_L, contraction_m, radius_R1, 0.0}.validate();
  if (!(gamma_max > 0.0))
    throw ParameterError("gamma_max must be positive");
}

TauMajorant::TauMajorant(const AssumptionConstants& c, double gamma_max)
  : TauMajorant(c.lip_L, c.contraction_m, c.radius_R1, gamma_max)
{}

TauMajorant TauMajorant::from_kappa(std::function<double(double)> kappa, double lip_kappa, double gamma_max)
{
  if (!kappa)
    throw ParameterError("kappa must be callable");
  if (kappa(0.0) != 0.0)
    throw ParameterError("kappa(0) must be 0");
  if (!(lip_kappa >= 0.0))
    throw ParameterError("lip_kappa must be non-negative");
  if (gamma_max * lip_kappa > 1.0)
    throw ParameterError("w + gamma*kappa(w) is not monotone for gamma*lip_kappa > 1");
  TauMajorant t;
  t.L_ = lip_kappa;
  t.m_ = 1.0;
  t.R1_ = 0.0;
  t.gamma_max_ = gamma_max;
  t.kappa_ = std::move(kappa);
  t.lip_kappa_ = lip_kappa;
  return t;
}

double TauMajorant::operator()(double gamma, double r) const
{
  if (!(gamma > 0.0) || gamma > gamma_max_)
    throw ParameterError("gamma outside (0, gamma_max]");
  if (!(r >= 0.0))
    throw ParameterError("tau argument must be non-negative");
  if (kappa_)
    return std::max(0.0, r + gamma * kappa_(r));
  if (r <= R1_)
    return (1.0 + L_ * gamma) * r;
  return (1.0 + L_ * gamma) * R1_ + (1.0 - m_ * gamma) * (r - R1_);
}

double tau_eval(const TauMajorant& maj, double gamma, double r)
{
  return maj(gamma, r);
}

void FarModel::validate() const
{
  if (dim < 1)
    throw ParameterError("dim must be >= 1");
  if (!(sigma > 0.0))
    throw ParameterError("sigma must be positive");
  if (!(gamma_max > 0.0))
    throw ParameterError("gamma_max must be positive");
  if (!drift_map || !perturbed_map)
    throw ParameterError("drift_map and perturbed_map must be set");
  if (constants) {
    constants->validate();
    if (gamma_max > 1.0 / constants->contraction_m * (1.0 + 1e-12))
      throw ParameterError("gamma_max must not exceed 1/m");
  }
}

void FarModel::check_gamma(double gamma) const
{
  if (!(gamma > 0.0) || gamma > gamma_max)
    throw ParameterError("gamma outside (0, gamma_max]");
}

TauMajorant FarModel::majorant() const
{
  if (!constants)
    throw ParameterError("model has no assumption constants attached");
  return TauMajorant(*constants, gamma_max);
}

FarModel autoregressive_model(int dim, double rho, double shift_a, double sigma, double gamma_max)
{
  if (!(rho > 0.0))
    throw ParameterError("rho must be positive");
  if (dim < 1)
    throw ParameterError("dim must be >= 1");
  Eigen::VectorXd u = Eigen::VectorXd::Constant(dim, 1.0 / std::sqrt(static_cast<double>(dim)));
  FarModel m;
  m.dim = dim;
  m.sigma = sigma;
  m.gamma_max = gamma_max;
  m.drift_map = [rho](double g, const Eigen::VectorXd& x) -> Eigen::VectorXd { return (1.0 - rho * g) * x; };
  m.perturbed_map = [rho, shift_a, u](double g, const Eigen::VectorXd& x) -> Eigen::VectorXd {
    return (1.0 - rho * g) * x + (g * rho * shift_a) * u;
  };
  m.constants = AssumptionConstants{0.0, rho, 0.0, rho * std::abs(shift_a)};
  m.t_inf = 0.0;
  m.family = "autoregressive";
  m.validate();
  return m;
}

FarModel euler_gradient_model(int dim,
                              double sigma,
                              double gamma_max,
                              std::function<Eigen::VectorXd(const Eigen::VectorXd&)> grad,
                              std::function<Eigen::VectorXd(const Eigen::VectorXd&)> grad_tilde,
                              std::optional<AssumptionConstants> constants)
{
  FarModel m;
  m.dim = dim;
  m.sigma = sigma;
  m.gamma_max = gamma_max;
  m.drift_map = [grad](double g, const Eigen::VectorXd& x) -> Eigen::VectorXd { return x - g * grad(x); };
  m.perturbed_map = [grad_tilde](double g, const Eigen::VectorXd& x) -> Eigen::VectorXd {
    return x - g * grad_tilde(x);
  };
  m.constants = constants;
  m.family = "euler-gradient";
  m.validate();
  return m;
}

long H1H2Report::count(H1H2Violation::Kind k) const
{
  long n = 0;
  for (const auto& v : violations)
    n += v.kind == k;
  return n;
}

H1H2Report validate_h1h2(const FarModel& model, const AssumptionConstants& consts, long n_samples, std::uint64_t seed)
{
  consts.validate();
  H1H2Report rep;
  if (n_samples <= 0)
    return rep;
  TauMajorant tau(consts, model.gamma_max);
  RandomStream rng(seed, 0x68316832);
  const double radii[] = {0.1, 1.0, 10.0, 100.0};
  const double gfrac[] = {1.0, 0.5, 0.1};
  const double scale = std::max(1.0, consts.radius_R1);
  auto slack = [](double rhs) { return 1e-12 * (1.0 + std::abs(rhs)); };

  for (long i = 0; i < n_samples; ++i) {
    double r = radii[i % 4] * scale;
    double gamma = gfrac[(i / 4) % 3] * model.gamma_max;
    Eigen::VectorXd x = rng.gaussian_vector(model.dim);
    x *= r * rng.uniform() / std::max(x.norm(), 1e-300);
    Eigen::VectorXd dir = rng.gaussian_vector(model.dim);
    Eigen::VectorXd xt = x + dir * (r * rng.uniform() / std::max(dir.norm(), 1e-300));

    Eigen::VectorXd tx = model.drift_map(gamma, x);
    Eigen::VectorXd txt = model.drift_map(gamma, xt);
    double lhs = (tx - txt).norm();
    double rhs = tau(gamma, (x - xt).norm());
    if (lhs > rhs + slack(rhs))
      rep.violations.push_back({H1H2Violation::Kind::contraction, gamma, x, xt, lhs, rhs});

    for (const Eigen::VectorXd* p : {&x, &xt}) {
      Eigen::VectorXd a = model.drift_map(gamma, *p);
      Eigen::VectorXd b = model.perturbed_map(gamma, *p);
      double l2 = (a - b).norm();
      double r2 = gamma * consts.c_inf;
      if (l2 > r2 + slack(r2))
        rep.violations.push_back({H1H2Violation::Kind::perturbation, gamma, *p, *p, l2, r2});
    }
    if (model.t_inf) {
      Eigen::VectorXd z = Eigen::VectorXd::Zero(model.dim);
      double l3 = model.drift_map(gamma, z).norm();
      double r3 = gamma * *model.t_inf;
      if (l3 > r3 + slack(r3))
        rep.violations.push_back({H1H2Violation::Kind::origin, gamma, z, z, l3, r3});
    }
    ++rep.n_checked;
  }
  return rep;
}

} // namespace sticky
