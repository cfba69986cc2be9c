#pragma once

#include "sticky/rng.hpp"

#include <Eigen/Core>
#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace sticky {

//! Constants of the contraction/perturbation assumptions.
struct AssumptionConstants
{
  double lip_L = 0.0;
  double contraction_m = 1.0;
  double radius_R1 = 0.0;
  double c_inf = 0.0;

  void validate() const;
};

//! Piecewise-affine majorant tau(gamma, r), or w + gamma*kappa(w) when a
//! kappa is attached.
class TauMajorant
{
public:
  TauMajorant() = default;
  TauMajorant(double lip_L, double contraction_m, double radius_R1, double gamma_max);
  TauMajorant(const AssumptionConstants& c, double gamma_max);

  //! tau(w) = w + gamma*kappa(w); kappa(0) must be 0 and kappa lip_kappa-Lipschitz.
  static TauMajorant from_kappa(std::function<double(double)> kappa, double lip_kappa, double gamma_max);

  double operator()(double gamma, double r) const;

  double lip_L() const { return L_; }
  double contraction_m() const { return m_; }
  double radius_R1() const { return R1_; }
  double gamma_max() const { return gamma_max_; }
  double radius_R2() const { return 2.0 * R1_ * (L_ + m_) / m_; }
  bool has_kappa() const { return static_cast<bool>(kappa_); }

private:
  double L_ = 0.0;
  double m_ = 1.0;
  double R1_ = 0.0;
  double gamma_max_ = 1.0;
  std::function<double(double)> kappa_;
  double lip_kappa_ = 0.0;
};

double tau_eval(const TauMajorant& maj, double gamma, double r);

using DriftMap = std::function<Eigen::VectorXd(double gamma, const Eigen::VectorXd& x)>;

//! Pair of chains Y+ = T(Y) + sigma sqrt(gamma) Z and its perturbation with T~.
struct FarModel
{
  int dim = 1;
  double sigma = 1.0;
  double gamma_max = 1.0;
  DriftMap drift_map;
  DriftMap perturbed_map;
  std::optional<AssumptionConstants> constants;
  //! Declared sup_gamma |T_gamma(0)|/gamma, if known.
  std::optional<double> t_inf;
  std::string family;

  void validate() const;
  void check_gamma(double gamma) const;
  TauMajorant majorant() const;
};

//! T(x) = (1 - rho gamma) x, T~(x) = T(x) + gamma rho a u with u the unit
//! diagonal direction. Constants L=0, m=rho, R1=0, c_inf=rho|a|.
FarModel autoregressive_model(int dim, double rho, double shift_a, double sigma, double gamma_max);

//! Euler maps x - gamma grad(x) and x - gamma grad_tilde(x).
FarModel euler_gradient_model(int dim,
                              double sigma,
                              double gamma_max,
                              std::function<Eigen::VectorXd(const Eigen::VectorXd&)> grad,
                              std::function<Eigen::VectorXd(const Eigen::VectorXd&)> grad_tilde,
                              std::optional<AssumptionConstants> constants = std::nullopt);

struct H1H2Violation
{
  enum class Kind { contraction, perturbation, origin } kind;
  double gamma;
  Eigen::VectorXd x;
  Eigen::VectorXd x_tilde;
  double lhs;
  double rhs;
};

struct H1H2Report
{
  long n_checked = 0;
  std::vector<H1H2Violation> violations;
  bool ok() const { return violations.empty(); }
  long count(H1H2Violation::Kind k) const;
};

//! Spot-check of the declared constants on random pairs at radii
//! {0.1, 1, 10, 100} * max(1, R1) and gamma in {gbar, gbar/2, gbar/10}.
H1H2Report validate_h1h2(const FarModel& model, const AssumptionConstants& consts, long n_samples, std::uint64_t seed);

} // namespace sticky
