#pragma once

#include "sticky/model.hpp"

#include <iosfwd>
#include <optional>
#include <vector>

namespace sticky {

struct MomentBoundInputs
{
  double L = 0.0;
  double m = 1.0;
  double R1 = 0.0;
  double c_inf = 0.0;
  double sigma = 1.0;
  double gamma_bar = 1.0;
  double delta_bar = 1.0;

  //! min(1/L, (sigma e^-1 / c_inf)^2) with 1/0 = +inf.
  double delta_bar_max() const;
  void validate() const;
  static MomentBoundInputs from(const AssumptionConstants& c, double sigma, double gamma_bar, double delta_bar);
};

double zeta_const(double L, double sigma, double gamma_bar);

struct Theorem11
{
  double zeta = 0.0;
  double eta_1 = 0.0;
  double c1 = 0.0;
  double c2 = 0.0;
};

Theorem11 theorem11_constants(const MomentBoundInputs& in);
double eta_R(const MomentBoundInputs& in, double R);

//! Minimizer of c2 over 50 log-spaced admissible values of delta_bar.
double default_delta_bar(MomentBoundInputs in);

struct Theorem12
{
  double a = 0.0;
  double gamma_bar_1 = 0.0;
  double lambda_a = 0.0;
  double R_tilde_a = 0.0;
  double R_a = 0.0;
  double C_a = 0.0;
  double B_a = 0.0;
  double D_a = 0.0;
  double A_a = 0.0;
  double alpha_a = 0.0;
  double eta_R_a = 0.0;
  double c3 = 0.0;
  double log_c3 = 0.0;
  //! c3 exceeds the double range; log_c3 stays valid
  bool c3_overflow = false;
};

Theorem12 theorem12_constants(const MomentBoundInputs& in, double a);

//! (1 - gamma m)^k dist0 + [(L + m) R1 + c_inf] / m
double w1_bound(const MomentBoundInputs& in, double gamma, long k, double dist0);

class AlphaBetaSequence
{
public:
  AlphaBetaSequence(double gamma, double c_inf, double sigma, double L);
  double alpha(long k) const;
  double beta(long k) const;
  //! gamma sum_{i=1}^{k-1} alpha_i / beta_i^3
  double weighted_sum(long k) const;

private:
  double gamma_, c_inf_, sigma_, L_;
};

struct RateMode
{
  enum class Kind { linear, exponential } kind = Kind::linear;
  double a = 0.0;
  static RateMode linear() { return {Kind::linear, 0.0}; }
  static RateMode exponential(double a) { return {Kind::exponential, a}; }
};

struct Theorem13
{
  double t0 = 0.0;
  double log_rho = 0.0;
  double rho = 0.0;
  double C_tilde = 0.0;
  double epsilon_1 = 0.0;
  double delta_1 = 0.0;
  double M_1 = 0.0;
  double lambda_1 = 0.0;
  double beta_1 = 0.0;
  double lambda_bar = 0.0;
  double beta_bar = 0.0;
};

Theorem13 sticky_convergence_rate(const MomentBoundInputs& in, double gamma, double t0, RateMode mode);
//! t0 in {2^-4, ..., 2^4}/m minimizing rho among admissible choices.
double default_t0(const MomentBoundInputs& in, double gamma, RateMode mode);

//! TV after ceil(t0/gamma) steps from any two points in [0, w_max], uniform in
//! gamma <= gamma_bar: 1 - 2 Phi(-x) with
//! x = [(1 + gbar L) w_max + (t0 + gbar) c_inf] {L (2 + gbar L)}^{1/2} / (2 sigma {1 - e^{-2 L t0 / (1 + gbar L)}}^{1/2}),
//! L = 0 as a limit.
double doeblin_tv_bound(double L, double sigma, double gamma_bar, double t0, double c_inf, double w_max);
//! The same bound in its printed form L^{1/2} (w + t0 c_inf) / (2 sigma {1 - e^{-2L(t0+gbar)}}^{1/2});
//! kept for comparison only, it is not implied by the lemma bound.
double doeblin_tv_bound_printed(double L, double sigma, double gamma_bar, double t0, double c_inf, double w_max);
//! 1 - 2 Phi(-(tau(w) + alpha_{k+1}) / (2 beta_{k+1})): TV after k+1 steps.
double coalescence_tv_bound(const TauMajorant& tau, double gamma, double c_inf, double sigma, double w_max, long k);

struct CostChoice
{
  enum class Kind { indicator, linear, exponential } kind = Kind::linear;
  double a = 0.0;
};

struct Theorem4
{
  double C = 0.0;
  double rho = 0.0;
  double log_rho = 0.0;
  double c = 0.0;
  double t0 = 0.0;
};

Theorem4 theorem4_constants(const MomentBoundInputs& in, CostChoice cost, double gamma, std::optional<double> t0 = {});
double theorem4_bound(const MomentBoundInputs& in, CostChoice cost, double gamma, long k, double dist0,
                      std::optional<double> t0 = {});

struct AppendixA
{
  double c = 0.0;
  double lambda = 0.0;
  double M = 0.0;
  double A = 0.0;
  double B1 = 0.0;
  double B2 = 0.0;
  double C1 = 0.0;
  double C2 = 0.0;
};

AppendixA appendixA_constants(double T_inf, double L, double m, double R1, double sigma, double gamma_bar, int d);
double tv_contraction_R(double L, double sigma, double gamma_bar, double t0, double dist0);

struct BoundReport
{
  MomentBoundInputs inputs;
  double gamma = 0.0;
  double a = 0.0;
  Theorem11 t11;
  Theorem12 t12;
  Theorem13 t13_linear;
  std::optional<Theorem13> t13_exponential;
  std::optional<AppendixA> appendix_a;
  std::optional<double> T_inf;
  int dim = 1;

  double eta(double R) const { return eta_R(inputs, R); }
  double w1(long k, double dist0) const { return w1_bound(inputs, gamma, k, dist0); }
  Theorem4 theorem4(CostChoice cost) const;
  void write(std::ostream& os) const;
};

BoundReport make_bound_report(const MomentBoundInputs& in, double gamma, double a, std::optional<double> t0 = {},
                              std::optional<double> T_inf = {}, int dim = 1);

} // namespace sticky
