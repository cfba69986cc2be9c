#include "sticky/bounds.hpp"

#include "sticky/errors.hpp"
#include "sticky/normal.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <limits>
#include <numbers>
#include <ostream>
#include <string_view>

namespace sticky {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
const double kSqrt2Pi = std::sqrt(2.0 * std::numbers::pi);

double logsumexp(std::initializer_list<double> xs)
{
  double mx = -kInf;
  for (double x : xs)
    mx = std::max(mx, x);
  if (!std::isfinite(mx))
    return mx;
  double s = 0.0;
  for (double x : xs)
    s += std::exp(x - mx);
  return mx + std::log(s);
}

double softplus(double y)
{
  return y > 35.0 ? y + std::log1p(std::exp(-y)) : std::log1p(std::exp(y));
}

// 1 - 2 Phi(-x) for x >= 0
double one_minus_two_tail(double x)
{
  return std::erf(x / std::numbers::sqrt2);
}

double log_eta_R(const MomentBoundInputs& in, double R)
{
  const double s = in.delta_bar + in.gamma_bar;
  const double z = zeta_const(in.L, in.sigma, in.gamma_bar);
  const double s3 = in.sigma * in.sigma * in.sigma;
  double num = std::sqrt(s) * (2.0 * z * std::exp(3.0 * s * in.L) / s3
                               + std::exp(s * in.L) / (2.0 * kSqrt2Pi * in.sigma));
  double arg = ((1.0 + in.gamma_bar * in.L) * R + s * in.c_inf)
               / (2.0 * std::sqrt(in.delta_bar) * in.sigma * std::exp(-s * in.L));
  return std::log(num) - log_normal_cdf(-arg);
}

// (tau(w) + alpha_K) / (2 beta_K) at K = ceil(t0/gamma) steps, bounded uniformly
// over gamma <= gamma_bar: tau(w) <= (1 + gamma_bar L) w, alpha_K <= (t0 + gamma_bar) c_inf,
// beta_K^2 >= sigma^2 (1 - e^{-2 L t0 / (1 + gamma_bar L)}) / (L (2 + gamma_bar L)).
double doeblin_arg(double L, double sigma, double gamma_bar, double t0, double c_inf, double w_max)
{
  const double beta2 = L > 0.0 ? -std::expm1(-2.0 * L * t0 / (1.0 + gamma_bar * L)) / (L * (2.0 + gamma_bar * L)) : t0;
  return ((1.0 + gamma_bar * L) * w_max + (t0 + gamma_bar) * c_inf) / (2.0 * sigma * std::sqrt(beta2));
}

} // namespace

double MomentBoundInputs::delta_bar_max() const
{
  double a = L > 0.0 ? 1.0 / L : kInf;
  double b = c_inf > 0.0 ? std::pow(sigma / (std::numbers::e * c_inf), 2) : kInf;
  return std::min(a, b);
}

void MomentBoundInputs::validate() const
{
  AssumptionConstants{L, m, R1, c_inf}.validate();
  if (!(sigma > 0.0) || !std::isfinite(sigma))
    throw ParameterError("sigma must be positive");
  if (!(gamma_bar > 0.0))
    throw ParameterError("gamma_bar must be positive");
  if (gamma_bar > (1.0 + 1e-12) / m)
    throw ParameterError("gamma_bar must not exceed 1/m");
  if (!(delta_bar > 0.0) || delta_bar > delta_bar_max() * (1.0 + 1e-12))
    throw ParameterError("delta_bar outside (0, min(1/L, (sigma/(e c_inf))^2)]");
}

MomentBoundInputs MomentBoundInputs::from(const AssumptionConstants& c, double sigma, double gamma_bar,
                                          double delta_bar)
{
  return {c.lip_L, c.contraction_m, c.radius_R1, c.c_inf, sigma, gamma_bar, delta_bar};
}

double zeta_const(double L, double sigma, double gamma_bar)
{
  if (!(L >= 0.0) || !(sigma > 0.0) || !(gamma_bar > 0.0))
    throw ParameterError("zeta_const: L >= 0, sigma > 0, gamma_bar > 0 required");
  double f = 1.0 + gamma_bar * L;
  return 2.0 * f * f * sigma * sigma / (2.0 * kSqrt2Pi) * (sup_t2_normal_tail() + 0.125);
}

double eta_R(const MomentBoundInputs& in, double R)
{
  in.validate();
  if (!(R >= 0.0))
    throw ParameterError("R must be non-negative");
  return std::exp(log_eta_R(in, R));
}

Theorem11 theorem11_constants(const MomentBoundInputs& in)
{
  in.validate();
  Theorem11 t;
  const double s = in.delta_bar + in.gamma_bar;
  t.zeta = zeta_const(in.L, in.sigma, in.gamma_bar);
  t.eta_1 = std::exp(log_eta_R(in, in.R1));
  t.c1 = t.eta_1 * in.R1 * (1.0 + in.L / in.m) + 1.0 / in.m;
  t.c2 = std::exp(s * in.L) * (t.c1 * (1.0 + in.gamma_bar * in.L) / std::sqrt(in.delta_bar) + std::sqrt(s))
           / (kSqrt2Pi * in.sigma)
         + 2.0 * t.zeta * std::sqrt(s) * std::exp(3.0 * s * in.L) / (in.sigma * in.sigma * in.sigma);
  return t;
}

double default_delta_bar(MomentBoundInputs in)
{
  double hi = in.delta_bar_max();
  if (!std::isfinite(hi))
    hi = 10.0 / in.m;
  const double lo = hi * 1e-4;
  double best = hi, best_c2 = kInf;
  for (int i = 0; i < 50; ++i) {
    in.delta_bar = (i == 49) ? hi : lo * std::pow(hi / lo, i / 49.0);
    double c2 = theorem11_constants(in).c2;
    if (c2 < best_c2) {
      best_c2 = c2;
      best = in.delta_bar;
    }
  }
  return best;
}

Theorem12 theorem12_constants(const MomentBoundInputs& in, double a)
{
  in.validate();
  if (!(a > 0.0))
    throw ParameterError("a must be positive");
  const double s2 = in.sigma * in.sigma;
  const double gb = in.gamma_bar;
  Theorem12 t;
  t.a = a;
  t.R_tilde_a = std::max({1.0, in.R1, (4.0 * a * s2 + 2.0 * in.c_inf) / in.m, 16.0 * s2 * a / in.m});
  const double log_lam = -a * in.m * t.R_tilde_a / 8.0;
  t.lambda_a = std::exp(log_lam);

  const double k0 = in.c_inf + 2.0 * a * s2;
  const double log_G = std::log(2.0 * s2 / kSqrt2Pi * a)
                       + std::pow(a + 2.0 * in.sigma * std::sqrt(gb) * a, 2) / 2.0;
  const double log_C = logsumexp({std::log(a * k0) + a * gb * k0, log_G});
  t.C_a = std::exp(log_C);
  t.R_a = std::max(t.R_tilde_a, softplus(log_C - std::log(-log_lam) - 2.0 * gb * log_lam) / a);
  t.gamma_bar_1 = std::min({gb, 1.0 / (-log_lam), 1.0 / (4.0 * s2)});

  const double k = k0 + in.L * t.R_a;
  const double log_B = a * k;
  t.B_a = std::exp(log_B);
  const double log_Wstar = a * t.R_a + std::log(-std::expm1(-a * t.R_a));
  const double log_D = logsumexp({std::log(a * k) + a * gb * k, log_G,
                                  std::log(2.0 * s2 * a * a) + 2.0 * gb * log_lam + log_Wstar});
  t.D_a = std::exp(log_D);
  t.A_a = 4.0 * std::exp(a * gb * k0) * (gb * std::pow(2.0 * a * s2 + in.c_inf / 2.0, 2) + s2) / (2.0 * s2);
  const double log_alpha = logsumexp({std::log(log_B - log_lam) + a * t.R_a + gb * log_B, std::log(-log_lam), log_D});
  t.alpha_a = std::exp(log_alpha);

  const double log_eta = log_eta_R(in, t.R_a);
  t.eta_R_a = std::exp(log_eta);
  const double log_abs_loglam = std::log(-log_lam);
  const double term1 = gb * (log_B - log_lam) + std::log(a)
                       + std::log(in.L * t.R_a + 2.0 * s2 * a + in.c_inf + in.m * t.R_tilde_a / 8.0) + log_eta
                       + log_Wstar - log_abs_loglam;
  const double term2 = logsumexp({log_D + log_eta, std::log(t.A_a)}) - log_abs_loglam;
  t.log_c3 = logsumexp({term1, term2});
  t.c3 = std::exp(t.log_c3);
  t.c3_overflow = !std::isfinite(t.c3);
  return t;
}

double w1_bound(const MomentBoundInputs& in, double gamma, long k, double dist0)
{
  in.validate();
  if (!(gamma > 0.0) || gamma > in.gamma_bar)
    throw ParameterError("gamma outside (0, gamma_bar]");
  if (k < 0 || !(dist0 >= 0.0))
    throw ParameterError("k and dist0 must be non-negative");
  return std::pow(1.0 - gamma * in.m, static_cast<double>(k)) * dist0 + ((in.L + in.m) * in.R1 + in.c_inf) / in.m;
}

AlphaBetaSequence::AlphaBetaSequence(double gamma, double c_inf, double sigma, double L)
  : gamma_(gamma)
  , c_inf_(c_inf)
  , sigma_(sigma)
  , L_(L)
{
  if (!(gamma > 0.0) || !(c_inf >= 0.0) || !(sigma > 0.0) || !(L >= 0.0))
    throw ParameterError("AlphaBetaSequence: invalid parameters");
}

double AlphaBetaSequence::alpha(long k) const
{
  if (k < 1)
    throw ParameterError("k must be >= 1");
  if (L_ == 0.0)
    return k * gamma_ * c_inf_;
  const double lq = std::log1p(gamma_ * L_);
  // sum_{i<k} q^i = (1 - q^k)/(1 - q), q = 1/(1 + gamma L)
  return gamma_ * c_inf_ * (-std::expm1(-k * lq)) * (1.0 + gamma_ * L_) / (gamma_ * L_);
}

double AlphaBetaSequence::beta(long k) const
{
  if (k < 1)
    throw ParameterError("k must be >= 1");
  if (L_ == 0.0)
    return std::sqrt(k * gamma_) * sigma_;
  const double lq = std::log1p(gamma_ * L_);
  const double sum = -std::expm1(-2.0 * k * lq) / -std::expm1(-2.0 * lq);
  return std::sqrt(gamma_ * sigma_ * sigma_ * sum);
}

double AlphaBetaSequence::weighted_sum(long k) const
{
  double s = 0.0;
  for (long i = 1; i < k; ++i)
    s += alpha(i) / std::pow(beta(i), 3);
  return gamma_ * s;
}

Theorem13 sticky_convergence_rate(const MomentBoundInputs& in, double gamma, double t0, RateMode mode)
{
  in.validate();
  if (!(t0 > 0.0))
    throw ParameterError("t0 must be positive");
  Theorem13 r;
  r.t0 = t0;
  if (mode.kind == RateMode::Kind::linear) {
    if (!(gamma > 0.0) || gamma > in.gamma_bar)
      throw ParameterError("gamma outside (0, gamma_bar]");
    r.lambda_1 = std::exp(-in.m);
    r.beta_1 = (in.R1 * (in.m + in.L) + in.c_inf + in.m) / in.m;
  } else {
    Theorem12 t12 = theorem12_constants(in, mode.a);
    if (!(gamma > 0.0) || gamma > t12.gamma_bar_1)
      throw ParameterError("gamma outside (0, gamma_bar_1]");
    r.lambda_1 = t12.lambda_a;
    r.beta_1 = (t0 + in.gamma_bar) * t12.alpha_a * std::pow(t12.lambda_a, -in.gamma_bar);
  }
  if (!std::isfinite(r.beta_1))
    throw ParameterError("drift constant overflows");
  r.delta_1 = 4.0 * r.beta_1 / (1.0 - r.lambda_1) - 1.0;
  r.M_1 = mode.kind == RateMode::Kind::linear ? r.delta_1 - 1.0 : std::log(r.delta_1) / mode.a;
  r.epsilon_1 = 2.0 * normal_cdf(-doeblin_arg(in.L, in.sigma, in.gamma_bar, t0, in.c_inf, r.M_1));
  const double lt0 = std::pow(r.lambda_1, t0);
  r.lambda_bar = lt0 + 2.0 * r.beta_1 / (1.0 + r.delta_1);
  r.beta_bar = lt0 * r.beta_1 + r.delta_1;
  if (!(r.lambda_bar < 1.0))
    throw ParameterError("lambda_bar >= 1 for this t0; increase t0");
  if (!(r.beta_bar > 1.0))
    throw ParameterError("beta_bar <= 1");
  const double l1e = std::log1p(-r.epsilon_1);
  const double llb = std::log(r.lambda_bar);
  r.log_rho = l1e * llb / (l1e + llb - std::log(r.beta_bar)) / (t0 + in.gamma_bar);
  r.rho = std::exp(r.log_rho);
  r.C_tilde = (lt0 + r.beta_1) * (1.0 + r.beta_bar / ((1.0 - r.epsilon_1) * (1.0 - r.lambda_bar))) / r.rho;
  return r;
}

double default_t0(const MomentBoundInputs& in, double gamma, RateMode mode)
{
  double best_t0 = 0.0, best = kInf;
  for (int j = -4; j <= 4; ++j) {
    double t0 = std::ldexp(1.0, j) / in.m;
    try {
      Theorem13 r = sticky_convergence_rate(in, gamma, t0, mode);
      if (r.log_rho < best) {
        best = r.log_rho;
        best_t0 = t0;
      }
    } catch (const ParameterError&) {
    }
  }
  if (!(best_t0 > 0.0))
    throw ParameterError("no admissible t0 on the default grid");
  return best_t0;
}

double doeblin_tv_bound(double L, double sigma, double gamma_bar, double t0, double c_inf, double w_max)
{
  return one_minus_two_tail(doeblin_arg(L, sigma, gamma_bar, t0, c_inf, w_max));
}

double doeblin_tv_bound_printed(double L, double sigma, double gamma_bar, double t0, double c_inf, double w_max)
{
  const double s = t0 + gamma_bar;
  const double factor = L > 0.0 ? std::sqrt(L / -std::expm1(-2.0 * L * s)) : 1.0 / std::sqrt(2.0 * s);
  return one_minus_two_tail(factor * (w_max + t0 * c_inf) / (2.0 * sigma));
}

double coalescence_tv_bound(const TauMajorant& tau, double gamma, double c_inf, double sigma, double w_max, long k)
{
  AlphaBetaSequence ab(gamma, c_inf, sigma, tau.lip_L());
  return one_minus_two_tail((tau(gamma, w_max) + ab.alpha(k + 1)) / (2.0 * ab.beta(k + 1)));
}

Theorem4 theorem4_constants(const MomentBoundInputs& in, CostChoice cost, double gamma, std::optional<double> t0)
{
  Theorem11 t11 = theorem11_constants(in);
  Theorem4 r;
  RateMode mode = RateMode::linear();
  double mu_V;
  switch (cost.kind) {
    case CostChoice::Kind::indicator:
      r.c = t11.c2;
      mu_V = 1.0 + in.c_inf * t11.c1;
      break;
    case CostChoice::Kind::linear:
      r.c = t11.c1;
      mu_V = 1.0 + in.c_inf * t11.c1;
      break;
    case CostChoice::Kind::exponential: {
      if (!(cost.a > 0.0))
        throw ParameterError("exponential cost needs a > 0");
      Theorem12 t12 = theorem12_constants(in, cost.a);
      r.c = t12.c3;
      mu_V = 1.0 + in.c_inf * t12.c3;
      mode = RateMode::exponential(cost.a);
      break;
    }
    default:
      throw ParameterError("inadmissible cost");
  }
  r.t0 = t0 ? *t0 : default_t0(in, gamma, mode);
  Theorem13 t13 = sticky_convergence_rate(in, gamma, r.t0, mode);
  r.rho = t13.rho;
  r.log_rho = t13.log_rho;
  r.C = t13.C_tilde * (1.0 + mu_V);
  return r;
}

double theorem4_bound(const MomentBoundInputs& in, CostChoice cost, double gamma, long k, double dist0,
                      std::optional<double> t0)
{
  if (k < 0 || !(dist0 >= 0.0))
    throw ParameterError("k and dist0 must be non-negative");
  Theorem4 t = theorem4_constants(in, cost, gamma, t0);
  double V = cost.kind == CostChoice::Kind::exponential ? std::exp(cost.a * dist0) : 1.0 + dist0;
  double stat = t.c * in.c_inf;
  double b = t.C * std::exp(gamma * static_cast<double>(k) * t.log_rho) * V + stat;
  return dist0 == 0.0 ? std::min(b, stat) : b;
}

AppendixA appendixA_constants(double T_inf, double L, double m, double R1, double sigma, double gamma_bar, int d)
{
  if (!(T_inf >= 0.0) || d < 1 || !(m > 0.0) || !(sigma > 0.0) || !(gamma_bar > 0.0) || !(L >= 0.0) || !(R1 >= 0.0))
    throw ParameterError("appendixA_constants: invalid parameters");
  AppendixA r;
  const double s2 = sigma * sigma;
  r.c = m / (32.0 * s2);
  r.M = std::max({R1, std::sqrt(16.0 * d * s2 / m), (4.0 * T_inf + 2.0 * gamma_bar * T_inf * T_inf) / m});
  r.lambda = std::exp(-m * r.M * r.M / 8.0);
  r.C2 = std::max(2.0 * L + L * L * gamma_bar, 8.0 * r.c * s2);
  r.C1 = std::max(r.C2, r.C2 * r.C2 * gamma_bar);
  const double f = 1.0 + 8.0 * r.c * s2 * gamma_bar;
  r.B1 = 4.0 * r.C1 + 2.0 * f * (1.0 + gamma_bar * L) * T_inf;
  r.B2 = 2.0 * d * r.c * s2 + 2.0 * f * (1.0 + gamma_bar * L) * T_inf + r.c * f * gamma_bar * T_inf * T_inf;
  const double inner = r.c * r.B1 * r.M * r.M + r.B2 + m * r.M * r.M / 8.0;
  r.A = std::exp(r.c * r.M * r.M + gamma_bar * inner) * inner;
  return r;
}

double tv_contraction_R(double L, double sigma, double gamma_bar, double t0, double dist0)
{
  if (!(t0 > 0.0) || !(dist0 >= 0.0))
    throw ParameterError("t0 > 0 and dist0 >= 0 required");
  return one_minus_two_tail(dist0 / (2.0 * sigma * sigma * t0 * std::exp(-2.0 * (t0 + gamma_bar) * L)));
}

Theorem4 BoundReport::theorem4(CostChoice cost) const
{
  return theorem4_constants(inputs, cost, gamma);
}

namespace {

void kv(std::ostream& os, const char* key, double v)
{
  char buf[64];
  auto r = std::to_chars(buf, buf + sizeof buf, v);
  os << key << " = " << std::string_view(buf, r.ptr - buf) << '\n';
}

void write_t13(std::ostream& os, const char* prefix, const Theorem13& t)
{
  std::string p(prefix);
  kv(os, (p + "t0").c_str(), t.t0);
  kv(os, (p + "log_rho").c_str(), t.log_rho);
  kv(os, (p + "rho").c_str(), t.rho);
  kv(os, (p + "C_tilde").c_str(), t.C_tilde);
  kv(os, (p + "epsilon_1").c_str(), t.epsilon_1);
  kv(os, (p + "delta_1").c_str(), t.delta_1);
  kv(os, (p + "M_1").c_str(), t.M_1);
  kv(os, (p + "lambda_1").c_str(), t.lambda_1);
  kv(os, (p + "beta_1").c_str(), t.beta_1);
}

} // namespace

void BoundReport::write(std::ostream& os) const
{
  kv(os, "L", inputs.L);
  kv(os, "m", inputs.m);
  kv(os, "R1", inputs.R1);
  kv(os, "c_inf", inputs.c_inf);
  kv(os, "sigma", inputs.sigma);
  kv(os, "gamma_bar", inputs.gamma_bar);
  kv(os, "delta_bar", inputs.delta_bar);
  kv(os, "gamma", gamma);
  kv(os, "a", a);
  kv(os, "zeta", t11.zeta);
  kv(os, "eta_1", t11.eta_1);
  kv(os, "c1", t11.c1);
  kv(os, "c2", t11.c2);
  kv(os, "c3", t12.c3);
  kv(os, "log_c3", t12.log_c3);
  kv(os, "gamma_bar_1", t12.gamma_bar_1);
  kv(os, "lambda_a", t12.lambda_a);
  kv(os, "R_tilde_a", t12.R_tilde_a);
  kv(os, "R_a", t12.R_a);
  kv(os, "B_a", t12.B_a);
  kv(os, "C_a", t12.C_a);
  kv(os, "D_a", t12.D_a);
  kv(os, "A_a", t12.A_a);
  kv(os, "alpha_a", t12.alpha_a);
  write_t13(os, "linear.", t13_linear);
  if (t13_exponential)
    write_t13(os, "exponential.", *t13_exponential);
  kv(os, "w1_limit", w1(0, 0.0));
  kv(os, "stationary_w1_bound", inputs.c_inf * t11.c1);
  kv(os, "stationary_tv_bound", inputs.c_inf * t11.c2);
  if (appendix_a) {
    kv(os, "appendixA.c", appendix_a->c);
    kv(os, "appendixA.lambda", appendix_a->lambda);
    kv(os, "appendixA.M", appendix_a->M);
    kv(os, "appendixA.A", appendix_a->A);
  }
}

BoundReport make_bound_report(const MomentBoundInputs& in, double gamma, double a, std::optional<double> t0,
                              std::optional<double> T_inf, int dim)
{
  BoundReport r;
  r.inputs = in;
  r.gamma = gamma;
  r.a = a;
  r.dim = dim;
  r.T_inf = T_inf;
  r.t11 = theorem11_constants(in);
  r.t12 = theorem12_constants(in, a);
  r.t13_linear = sticky_convergence_rate(in, gamma, t0 ? *t0 : default_t0(in, gamma, RateMode::linear()),
                                         RateMode::linear());
  if (gamma <= r.t12.gamma_bar_1) {
    RateMode em = RateMode::exponential(a);
    try {
      r.t13_exponential = sticky_convergence_rate(in, gamma, t0 ? *t0 : default_t0(in, gamma, em), em);
    } catch (const ParameterError&) {
    }
  }
  if (T_inf)
    r.appendix_a = appendixA_constants(*T_inf, in.L, in.m, in.R1, in.sigma, in.gamma_bar, dim);
  return r;
}

} // namespace sticky
