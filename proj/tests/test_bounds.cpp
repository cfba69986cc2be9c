#include "sticky/bounds.hpp"
#include "sticky/errors.hpp"
#include "sticky/normal.hpp"

#include "golden_values.hpp"

#include <doctest.h>

#include <cmath>
#include <sstream>

using namespace sticky;

namespace {

constexpr double kRel = 1e-12;

MomentBoundInputs set_a()
{
  return {1.0, 0.5, 1.0, 0.1, 1.0, 0.1, 0.5};
}

MomentBoundInputs set_b()
{
  return {0.1, 0.5, 1.0, 0.1, 1.0, 0.1, 1.0};
}

} // namespace

TEST_CASE("theorem 11 constants")
{
  Theorem11 t = theorem11_constants(set_a());
  CHECK(t.zeta == doctest::Approx(golden::kA_zeta).epsilon(kRel));
  CHECK(t.eta_1 == doctest::Approx(golden::kA_eta1).epsilon(kRel));
  CHECK(t.c1 == doctest::Approx(golden::kA_c1).epsilon(kRel));
  CHECK(t.c2 == doctest::Approx(golden::kA_c2).epsilon(kRel));
  CHECK(eta_R(set_a(), 2.0) == doctest::Approx(golden::kA_eta_R2).epsilon(kRel));
  CHECK(zeta_const(0.0, 1.0, 0.1) == doctest::Approx(golden::kA_zeta_L0).epsilon(kRel));
  CHECK(theorem11_constants(set_b()).c1 == doctest::Approx(golden::kB_c1).epsilon(kRel));
}

TEST_CASE("theorem 11 monotonicity properties")
{
  MomentBoundInputs in = set_a();
  Theorem11 base = theorem11_constants(in);
  in.c_inf = 0.05;
  CHECK(theorem11_constants(in).c1 < base.c1); // eta_1 grows with c_inf
  CHECK(eta_R(set_a(), 3.0) > eta_R(set_a(), 2.0));
  // zeta is continuous at L = 0
  CHECK(zeta_const(1e-9, 1.0, 0.1) == doctest::Approx(zeta_const(0.0, 1.0, 0.1)).epsilon(1e-7));
}

TEST_CASE("delta_bar admissibility")
{
  MomentBoundInputs in = set_a();
  CHECK(in.delta_bar_max() == doctest::Approx(std::min(1.0, std::pow(std::exp(-1.0) / 0.1, 2))));
  in.delta_bar = 2.0;
  CHECK_THROWS_AS(in.validate(), ParameterError);
  in.delta_bar = 0.5;
  double d = default_delta_bar(in);
  CHECK(d > 0.0);
  CHECK(d <= in.delta_bar_max() * (1 + 1e-12));
  MomentBoundInputs best = in;
  best.delta_bar = d;
  double c2 = theorem11_constants(best).c2;
  // both ends of the search grid
  for (double frac : {1e-4, 1.0}) {
    best.delta_bar = frac * in.delta_bar_max();
    CHECK(theorem11_constants(best).c2 >= c2);
  }
}

TEST_CASE("theorem 12 constants")
{
  Theorem12 t = theorem12_constants(set_b(), 0.5);
  CHECK(t.R_tilde_a == doctest::Approx(golden::kB_R_tilde).epsilon(kRel));
  CHECK(t.lambda_a == doctest::Approx(golden::kB_lambda_a).epsilon(kRel));
  CHECK(t.C_a == doctest::Approx(golden::kB_C_a).epsilon(kRel));
  CHECK(t.R_a == doctest::Approx(golden::kB_R_a).epsilon(kRel));
  CHECK(t.gamma_bar_1 == doctest::Approx(golden::kB_gamma_bar_1).epsilon(kRel));
  CHECK(t.B_a == doctest::Approx(golden::kB_B_a).epsilon(kRel));
  CHECK(t.D_a == doctest::Approx(golden::kB_D_a).epsilon(kRel));
  CHECK(t.A_a == doctest::Approx(golden::kB_A_a).epsilon(kRel));
  CHECK(t.alpha_a == doctest::Approx(golden::kB_alpha_a).epsilon(kRel));
  CHECK(t.eta_R_a == doctest::Approx(golden::kB_eta_Ra).epsilon(kRel));
  CHECK(t.c3 == doctest::Approx(golden::kB_c3).epsilon(kRel));
  CHECK(t.log_c3 == doctest::Approx(std::log(golden::kB_c3)).epsilon(kRel));
  CHECK_FALSE(t.c3_overflow);
}

TEST_CASE("theorem 12 reports overflow in log space")
{
  MomentBoundInputs in = set_b();
  in.L = 1.0;
  in.R1 = 5.0;
  Theorem12 t = theorem12_constants(in, 2.0);
  CHECK(std::isfinite(t.log_c3));
  if (t.c3_overflow)
    CHECK(std::isinf(t.c3));
}

TEST_CASE("alpha and beta sequences")
{
  AlphaBetaSequence ab(0.01, 0.2, 1.3, 0.5);
  CHECK(ab.alpha(7) == doctest::Approx(golden::kAlpha7).epsilon(kRel));
  CHECK(ab.beta(7) == doctest::Approx(golden::kBeta7).epsilon(kRel));
  CHECK(ab.alpha(1000) == doctest::Approx(golden::kAlpha1000).epsilon(kRel));
  CHECK(ab.beta(1000) == doctest::Approx(golden::kBeta1000).epsilon(kRel));
  // the sums they close: alpha_k = gamma c sum q^i, beta_k^2 = gamma sigma^2 sum q^{2i}
  double q = 1.0 / (1.0 + 0.01 * 0.5), a = 0.0, b = 0.0, qi = 1.0;
  for (int i = 0; i < 37; ++i) {
    a += 0.01 * 0.2 * qi;
    b += 0.01 * 1.69 * qi * qi;
    qi *= q;
  }
  CHECK(ab.alpha(37) == doctest::Approx(a).epsilon(1e-13));
  CHECK(ab.beta(37) == doctest::Approx(std::sqrt(b)).epsilon(1e-13));
  // L = 0 limits
  AlphaBetaSequence flat(0.01, 0.2, 1.3, 0.0);
  CHECK(flat.alpha(50) == doctest::Approx(50 * 0.01 * 0.2));
  CHECK(flat.beta(50) == doctest::Approx(std::sqrt(50 * 0.01 * 1.69)));
  // alpha_{k+1} <= k gamma c_inf + gamma c_inf and beta increasing
  for (long k = 1; k < 200; ++k) {
    CHECK(ab.alpha(k + 1) <= (k + 1) * 0.01 * 0.2 + 1e-15);
    CHECK(ab.beta(k + 1) > ab.beta(k));
  }
}

TEST_CASE("theorem 13 linear rate")
{
  Theorem13 t = sticky_convergence_rate(set_a(), 0.05, 1.0, RateMode::linear());
  CHECK(t.log_rho == doctest::Approx(golden::kA_t13_log_rho).epsilon(kRel));
  CHECK(t.C_tilde == doctest::Approx(golden::kA_t13_C_tilde).epsilon(kRel));
  CHECK(t.epsilon_1 == doctest::Approx(golden::kA_t13_epsilon).epsilon(kRel));
  CHECK(t.delta_1 == doctest::Approx(golden::kA_t13_delta).epsilon(kRel));
  CHECK(t.M_1 == doctest::Approx(golden::kA_t13_M).epsilon(kRel));
  CHECK(t.lambda_1 == doctest::Approx(golden::kA_t13_lam).epsilon(kRel));
  CHECK(t.beta_1 == doctest::Approx(golden::kA_t13_beta).epsilon(kRel));
  CHECK(t.rho <= 1.0);
  CHECK(t.log_rho < 0.0);
}

TEST_CASE("theorem 13 exponential rate")
{
  Theorem13 t = sticky_convergence_rate(set_b(), 0.05, 1.0, RateMode::exponential(0.5));
  CHECK(t.log_rho == doctest::Approx(golden::kB_t13_log_rho).epsilon(kRel));
  CHECK(t.C_tilde == doctest::Approx(golden::kB_t13_C_tilde).epsilon(kRel));
  CHECK(t.epsilon_1 == doctest::Approx(golden::kB_t13_epsilon).epsilon(kRel));
  CHECK(t.delta_1 == doctest::Approx(golden::kB_t13_delta).epsilon(kRel));
  CHECK(t.M_1 == doctest::Approx(golden::kB_t13_M).epsilon(kRel));
  CHECK(t.beta_1 == doctest::Approx(golden::kB_t13_beta).epsilon(kRel));
}

TEST_CASE("theorem 13 epsilon two ways")
{
  // epsilon_1 at M_1 + t0 c_inf from the Doeblin bound vs a direct Phi evaluation
  MomentBoundInputs in = set_b();
  Theorem13 t = sticky_convergence_rate(in, 0.05, 2.0, RateMode::linear());
  const double gL = 1.0 + in.gamma_bar * in.L;
  double beta2 = (1.0 - std::exp(-2.0 * in.L * 2.0 / gL)) / (in.L * (1.0 + gL));
  double arg = (gL * t.M_1 + (2.0 + in.gamma_bar) * in.c_inf) / (2.0 * in.sigma * std::sqrt(beta2));
  CHECK(t.epsilon_1 == doctest::Approx(2.0 * normal_cdf(-arg)).epsilon(1e-12));
}

TEST_CASE("theorem 13 rejects t0 with lambda_bar >= 1 and the default t0 skips it")
{
  MomentBoundInputs in = set_a();
  CHECK_THROWS_AS(sticky_convergence_rate(in, 0.05, 1.0 / 16, RateMode::linear()), ParameterError);
  double t0 = default_t0(in, 0.05, RateMode::linear());
  double best = sticky_convergence_rate(in, 0.05, t0, RateMode::linear()).log_rho;
  for (int j = -4; j <= 4; ++j) {
    double lr = 0.0;
    try {
      lr = sticky_convergence_rate(in, 0.05, std::ldexp(1.0, j) / in.m, RateMode::linear()).log_rho;
    } catch (const ParameterError&) {
      continue;
    }
    CHECK(lr >= best);
  }
  CHECK_THROWS_AS(sticky_convergence_rate(in, 0.5, 1.0, RateMode::linear()), ParameterError);
}

TEST_CASE("theorem 4 assemblies")
{
  CHECK(theorem4_bound(set_a(), {CostChoice::Kind::linear}, 0.05, 100, 2.0, 1.0) ==
        doctest::Approx(golden::kA_t4_linear).epsilon(kRel));
  CHECK(theorem4_bound(set_a(), {CostChoice::Kind::indicator}, 0.05, 100, 2.0, 1.0) ==
        doctest::Approx(golden::kA_t4_indicator).epsilon(kRel));
  CHECK(theorem4_bound(set_b(), {CostChoice::Kind::exponential, 0.5}, 0.05, 100, 2.0, 1.0) ==
        doctest::Approx(golden::kB_t4_exponential).epsilon(kRel));
  // at dist0 = 0 the bound never exceeds the stationary term c c_inf
  Theorem4 t4 = theorem4_constants(set_a(), {CostChoice::Kind::linear}, 0.05, 1.0);
  CHECK(theorem4_bound(set_a(), {CostChoice::Kind::linear}, 0.05, 10, 0.0, 1.0) <= t4.c * 0.1 * (1 + 1e-15));
  // non-increasing in k
  double prev = 1e300;
  for (long k : {0L, 10L, 100L, 1000L}) {
    double b = theorem4_bound(set_a(), {CostChoice::Kind::linear}, 0.05, k, 2.0, 1.0);
    CHECK(b <= prev);
    prev = b;
  }
}

TEST_CASE("appendix A constants and the TV contraction")
{
  AppendixA a = appendixA_constants(0.5, 1.0, 0.5, 1.0, 1.0, 0.1, 2);
  CHECK(a.c == doctest::Approx(golden::kApp_c).epsilon(kRel));
  CHECK(a.M == doctest::Approx(golden::kApp_M).epsilon(kRel));
  CHECK(a.lambda == doctest::Approx(golden::kApp_lam).epsilon(kRel));
  CHECK(a.C1 == doctest::Approx(golden::kApp_C1).epsilon(kRel));
  CHECK(a.C2 == doctest::Approx(golden::kApp_C2).epsilon(kRel));
  CHECK(a.B1 == doctest::Approx(golden::kApp_B1).epsilon(kRel));
  CHECK(a.B2 == doctest::Approx(golden::kApp_B2).epsilon(kRel));
  CHECK(a.A == doctest::Approx(golden::kApp_A).epsilon(kRel));
  CHECK(tv_contraction_R(1.0, 1.0, 0.1, 1.0, 0.7) == doctest::Approx(golden::kTvR).epsilon(kRel));
  CHECK(tv_contraction_R(1.0, 1.0, 0.1, 1.0, 0.0) == 0.0);
}

TEST_CASE("W1 bound")
{
  MomentBoundInputs in{0.0, 1.0, 0.0, 0.5, 1.0, 0.1, 0.5};
  // (1 - gamma m)^k dist0 + [(L + m) R1 + c_inf] / m
  CHECK(w1_bound(in, 0.05, 0, 2.0) == doctest::Approx(2.5));
  CHECK(w1_bound(in, 0.05, 10, 2.0) == doctest::Approx(std::pow(0.95, 10) * 2.0 + 0.5));
  CHECK(w1_bound(in, 0.05, 100000, 2.0) == doctest::Approx(0.5));
}

TEST_CASE("Doeblin and coalescence bounds")
{
  // L -> 0 limit of the Doeblin factor
  double a = doeblin_tv_bound(1e-10, 1.0, 0.1, 1.0, 0.2, 1.0);
  double b = doeblin_tv_bound(0.0, 1.0, 0.1, 1.0, 0.2, 1.0);
  CHECK(a == doctest::Approx(b).epsilon(1e-8));
  // Brownian hitting: 1 - 2 Phi(-(w + (t0 + gbar) c_inf) / (2 sigma t0^{1/2}))
  CHECK(b == doctest::Approx(1.0 - 2.0 * normal_cdf(-0.61)).epsilon(1e-14));
  TauMajorant tau(0.1, 0.5, 1.0, 0.1);
  // the uniform bound dominates the lemma bound at K = ceil(t0 / gamma) for every gamma <= gamma_bar
  for (double t0 : {0.3, 1.0, 4.0})
    for (double g : {0.1, 0.037, 0.01, 0.001}) {
      long K = static_cast<long>(std::ceil(t0 / g - 1e-12));
      for (double w : {0.0, 0.5, 3.0})
        CHECK(doeblin_tv_bound(0.1, 1.0, 0.1, t0, 0.2, w) >= coalescence_tv_bound(tau, g, 0.2, 1.0, w, K - 1));
    }
  // the printed form is smaller than the lemma bound, so it cannot follow from it
  CHECK(doeblin_tv_bound_printed(0.1, 1.0, 0.01, 0.5, 0.2, 1.0) <
        coalescence_tv_bound(TauMajorant(0.1, 0.5, 1.0, 0.01), 0.01, 0.2, 1.0, 1.0, 49));
  double prev = 1.0;
  for (long k = 1; k < 400; k += 20) {
    double c = coalescence_tv_bound(tau, 0.01, 0.2, 1.0, 1.0, k);
    CHECK(c < prev);
    CHECK(c > 0.0);
    prev = c;
  }
}

TEST_CASE("bound report")
{
  BoundReport r = make_bound_report(set_a(), 0.05, 0.5, 1.0, 0.5, 2);
  std::ostringstream os;
  r.write(os);
  std::string s = os.str();
  CHECK(s.find("c1 = ") != std::string::npos);
  CHECK(s.find("c2 = ") != std::string::npos);
  CHECK(r.t11.c1 == doctest::Approx(golden::kA_c1).epsilon(kRel));
  CHECK(r.t13_linear.log_rho == doctest::Approx(golden::kA_t13_log_rho).epsilon(kRel));
  CHECK(r.appendix_a.has_value());
}
