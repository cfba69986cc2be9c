#include "sticky/errors.hpp"
#include "sticky/limit_study.hpp"

#include <doctest.h>

#include <cmath>

using namespace sticky;

namespace {

RefinementSpec small_spec()
{
  RefinementSpec s;
  s.kappa = [](double w) { return -0.5 * w; };
  s.lip_kappa = 0.5;
  s.c_inf = 0.2;
  s.w0 = 1.0;
  s.times = {0.5, 1.0, 2.0};
  s.gamma_ladder = {0.1, 0.05, 0.025};
  s.n_paths = 4000;
  return s;
}

} // namespace

TEST_CASE("piecewise-linear interpolation")
{
  std::vector<double> nodes = {0.0, 1.0, 3.0, 2.0};
  CHECK(interpolate(nodes, 0.5, 0.0) == 0.0);
  CHECK(interpolate(nodes, 0.5, 0.25) == doctest::Approx(0.5));
  CHECK(interpolate(nodes, 0.5, 0.75) == doctest::Approx(2.0));
  CHECK(interpolate(nodes, 0.5, 1.5) == 2.0);
  CHECK_THROWS_AS(interpolate(nodes, 0.5, 1.6), ParameterError);
  InterpolatedPath p(nodes, 0.5);
  CHECK(p.horizon() == 1.5);
  CHECK(p.nearest_node(0.2) == 0.0);
  CHECK(p.nearest_node(0.25) == 1.0);
  CHECK(p.nearest_node(0.9) == 3.0);
}

TEST_CASE("ladder validation")
{
  RefinementSpec s = small_spec();
  RandomStream r(1, 0);
  s.gamma_ladder = {0.1, 0.03};
  CHECK_THROWS_AS(refinement_study(s, r), ParameterError);
  s.gamma_ladder = {0.05, 0.1};
  CHECK_THROWS_AS(refinement_study(s, r), ParameterError);
  s.gamma_ladder = {0.1, 0.05};
  s.kappa = [](double w) { return 1.0 - w; };
  CHECK_THROWS_AS(refinement_study(s, r), ParameterError);
}

TEST_CASE("means follow the exact linear recursion")
{
  // tau(w) = (1 - gamma / 2) w, so m_{k+1} = (1 - gamma / 2) m_k + gamma c_inf
  RefinementSpec s = small_spec();
  auto res = refinement_study(s, RandomStream(3, 0));
  REQUIRE(res.levels.size() == 3);
  for (const auto& lv : res.levels) {
    for (std::size_t j = 0; j < s.times.size(); ++j) {
      long k = std::lround(s.times[j] / lv.gamma);
      double m = s.w0;
      for (long i = 0; i < k; ++i)
        m = (1.0 - lv.gamma / 2) * m + lv.gamma * s.c_inf;
      CHECK(std::abs(lv.mean[j] - m) < 4 * lv.mean_se[j]);
      CHECK(lv.p_zero[j] > 0.0);
      CHECK(lv.second[j] >= lv.mean[j] * lv.mean[j]);
    }
    CHECK(lv.sup_fourth >= std::pow(s.w0, 4));
  }
}

TEST_CASE("results do not depend on the thread count")
{
  RefinementSpec s = small_spec();
  s.n_paths = 500;
  auto a = refinement_study(s, RandomStream(4, 0), 1);
  auto b = refinement_study(s, RandomStream(4, 0), 3);
  for (std::size_t l = 0; l < a.levels.size(); ++l) {
    CHECK(a.levels[l].mean == b.levels[l].mean);
    CHECK(a.levels[l].p_zero == b.levels[l].p_zero);
    CHECK(a.levels[l].sup_fourth == b.levels[l].sup_fourth);
  }
}

TEST_CASE("levels share Brownian increments")
{
  // with shared increments the level-to-level differences of E[W_t] are far
  // smaller than the single-level standard errors
  RefinementSpec s = small_spec();
  auto r = refinement_study(s, RandomStream(6, 0));
  double gap = std::abs(r.levels[2].mean[2] - r.levels[1].mean[2]);
  CHECK(gap < r.levels[2].mean_se[2]);
}
