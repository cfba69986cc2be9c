#include "sticky/limit_study.hpp"

#include "sticky/errors.hpp"
#include "sticky/parallel.hpp"

#include <cmath>
#include <tuple>

namespace sticky {

InterpolatedPath::InterpolatedPath(std::vector<double> nodes, double gamma)
  : nodes_(std::move(nodes))
  , gamma_(gamma)
{
  if (nodes_.empty() || !(gamma > 0.0))
    throw ParameterError("interpolation needs nodes and gamma > 0");
}

double InterpolatedPath::operator()(double t) const
{
  if (!(t >= 0.0))
    throw ParameterError("t must be non-negative");
  const double x = t / gamma_;
  const std::size_t last = nodes_.size() - 1;
  if (x > static_cast<double>(last) * (1.0 + 1e-12))
    throw ParameterError("t beyond the simulated horizon");
  std::size_t k = static_cast<std::size_t>(std::floor(x));
  if (k >= last)
    return nodes_[last];
  const double w = x - static_cast<double>(k);
  if (w == 0.0)
    return nodes_[k];
  return nodes_[k] + w * (nodes_[k + 1] - nodes_[k]);
}

double InterpolatedPath::nearest_node(double t) const
{
  std::size_t k = static_cast<std::size_t>(std::floor(t / gamma_ + 0.5));
  return nodes_[std::min(k, nodes_.size() - 1)];
}

double interpolate(const std::vector<double>& nodes, double gamma, double t)
{
  return InterpolatedPath(nodes, gamma)(t);
}

namespace {

struct PathOut
{
  std::vector<double> zero, value;
  std::vector<double> sup4;
};

} // namespace

LimitFunctionals refinement_study(const RefinementSpec& spec, const RandomStream& rng, int threads)
{
  const auto& lad = spec.gamma_ladder;
  if (lad.empty() || spec.n_paths < 2 || spec.times.empty() || !spec.kappa)
    throw ParameterError("refinement_study: empty ladder, times, kappa or n_paths < 2");
  std::vector<int> factor(lad.size());
  const double fine = lad.back();
  for (std::size_t l = 0; l < lad.size(); ++l) {
    if (l > 0 && !(lad[l] < lad[l - 1]))
      throw ParameterError("gamma ladder must be strictly decreasing");
    double r = lad[l] / fine;
    factor[l] = static_cast<int>(std::lround(r));
    if (std::abs(r - factor[l]) > 1e-9 * r || (factor[l] & (factor[l] - 1)) != 0)
      throw ParameterError("gamma ladder must be dyadic (each level half the previous)");
  }
  double T = 0.0;
  for (double t : spec.times) {
    if (!(t >= 0.0))
      throw ParameterError("times must be non-negative");
    T = std::max(T, t);
  }
  const long n_fine = static_cast<long>(std::ceil(T / fine - 1e-9));
  const std::size_t L = lad.size(), nt = spec.times.size();

  std::vector<StickyParams> params;
  for (double g : lad)
    params.push_back({g, spec.sigma, spec.c_inf, TauMajorant::from_kappa(spec.kappa, spec.lip_kappa, lad.front())});

  std::vector<PathOut> out(spec.n_paths);
  parallel_for(spec.n_paths, threads, [&](long p) {
    RandomStream r = rng.substream(static_cast<std::uint64_t>(p));
    std::vector<double> g(n_fine), u(n_fine);
    for (long k = 0; k < n_fine; ++k) {
      g[k] = r.gaussian();
      u[k] = r.uniform();
    }
    PathOut& o = out[p];
    o.zero.resize(L * nt);
    o.value.resize(L * nt);
    o.sup4.resize(L);
    for (std::size_t l = 0; l < L; ++l) {
      const int f = factor[l];
      const long n = n_fine / f;
      std::vector<double> w(n + 1);
      w[0] = spec.w0;
      const double scale = 1.0 / std::sqrt(static_cast<double>(f));
      double s4 = spec.w0 * spec.w0 * spec.w0 * spec.w0;
      for (long k = 0; k < n; ++k) {
        double gs = 0.0;
        for (int i = 0; i < f; ++i)
          gs += g[k * f + i];
        w[k + 1] = sticky_step(params[l], w[k], gs * scale, u[k * f]);
        s4 = std::max(s4, std::pow(w[k + 1], 4));
      }
      InterpolatedPath path(std::move(w), lad[l]);
      for (std::size_t j = 0; j < nt; ++j) {
        o.value[l * nt + j] = path(spec.times[j]);
        o.zero[l * nt + j] = path.nearest_node(spec.times[j]) == 0.0 ? 1.0 : 0.0;
      }
      o.sup4[l] = s4;
    }
  });

  LimitFunctionals res;
  res.times = spec.times;
  const double N = static_cast<double>(spec.n_paths);
  auto mean_se = [N](double s, double ss) {
    double m = s / N;
    double var = std::max(0.0, (ss - N * m * m) / (N - 1.0));
    return std::pair<double, double>(m, std::sqrt(var / N));
  };
  for (std::size_t l = 0; l < L; ++l) {
    LevelFunctionals lf;
    lf.gamma = lad[l];
    double s4 = 0.0, s44 = 0.0;
    for (const auto& o : out) {
      s4 += o.sup4[l];
      s44 += o.sup4[l] * o.sup4[l];
    }
    std::tie(lf.sup_fourth, lf.sup_fourth_se) = mean_se(s4, s44);
    for (std::size_t j = 0; j < nt; ++j) {
      double sz = 0, szz = 0, sv = 0, svv = 0, s2 = 0, s22 = 0;
      for (const auto& o : out) {
        double z = o.zero[l * nt + j], v = o.value[l * nt + j];
        sz += z;
        szz += z * z;
        sv += v;
        svv += v * v;
        s2 += v * v;
        s22 += v * v * v * v;
      }
      auto [pz, pzs] = mean_se(sz, szz);
      auto [mv, mvs] = mean_se(sv, svv);
      auto [m2, m2s] = mean_se(s2, s22);
      lf.p_zero.push_back(pz);
      lf.p_zero_se.push_back(pzs);
      lf.mean.push_back(mv);
      lf.mean_se.push_back(mvs);
      lf.second.push_back(m2);
      lf.second_se.push_back(m2s);
    }
    res.levels.push_back(std::move(lf));
  }
  return res;
}

} // namespace sticky
