#include "sticky/sticky_chain.hpp"

#include "sticky/errors.hpp"
#include "sticky/normal.hpp"

#include <cmath>
#include <limits>

namespace sticky {

void StickyParams::validate() const
{
  if (!(gamma > 0.0) || gamma > majorant.gamma_max())
    throw ParameterError("gamma outside (0, gamma_max]");
  if (!(sigma > 0.0))
    throw ParameterError("sigma must be positive");
  if (!(c_inf >= 0.0))
    throw ParameterError("c_inf must be non-negative");
}

double StickyParams::shifted_tau(double w) const
{
  return majorant(gamma, w) + gamma * c_inf;
}

double sticky_step(const StickyParams& p, double w, double g, double u)
{
  if (!(w >= 0.0))
    throw ParameterError("w must be non-negative");
  const double v = p.sigma * p.sigma * p.gamma;
  double s = p.shifted_tau(w);
  if (u < merge_probability(s, g, v))
    return 0.0;
  return s - 2.0 * std::sqrt(v) * g;
}

double mass_at_zero(const StickyParams& p, double w)
{
  if (!(w >= 0.0))
    throw ParameterError("w must be non-negative");
  return 2.0 * normal_cdf(-p.shifted_tau(w) / (2.0 * p.sigma * std::sqrt(p.gamma)));
}

double one_step_mean(const StickyParams& p, double w)
{
  if (!(w >= 0.0))
    throw ParameterError("w must be non-negative");
  return p.shifted_tau(w);
}

double one_step_exp_moment(const StickyParams& p, double w, double a)
{
  if (!(w >= 0.0))
    throw ParameterError("w must be non-negative");
  if (!(a > 0.0))
    throw ParameterError("a must be positive");
  const double s = p.shifted_tau(w);
  const double sg = p.sigma * std::sqrt(p.gamma);
  const double t = s / (2.0 * sg);
  const double b = 2.0 * sg * a;
  const double c = 2.0 * a * a * sg * sg;
  if (c + a * s > 700.0)
    return std::numeric_limits<double>::infinity();
  // e^{as}(Phi(t+b) - Phi(b-t)) + 2 sinh(as) Phi(b-t) = e^{as} Phi(t+b) - e^{-as} Phi(b-t)
  double pos = std::exp(c + a * s) * normal_cdf(t + b);
  double neg = std::exp(c - a * s) * normal_cdf(b - t);
  return (pos - neg) - (1.0 - 2.0 * normal_cdf(-t));
}

std::vector<double> sticky_trajectory(const StickyParams& p, double w0, long n_steps, RandomStream& rng)
{
  if (n_steps < 0)
    throw ParameterError("n_steps must be >= 0");
  p.validate();
  std::vector<double> w(n_steps + 1);
  w[0] = w0;
  for (long k = 0; k < n_steps; ++k) {
    double g = rng.gaussian();
    double u = rng.uniform();
    w[k + 1] = sticky_step(p, w[k], g, u);
  }
  return w;
}

std::vector<double> sticky_trajectory(const StickyParams& p, double w0, const std::vector<CouplingStepRecord>& records)
{
  p.validate();
  std::vector<double> w(records.size() + 1);
  w[0] = w0;
  for (std::size_t k = 0; k < records.size(); ++k)
    w[k + 1] = sticky_step(p, w[k], records[k].scalar_g, records[k].uniform_u);
  return w;
}

namespace {

struct BatchMeans
{
  explicit BatchMeans(long n, int batches)
    : batch_len(n / batches)
    , n_batches(batches)
  {}
  long batch_len;
  int n_batches;
  double total = 0.0;
  double cur = 0.0;
  long in_batch = 0;
  std::vector<double> means;

  void add(double x)
  {
    total += x;
    cur += x;
    if (++in_batch == batch_len && static_cast<int>(means.size()) < n_batches) {
      means.push_back(cur / batch_len);
      cur = 0.0;
      in_batch = 0;
    }
  }
  double se() const
  {
    if (means.size() < 2)
      return std::numeric_limits<double>::quiet_NaN();
    double m = 0.0;
    for (double b : means)
      m += b;
    m /= means.size();
    double ss = 0.0;
    for (double b : means)
      ss += (b - m) * (b - m);
    return std::sqrt(ss / (means.size() - 1) / means.size());
  }
};

} // namespace

StickyStationaryEstimate estimate_stationary(const StickyParams& p, long burn_in, long n_samples, RandomStream& rng,
                                             const std::vector<double>& a_values, int n_batches)
{
  if (n_samples < 1)
    throw ParameterError("n_samples must be >= 1");
  if (burn_in < 0 || n_batches < 1)
    throw ParameterError("burn_in must be >= 0 and n_batches >= 1");
  p.validate();
  for (double a : a_values)
    if (!(a > 0.0))
      throw ParameterError("exponential moment orders must be positive");
  int nb = static_cast<int>(std::min<long>(n_batches, n_samples));
  double w = 0.0;
  for (long k = 0; k < burn_in; ++k) {
    double g = rng.gaussian();
    double u = rng.uniform();
    w = sticky_step(p, w, g, u);
  }
  BatchMeans atom(n_samples, nb), first(n_samples, nb);
  std::vector<BatchMeans> ex(a_values.size(), BatchMeans(n_samples, nb));
  for (long k = 0; k < n_samples; ++k) {
    double g = rng.gaussian();
    double u = rng.uniform();
    w = sticky_step(p, w, g, u);
    atom.add(w == 0.0 ? 1.0 : 0.0);
    first.add(w);
    for (std::size_t j = 0; j < a_values.size(); ++j)
      ex[j].add(std::expm1(a_values[j] * w));
  }
  StickyStationaryEstimate est;
  est.n_samples = n_samples;
  est.burn_in = burn_in;
  est.atom_at_zero = atom.total / n_samples;
  est.first_moment = first.total / n_samples;
  est.se_atom = atom.se();
  est.se_first = first.se();
  est.a_values = a_values;
  for (auto& e : ex) {
    est.exp_moment.push_back(e.total / n_samples);
    est.se_exp.push_back(e.se());
  }
  return est;
}

} // namespace sticky
