#include "sticky/experiments.hpp"

#include "sticky/bounds.hpp"
#include "sticky/coupling.hpp"
#include "sticky/errors.hpp"
#include "sticky/metrics.hpp"
#include "sticky/parallel.hpp"

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <limits>
#include <set>
#include <sstream>

namespace sticky {

namespace {

struct Moments
{
  double s = 0.0, ss = 0.0;
  long n = 0;
  void add(double x)
  {
    s += x;
    ss += x * x;
    ++n;
  }
  double mean() const { return s / n; }
  double se() const
  {
    double m = mean();
    return std::sqrt(std::max(0.0, (ss - n * m * m) / (n - 1.0)) / n);
  }
};

std::string fmt(double x)
{
  char buf[64];
  auto r = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, r.ptr);
}

} // namespace

// ---------------------------------------------------------------------------

double KernelCheckRow::z() const
{
  if (empirical == exact)
    return 0.0;
  return (empirical - exact) / se;
}

std::vector<KernelCheckRow> kernel_check(const AssumptionConstants& c, double sigma, double gamma_max,
                                         const std::vector<double>& ws, const std::vector<double>& gammas, long n,
                                         double a, const RandomStream& rng, int threads)
{
  if (n < 2)
    throw ParameterError("kernel_check needs n >= 2");
  c.validate();
  const long cells = static_cast<long>(ws.size() * gammas.size());
  std::vector<std::vector<KernelCheckRow>> out(cells);
  parallel_for(cells, threads, [&](long cell) {
    const double w = ws[cell / gammas.size()];
    const double g = gammas[cell % gammas.size()];
    StickyParams p{g, sigma, c.c_inf, TauMajorant(c, gamma_max)};
    p.validate();
    RandomStream r = rng.substream(static_cast<std::uint64_t>(cell));
    Moments atom, mean, expm;
    for (long i = 0; i < n; ++i) {
      double gg = r.gaussian();
      double u = r.uniform();
      double w1 = sticky_step(p, w, gg, u);
      atom.add(w1 == 0.0 ? 1.0 : 0.0);
      mean.add(w1);
      expm.add(std::expm1(a * w1));
    }
    // binomial SE under the exact p; the sample SE is 0 when no draw hits the atom
    const double p0 = mass_at_zero(p, w);
    out[cell] = {{w, g, "atom", p0, atom.mean(), std::sqrt(p0 * (1.0 - p0) / static_cast<double>(n))},
                 {w, g, "mean", one_step_mean(p, w), mean.mean(), mean.se()},
                 {w, g, "exp_moment", one_step_exp_moment(p, w, a), expm.mean(), expm.se()}};
  });
  std::vector<KernelCheckRow> rows;
  for (auto& v : out)
    rows.insert(rows.end(), v.begin(), v.end());
  return rows;
}

DominationSummary coupling_domination(const FarModel& model, double gamma, const Eigen::VectorXd& x0,
                                      const Eigen::VectorXd& x0_tilde, long n_traj, long n_steps, double w_bump,
                                      const RandomStream& rng, int threads)
{
  model.validate();
  model.check_gamma(gamma);
  if (!model.constants)
    throw ParameterError("coupling_domination needs declared constants");
  if (n_traj < 2 || n_steps < 1 || !(w_bump > 0.0))
    throw ParameterError("coupling_domination: n_traj >= 2, n_steps >= 1, w_bump > 0");
  const StickyParams p{gamma, model.sigma, model.constants->c_inf, model.majorant()};
  const double w0 = (x0 - x0_tilde).norm();
  const std::size_t K = static_cast<std::size_t>(n_steps) + 1;

  struct PerTraj
  {
    long dom = 0, mono = 0;
    double excess = -std::numeric_limits<double>::infinity();
    std::vector<double> dist, x, xt;
  };
  std::vector<PerTraj> out(n_traj);
  parallel_for(n_traj, threads, [&](long t) {
    RandomStream r = rng.substream(static_cast<std::uint64_t>(t));
    CoupledTrajectory tr = coupled_trajectory(model, gamma, x0, x0_tilde, n_steps, r);
    std::vector<double> W = sticky_trajectory(p, w0, tr.records);
    std::vector<double> Wb = sticky_trajectory(p, w0 + w_bump, tr.records);
    PerTraj& o = out[t];
    o.dist.resize(K);
    if (model.dim == 1) {
      o.x.resize(K);
      o.xt.resize(K);
    }
    for (std::size_t k = 0; k < K; ++k) {
      double d = tr.states[k].distance();
      o.dist[k] = d;
      o.excess = std::max(o.excess, d - W[k]);
      if (d > W[k] + 1e-9 * (1.0 + W[k]))
        ++o.dom;
      if (Wb[k] < W[k] - 1e-12 * (1.0 + W[k]))
        ++o.mono;
      if (model.dim == 1) {
        o.x[k] = tr.states[k].x(0);
        o.xt[k] = tr.states[k].x_tilde(0);
      }
    }
  });

  DominationSummary s;
  s.dim = model.dim;
  s.n_traj = n_traj;
  s.n_steps = n_steps;
  s.max_excess = -std::numeric_limits<double>::infinity();
  for (const auto& o : out) {
    s.domination_violations += o.dom;
    s.monotonicity_violations += o.mono;
    s.max_excess = std::max(s.max_excess, o.excess);
  }
  s.n_checks = n_traj * static_cast<long>(K);
  for (std::size_t k = 0; k < K; ++k) {
    Moments m;
    for (const auto& o : out)
      m.add(o.dist[k]);
    s.mean_distance.push_back(m.mean());
    s.mean_distance_se.push_back(m.se());
    if (model.dim == 1) {
      std::vector<double> a(n_traj), b(n_traj);
      Moments ma, mb;
      for (long t = 0; t < n_traj; ++t) {
        a[t] = out[t].x[k];
        b[t] = out[t].xt[k];
        ma.add(a[t]);
        mb.add(b[t]);
      }
      s.w1_marginal.push_back(w1_empirical_1d(Sample1D(std::move(a)), Sample1D(std::move(b))));
      s.w1_marginal_se.push_back(std::hypot(ma.se(), mb.se()));
    }
  }
  return s;
}

CoalescenceResult coalescence_study(const StickyParams& p, double w, double w_tilde, double t0, double gamma_bar,
                                    long n_paths, const RandomStream& rng, int threads)
{
  p.validate();
  if (!(t0 > 0.0) || n_paths < 2 || !(w >= 0.0) || !(w_tilde >= 0.0) || !(gamma_bar >= p.gamma))
    throw ParameterError("coalescence_study: t0 > 0, n_paths >= 2, w, w_tilde >= 0, gamma_bar >= gamma");
  CoalescenceResult res;
  res.t0 = t0;
  res.k = static_cast<long>(std::ceil(t0 / p.gamma - 1e-12));
  res.w = w;
  res.w_tilde = w_tilde;
  std::vector<char> apart(n_paths);
  parallel_for(n_paths, threads, [&](long i) {
    RandomStream r = rng.substream(static_cast<std::uint64_t>(i));
    double a = w, b = w_tilde;
    for (long k = 0; k < res.k; ++k) {
      double g = r.gaussian();
      double u = r.uniform();
      a = sticky_step(p, a, g, u);
      b = sticky_step(p, b, g, u);
    }
    apart[i] = a != b;
  });
  Moments m;
  for (char c : apart)
    m.add(c ? 1.0 : 0.0);
  res.non_coalesced = m.mean();
  res.se = m.se();
  const double wmax = std::max(w, w_tilde);
  res.doeblin_bound = doeblin_tv_bound(p.majorant.lip_L(), p.sigma, gamma_bar, t0, p.c_inf, wmax);
  res.printed_bound = doeblin_tv_bound_printed(p.majorant.lip_L(), p.sigma, gamma_bar, t0, p.c_inf, wmax);
  res.lemma_bound = coalescence_tv_bound(p.majorant, p.gamma, p.c_inf, p.sigma, wmax, res.k - 1);
  return res;
}

Example14Result example14(double rho, double a, double gamma, double sigma, long n, long burn_in, long thin,
                          const RandomStream& rng, int threads)
{
  if (n < 100 || burn_in < 0 || thin < 1)
    throw ParameterError("example14: n >= 100, burn_in >= 0, thin >= 1");
  FarModel model = autoregressive_model(1, rho, a, sigma, gamma);
  const double s = sigma * std::sqrt(gamma);
  std::vector<std::vector<double>> draws(2, std::vector<double>(n));
  parallel_for(2, threads, [&](long which) {
    const DriftMap& T = which == 0 ? model.drift_map : model.perturbed_map;
    RandomStream r = rng.substream(static_cast<std::uint64_t>(which));
    Eigen::VectorXd x = Eigen::VectorXd::Zero(1);
    const long total = burn_in + n * thin;
    for (long it = 1; it <= total; ++it) {
      x = T(gamma, x);
      x(0) += s * r.gaussian();
      if (it > burn_in && (it - burn_in) % thin == 0)
        draws[which][(it - burn_in) / thin - 1] = x(0);
    }
  });
  Example14Result res{rho, a, gamma, sigma, n};
  Ar1Stationary st = ar1_stationary(rho, gamma, sigma, a);
  res.std_derived = std::sqrt(st.variance);
  res.w1_exact = std::abs(st.mean_perturbed - st.mean);
  res.tv_exact = gaussian_tv_same_var(res.w1_exact, res.std_derived);
  Sample1D x(std::move(draws[0])), xt(std::move(draws[1]));
  res.w1_empirical = w1_empirical_1d(x, xt);
  res.tv_kde = tv_kde(x, xt);
  return res;
}

std::vector<BiasSweepRow> ode_bias_sweep(const BiasSweepSpec& spec, std::uint64_t seed, int threads)
{
  if (spec.replications < 1 || spec.h.empty())
    throw ParameterError("ode_bias_sweep: replications >= 1 and a non-empty h list required");
  PosteriorProblem problem = synth_data(spec.synth);
  const int d = problem.model->param_dim();
  std::vector<int> comps = spec.components;
  if (comps.empty())
    for (int i = 0; i < d; ++i)
      comps.push_back(i);
  for (int c : comps)
    if (c < 0 || c >= d)
      throw ParameterError("ode_bias_sweep: component index out of range");

  const long per_rep = 1 + static_cast<long>(spec.h.size());
  std::vector<Eigen::MatrixXd> chains(spec.replications * per_rep);
  parallel_for(static_cast<long>(chains.size()), threads, [&](long unit) {
    const long rep = unit / per_rep, j = unit % per_rep;
    UlaConfig cfg;
    cfg.gamma = spec.gamma;
    cfg.n_iter = spec.n_iter;
    cfg.burn_in = spec.burn_in;
    cfg.seed = seed;
    cfg.stream = static_cast<std::uint64_t>(rep);
    cfg.theta0 = spec.theta0 ? *spec.theta0 : problem.theta_true;
    cfg.source = j == 0 ? spec.reference : SolverChoice::euler(spec.h[j - 1]);
    chains[unit] = ula_sample(problem, cfg);
  });

  std::vector<BiasSweepRow> rows;
  for (int rep = 0; rep < spec.replications; ++rep) {
    const Eigen::MatrixXd& ref = chains[rep * per_rep];
    for (std::size_t j = 0; j < spec.h.size(); ++j) {
      const Eigen::MatrixXd& ch = chains[rep * per_rep + 1 + j];
      for (int c : comps) {
        std::vector<double> a(ref.col(c).data(), ref.col(c).data() + ref.rows());
        std::vector<double> b(ch.col(c).data(), ch.col(c).data() + ch.rows());
        rows.push_back({rep, spec.h[j], c, tv_kde(Sample1D(std::move(a)), Sample1D(std::move(b)))});
      }
    }
  }
  return rows;
}

// ---------------------------------------------------------------------------

namespace {

const std::map<std::string, std::set<std::string>>& schema()
{
  static const std::map<std::string, std::set<std::string>> s = {
    {"experiment", {"kind", "seed", "out", "threads"}},
    {"model",
     {"family", "dim", "rho", "shift", "sigma", "gamma_max", "L", "m", "R1", "c_inf", "T_inf", "ode", "x0",
      "x0_tilde"}},
    {"run",
     {"gamma", "gammas", "w", "w_tilde", "w0", "w_bump", "a", "n_samples", "n_steps", "n_paths", "n_traj",
      "n_iter", "burn_in", "thin", "t0", "h", "h_ref", "replications", "components", "times", "kappa_slope",
      "delta_bar", "dims", "k", "dist0", "solver", "theta0", "max_z"}},
  };
  return s;
}

void check_key(const std::string& key)
{
  auto dot = key.find('.');
  if (dot == std::string::npos)
    throw ConfigError(key, "entry outside a section");
  auto sec = schema().find(key.substr(0, dot));
  if (sec == schema().end())
    throw ConfigError(key, "unknown section");
  if (!sec->second.count(key.substr(dot + 1)))
    throw ConfigError(key, "unknown key");
}

std::string trim(const std::string& s)
{
  auto b = s.find_first_not_of(" \t\r\n\"");
  auto e = s.find_last_not_of(" \t\r\n\"");
  return b == std::string::npos ? "" : s.substr(b, e - b + 1);
}

double parse_double(const std::string& key, const std::string& text)
{
  const std::string t = trim(text);
  double v = 0.0;
  auto r = std::from_chars(t.data(), t.data() + t.size(), v);
  if (r.ec != std::errc() || r.ptr != t.data() + t.size() || !std::isfinite(v))
    throw ConfigError(key, "expected a finite number, got '" + text + "'");
  return v;
}

} // namespace

ExperimentConfig ExperimentConfig::parse(const std::string& text)
{
  namespace pt = boost::property_tree;
  pt::ptree tree;
  std::istringstream is(text);
  try {
    pt::ini_parser::read_ini(is, tree);
  } catch (const pt::ini_parser_error& e) {
    throw ConfigError("line " + std::to_string(e.line()), e.message());
  }
  ExperimentConfig c;
  for (const auto& [sec, body] : tree) {
    if (body.empty() && !body.data().empty())
      throw ConfigError(sec, "entry outside a section");
    if (!schema().count(sec))
      throw ConfigError(sec, "unknown section");
    for (const auto& [key, val] : body)
      c.set(sec + "." + key, val.data());
  }
  return c;
}

ExperimentConfig ExperimentConfig::load(const std::string& path)
{
  std::ifstream in(path);
  if (!in)
    throw ConfigError("--config", "cannot read '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse(ss.str());
}

void ExperimentConfig::set(const std::string& key, const std::string& value)
{
  check_key(key);
  values_[key] = trim(value);
}

std::string ExperimentConfig::get_string(const std::string& key, const std::string& fallback) const
{
  auto it = values_.find(key);
  std::string v = it == values_.end() ? fallback : it->second;
  used_[key] = v;
  return v;
}

double ExperimentConfig::get_double(const std::string& key, double fallback) const
{
  auto it = values_.find(key);
  double v = it == values_.end() ? fallback : parse_double(key, it->second);
  used_[key] = fmt(v);
  return v;
}

long ExperimentConfig::get_long(const std::string& key, long fallback) const
{
  auto it = values_.find(key);
  long v = fallback;
  if (it != values_.end()) {
    double d = parse_double(key, it->second);
    if (d != std::floor(d) || std::abs(d) > 9e15)
      throw ConfigError(key, "expected an integer, got '" + it->second + "'");
    v = static_cast<long>(d);
  }
  used_[key] = std::to_string(v);
  return v;
}

std::vector<double> ExperimentConfig::get_doubles(const std::string& key, const std::vector<double>& fallback) const
{
  auto it = values_.find(key);
  std::vector<double> v = fallback;
  if (it != values_.end()) {
    v.clear();
    std::stringstream ss(it->second);
    std::string item;
    while (std::getline(ss, item, ','))
      v.push_back(parse_double(key, item));
    if (v.empty())
      throw ConfigError(key, "empty list");
  }
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i)
    s += (i ? "," : "") + fmt(v[i]);
  used_[key] = s;
  return v;
}

std::uint64_t ExperimentConfig::hash() const
{
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (const auto& [k, v] : used_) {
    for (char ch : k + "=" + v + "\n") {
      h ^= static_cast<unsigned char>(ch);
      h *= 0x100000001b3ULL;
    }
  }
  return h;
}

void ResultTable::add(std::vector<Cell> row)
{
  if (row.size() != columns.size())
    throw ParameterError("ResultTable row width does not match the header");
  rows.push_back(std::move(row));
}

void ResultTable::write_csv(std::ostream& os) const
{
  for (std::size_t i = 0; i < columns.size(); ++i)
    os << (i ? "," : "") << columns[i];
  os << "\n";
  for (const auto& r : rows) {
    for (std::size_t i = 0; i < r.size(); ++i) {
      if (i)
        os << ",";
      if (auto p = std::get_if<double>(&r[i]))
        os << fmt(*p);
      else if (auto q = std::get_if<long>(&r[i]))
        os << *q;
      else
        os << std::get<std::string>(r[i]);
    }
    os << "\n";
  }
}

std::vector<std::string> experiment_kinds()
{
  return {"validate-kernel", "coupling-domination", "bounds-report", "example14", "ode-bias-sweep",
          "limit-study",     "simulate-coupling",   "simulate-sticky", "ode-posterior"};
}

std::string resolve_out_dir(const ExperimentConfig& config, const RunOptions& options)
{
  if (options.out_dir)
    return *options.out_dir;
  if (config.has("experiment.out"))
    return config.get_string("experiment.out", ".");
  if (const char* env = std::getenv("STICKY_OUT_DIR"); env && *env)
    return env;
  return ".";
}

namespace {

struct Ctx
{
  const ExperimentConfig& cfg;
  std::uint64_t seed;
  int threads;
  ResultTable table;
  std::ostringstream summary;
  int exit_code = 0;

  double d(const std::string& k, double f) const { return cfg.get_double(k, f); }
  long l(const std::string& k, long f) const { return cfg.get_long(k, f); }
  std::vector<double> v(const std::string& k, const std::vector<double>& f) const { return cfg.get_doubles(k, f); }
  long positive(const std::string& k, long f) const
  {
    long x = l(k, f);
    if (x < 1)
      throw ConfigError(k, "must be >= 1");
    return x;
  }
  RandomStream rng(std::uint64_t stream) const { return RandomStream(seed, stream); }
};

AssumptionConstants read_constants(const Ctx& c, AssumptionConstants def)
{
  AssumptionConstants a{c.d("model.L", def.lip_L), c.d("model.m", def.contraction_m), c.d("model.R1", def.radius_R1),
                        c.d("model.c_inf", def.c_inf)};
  try {
    a.validate();
  } catch (const ParameterError& e) {
    throw ConfigError("model.L/m/R1/c_inf", e.what());
  }
  return a;
}

FarModel read_far_model(const Ctx& c, double gamma)
{
  const std::string fam = c.cfg.get_string("model.family", "autoregressive");
  const int dim = static_cast<int>(c.positive("model.dim", 1));
  const double sigma = c.d("model.sigma", 1.0);
  const double gmax = c.d("model.gamma_max", std::max(gamma, 0.1));
  if (fam == "autoregressive")
    return autoregressive_model(dim, c.d("model.rho", 1.0), c.d("model.shift", 0.5), sigma, gmax);
  if (fam == "euler_gradient") {
    const double m = c.d("model.m", 1.0), shift = c.d("model.shift", 0.5);
    Eigen::VectorXd u = Eigen::VectorXd::Constant(dim, 1.0 / std::sqrt(static_cast<double>(dim)));
    return euler_gradient_model(
      dim, sigma, gmax, [m](const Eigen::VectorXd& x) -> Eigen::VectorXd { return m * x; },
      [m, shift, u](const Eigen::VectorXd& x) -> Eigen::VectorXd { return m * x - (m * shift) * u; },
      AssumptionConstants{0.0, m, 0.0, m * std::abs(shift)});
  }
  throw ConfigError("model.family", "expected autoregressive or euler_gradient for this kind, got '" + fam + "'");
}

SynthSpec read_synth(const Ctx& c)
{
  const std::string ode = c.cfg.get_string("model.ode", "van_der_pol");
  if (ode == "van_der_pol")
    return SynthSpec::van_der_pol_defaults();
  if (ode == "lotka_volterra")
    return SynthSpec::lotka_volterra_defaults();
  throw ConfigError("model.ode", "expected van_der_pol or lotka_volterra, got '" + ode + "'");
}

void run_validate_kernel(Ctx& c)
{
  AssumptionConstants k = read_constants(c, {0.1, 0.5, 1.0, 0.2});
  const double sigma = c.d("model.sigma", 1.0);
  const double gmax = c.d("model.gamma_max", 0.1);
  auto ws = c.v("run.w", {0.0, 0.25, 0.5, 1.0, 2.0});
  auto gs = c.v("run.gammas", {0.005, 0.01, 0.02, 0.05, 0.1});
  const long n = c.positive("run.n_samples", 100000);
  const double a = c.d("run.a", 0.5);
  const double max_z = c.d("run.max_z", 4.0);
  auto rows = kernel_check(k, sigma, gmax, ws, gs, n, a, c.rng(0x4b45524e), c.threads);
  c.table.columns = {"w", "gamma", "functional", "exact", "empirical", "stderr", "z"};
  long bad = 0;
  double worst = 0.0;
  for (const auto& r : rows) {
    c.table.add({r.w, r.gamma, r.functional, r.exact, r.empirical, r.se, r.z()});
    worst = std::max(worst, std::abs(r.z()));
    bad += std::abs(r.z()) > max_z;
  }
  c.summary << "kernel identities: " << rows.size() << " checks, max |z| = " << fmt(worst) << ", " << bad
            << " beyond " << fmt(max_z) << " SE\n";
  if (bad)
    c.exit_code = 1;
}

void run_coupling_domination(Ctx& c)
{
  const double gamma = c.d("run.gamma", 0.05);
  auto dims = c.v("run.dims", {1, 5});
  const long n_traj = c.positive("run.n_traj", 1000), n_steps = c.positive("run.n_steps", 1000);
  const double x0s = c.d("model.x0", 0.0), xts = c.d("model.x0_tilde", 2.0);
  const double bump = c.d("run.w_bump", 0.5);
  c.table.columns = {"dim", "k", "mean_distance", "stderr", "w1_bound"};
  for (std::size_t i = 0; i < dims.size(); ++i) {
    const int dim = static_cast<int>(dims[i]);
    if (dim < 1 || dims[i] != dim)
      throw ConfigError("run.dims", "dimensions must be positive integers");
    FarModel m = autoregressive_model(dim, c.d("model.rho", 1.0), c.d("model.shift", 0.5), c.d("model.sigma", 1.0),
                                      c.d("model.gamma_max", 0.1));
    Eigen::VectorXd x0 = Eigen::VectorXd::Constant(dim, x0s), xt = Eigen::VectorXd::Constant(dim, xts);
    auto s = coupling_domination(m, gamma, x0, xt, n_traj, n_steps, bump, c.rng(0x444f4d00 + i), c.threads);
    auto in = MomentBoundInputs::from(*m.constants, m.sigma, m.gamma_max, 1.0);
    for (long k = 0; k <= n_steps; ++k)
      c.table.add({static_cast<long>(dim), k, s.mean_distance[k], s.mean_distance_se[k],
                   w1_bound(in, gamma, k, (x0 - xt).norm())});
    c.summary << "dim " << dim << ": " << s.n_checks << " checks, domination violations "
              << s.domination_violations << ", monotonicity violations " << s.monotonicity_violations
              << ", max(|X - X~| - W) = " << fmt(s.max_excess) << "\n";
    if (s.domination_violations || s.monotonicity_violations)
      c.exit_code = 1;
  }
}

void run_bounds_report(Ctx& c)
{
  AssumptionConstants k = read_constants(c, {1.0, 0.5, 1.0, 0.1});
  MomentBoundInputs in = MomentBoundInputs::from(k, c.d("model.sigma", 1.0), c.d("model.gamma_max", 0.1), 1.0);
  in.delta_bar = c.cfg.has("run.delta_bar") ? c.d("run.delta_bar", 1.0) : default_delta_bar(in);
  std::optional<double> t0, tinf;
  if (c.cfg.has("run.t0"))
    t0 = c.d("run.t0", 1.0);
  if (c.cfg.has("model.T_inf"))
    tinf = c.d("model.T_inf", 0.0);
  BoundReport rep = make_bound_report(in, c.d("run.gamma", in.gamma_bar), c.d("run.a", 0.5), t0, tinf,
                                      static_cast<int>(c.positive("model.dim", 1)));
  std::ostringstream os;
  rep.write(os);
  c.summary << os.str();
  c.table.columns = {"key", "value"};
  std::istringstream is(os.str());
  for (std::string line; std::getline(is, line);) {
    auto eq = line.find(" = ");
    if (eq != std::string::npos)
      c.table.add({line.substr(0, eq), line.substr(eq + 3)});
  }
}

void run_example14(Ctx& c)
{
  auto r = example14(c.d("model.rho", 1.0), c.d("model.shift", 0.5), c.d("run.gamma", 0.05), c.d("model.sigma", 1.0),
                     c.positive("run.n_samples", 100000), c.l("run.burn_in", 2000), c.positive("run.thin", 100),
                     c.rng(0x45583134), c.threads);
  c.table.columns = {"quantity", "exact", "empirical"};
  c.table.add({std::string("w1"), r.w1_exact, r.w1_empirical});
  c.table.add({std::string("tv"), r.tv_exact, r.tv_kde});
  c.summary << "W1 exact " << fmt(r.w1_exact) << " empirical " << fmt(r.w1_empirical) << "\nTV exact "
            << fmt(r.tv_exact) << " kde " << fmt(r.tv_kde) << "\nstationary std " << fmt(r.std_derived) << "\n";
}

void run_ode_bias_sweep(Ctx& c)
{
  BiasSweepSpec s;
  s.synth = read_synth(c);
  double h_ref = 1e-3;
  std::vector<double> comps;
  if (s.synth.model == "lotka_volterra") {
    // stiff posterior: ULA needs gamma below 2 / lambda_max ~ 5.9e-6
    s.gamma = 2.5e-6;
    s.n_iter = 1000000;
    s.h = {0.08, 0.04, 0.02, 0.01};
    h_ref = 5e-3;
    comps = {0, 1};
  }
  s.gamma = c.d("run.gamma", s.gamma);
  s.n_iter = c.positive("run.n_iter", s.n_iter);
  s.burn_in = c.l("run.burn_in", s.burn_in);
  s.reference = SolverChoice::reference(c.d("run.h_ref", h_ref));
  s.h = c.v("run.h", s.h);
  for (double x : c.v("run.components", comps))
    s.components.push_back(static_cast<int>(x));
  s.replications = static_cast<int>(c.positive("run.replications", 1));
  auto rows = ode_bias_sweep(s, c.seed, c.threads);
  c.table.columns = {"h", "tv", "replication", "component"};
  for (const auto& r : rows)
    c.table.add({r.h, r.tv, static_cast<long>(r.replication), static_cast<long>(r.component)});
  c.summary << "ode-bias-sweep on " << s.synth.model << ": " << rows.size() << " TV estimates\n";
}

void run_limit_study(Ctx& c)
{
  RefinementSpec s;
  s.sigma = c.d("model.sigma", 1.0);
  s.c_inf = c.d("model.c_inf", 0.2);
  const double slope = c.d("run.kappa_slope", -0.5);
  s.kappa = [slope](double w) { return slope * w; };
  s.lip_kappa = std::abs(slope);
  s.w0 = c.d("run.w0", 1.0);
  s.times = c.v("run.times", {0.5, 1.0, 2.0});
  s.gamma_ladder = c.v("run.gammas", {0.1, 0.05, 0.025, 0.0125});
  s.n_paths = c.positive("run.n_paths", 10000);
  auto r = refinement_study(s, c.rng(0x4c494d54), c.threads);
  c.table.columns = {"gamma", "t", "functional", "estimate", "stderr"};
  const double T = *std::max_element(s.times.begin(), s.times.end());
  for (const auto& lv : r.levels) {
    for (std::size_t j = 0; j < r.times.size(); ++j) {
      c.table.add({lv.gamma, r.times[j], std::string("p_zero"), lv.p_zero[j], lv.p_zero_se[j]});
      c.table.add({lv.gamma, r.times[j], std::string("mean"), lv.mean[j], lv.mean_se[j]});
      c.table.add({lv.gamma, r.times[j], std::string("second_moment"), lv.second[j], lv.second_se[j]});
    }
    c.table.add({lv.gamma, T, std::string("sup_fourth"), lv.sup_fourth, lv.sup_fourth_se});
  }
  c.summary << "limit study: " << r.levels.size() << " levels, " << s.n_paths << " paths each\n";
}

void run_simulate_coupling(Ctx& c)
{
  const double gamma = c.d("run.gamma", 0.05);
  FarModel m = read_far_model(c, gamma);
  const long n = c.positive("run.n_steps", 1000);
  Eigen::VectorXd x0 = Eigen::VectorXd::Constant(m.dim, c.d("model.x0", 0.0));
  Eigen::VectorXd xt = Eigen::VectorXd::Constant(m.dim, c.d("model.x0_tilde", 2.0));
  RandomStream r = c.rng(0x434f5550);
  auto tr = coupled_trajectory(m, gamma, x0, xt, n, r);
  StickyParams p{gamma, m.sigma, m.constants->c_inf, m.majorant()};
  auto W = sticky_trajectory(p, (x0 - xt).norm(), tr.records);
  c.table.columns = {"k", "distance", "w", "merged", "u", "g"};
  long merges = 0;
  for (long k = 0; k <= n; ++k) {
    double u = k ? tr.records[k - 1].uniform_u : std::nan("");
    double g = k ? tr.records[k - 1].scalar_g : std::nan("");
    c.table.add({k, tr.states[k].distance(), W[k], static_cast<long>(tr.states[k].merged), u, g});
    merges += tr.states[k].merged;
  }
  c.summary << "coupled " << n << " steps in dimension " << m.dim << ", merged at " << merges << " states\n";
}

void run_simulate_sticky(Ctx& c)
{
  AssumptionConstants k = read_constants(c, {0.1, 0.5, 1.0, 0.2});
  const double gamma = c.d("run.gamma", 0.05);
  StickyParams p{gamma, c.d("model.sigma", 1.0), k.c_inf, TauMajorant(k, c.d("model.gamma_max", std::max(gamma, 0.1)))};
  p.validate();
  const long n = c.positive("run.n_steps", 1000);
  RandomStream r = c.rng(0x53544b59);
  auto W = sticky_trajectory(p, c.d("run.w0", 1.0), n, r);
  c.table.columns = {"k", "w"};
  long zeros = 0;
  for (long i = 0; i <= n; ++i) {
    c.table.add({i, W[i]});
    zeros += W[i] == 0.0;
  }
  c.summary << "sticky chain: " << n << " steps, " << zeros << " visits to 0\n";
}

void run_ode_posterior(Ctx& c)
{
  SynthSpec syn = read_synth(c);
  PosteriorProblem prob = synth_data(syn);
  UlaConfig u;
  u.gamma = c.d("run.gamma", syn.model == "van_der_pol" ? 1e-2 : 2.5e-6);
  u.n_iter = c.positive("run.n_iter", 10000);
  u.burn_in = c.l("run.burn_in", 1000);
  u.thin = c.positive("run.thin", 1);
  u.seed = c.seed;
  const std::string solver = c.cfg.get_string("run.solver", "reference");
  if (solver == "reference")
    u.source = SolverChoice::reference(c.d("run.h_ref", 1e-3));
  else if (solver == "euler")
    u.source = SolverChoice::euler(c.d("run.h", 0.01));
  else
    throw ConfigError("run.solver", "expected reference or euler, got '" + solver + "'");
  auto th0 = c.v("run.theta0", std::vector<double>(prob.theta_true.data(), prob.theta_true.data() + prob.theta_true.size()));
  u.theta0 = Eigen::Map<Eigen::VectorXd>(th0.data(), static_cast<Eigen::Index>(th0.size()));
  try {
    u.validate();
  } catch (const ParameterError& e) {
    throw ConfigError("run", e.what());
  }
  Eigen::MatrixXd s = ula_sample(prob, u);
  c.table.columns = {"iteration"};
  for (Eigen::Index j = 0; j < s.cols(); ++j)
    c.table.columns.push_back("theta_" + std::to_string(j));
  for (Eigen::Index i = 0; i < s.rows(); ++i) {
    std::vector<Cell> row{u.burn_in + i * u.thin};
    for (Eigen::Index j = 0; j < s.cols(); ++j)
      row.emplace_back(s(i, j));
    c.table.add(std::move(row));
  }
  c.summary << "ULA on " << syn.model << ": " << s.rows() << " samples, posterior mean " << s.colwise().mean() << "\n";
}

} // namespace

RunResult run_experiment(const ExperimentConfig& config, const RunOptions& options)
{
  RunResult res;
  res.kind = config.get_string("experiment.kind", "");
  const long cfg_seed = config.get_long("experiment.seed", 1);
  const std::uint64_t seed = options.seed ? *options.seed : static_cast<std::uint64_t>(cfg_seed);
  config.get_string("experiment.seed", std::to_string(seed));
  Ctx ctx{config, seed, std::max(1, options.threads), {}, {}, 0};

  if (res.kind == "validate-kernel")
    run_validate_kernel(ctx);
  else if (res.kind == "coupling-domination")
    run_coupling_domination(ctx);
  else if (res.kind == "bounds-report")
    run_bounds_report(ctx);
  else if (res.kind == "example14")
    run_example14(ctx);
  else if (res.kind == "ode-bias-sweep")
    run_ode_bias_sweep(ctx);
  else if (res.kind == "limit-study")
    run_limit_study(ctx);
  else if (res.kind == "simulate-coupling")
    run_simulate_coupling(ctx);
  else if (res.kind == "simulate-sticky")
    run_simulate_sticky(ctx);
  else if (res.kind == "ode-posterior")
    run_ode_posterior(ctx);
  else
    throw ConfigError("experiment.kind", "unknown experiment kind '" + res.kind + "'");

  namespace fs = std::filesystem;
  const fs::path dir = resolve_out_dir(config, options);
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec)
    throw ConfigError("out", "cannot create '" + dir.string() + "': " + ec.message());

  std::ostringstream header;
  header << "# kind: " << res.kind << "\n";
  char hash[32];
  std::snprintf(hash, sizeof hash, "%016llx", static_cast<unsigned long long>(config.hash()));
  header << "# config_hash: " << hash << "\n# seed: " << seed << "\n# version: " << kVersion << "\n";
  for (const auto& [k, v] : config.effective_values())
    if (k != "experiment.out")
      header << "# param " << k << " = " << v << "\n";

  res.csv_path = (dir / (res.kind + ".csv")).string();
  res.summary_path = (dir / (res.kind + ".summary.txt")).string();
  {
    std::ofstream f(res.csv_path, std::ios::binary);
    f << header.str();
    ctx.table.write_csv(f);
    if (!f)
      throw ConfigError("out", "cannot write '" + res.csv_path + "'");
  }
  res.summary = ctx.summary.str();
  {
    std::ofstream f(res.summary_path, std::ios::binary);
    f << header.str() << res.summary;
  }
  if (options.print_summary)
    std::cout << res.summary;
  res.table = std::move(ctx.table);
  res.exit_code = ctx.exit_code;
  return res;
}

} // namespace sticky
