#pragma once

#include "sticky/limit_study.hpp"
#include "sticky/model.hpp"
#include "sticky/posterior.hpp"
#include "sticky/rng.hpp"
#include "sticky/sticky_chain.hpp"

#include <Eigen/Core>
#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace sticky {

inline constexpr const char* kVersion = "0.1.0";

// ---------------------------------------------------------------------------
// Studies. Each is deterministic in (arguments, rng) and independent of the
// thread count.

struct KernelCheckRow
{
  double w = 0.0;
  double gamma = 0.0;
  std::string functional;
  double exact = 0.0;
  double empirical = 0.0;
  double se = 0.0;

  //! (empirical - exact) / se, 0 when both agree exactly
  double z() const;
};

//! One-step atom, mean and exp moment of the sticky kernel, exact vs n draws,
//! for every (w, gamma) pair.
std::vector<KernelCheckRow> kernel_check(const AssumptionConstants& c, double sigma, double gamma_max,
                                         const std::vector<double>& ws, const std::vector<double>& gammas, long n,
                                         double a, const RandomStream& rng, int threads = 1);

struct DominationSummary
{
  int dim = 1;
  long n_traj = 0;
  long n_steps = 0;
  long n_checks = 0;
  long domination_violations = 0;
  long monotonicity_violations = 0;
  //! max over all checks of |X - X~| - W (negative when strict)
  double max_excess = 0.0;
  //! per k = 0..n_steps
  std::vector<double> mean_distance, mean_distance_se;
  //! empirical W1 between the k-step marginals; filled for dim == 1 only
  std::vector<double> w1_marginal, w1_marginal_se;
};

//! Sticky coupling from (x0, x0_tilde) with the dominating chain replayed on the
//! same draws; a second dominating chain from W0 + w_bump checks monotonicity.
DominationSummary coupling_domination(const FarModel& model, double gamma, const Eigen::VectorXd& x0,
                                      const Eigen::VectorXd& x0_tilde, long n_traj, long n_steps, double w_bump,
                                      const RandomStream& rng, int threads = 1);

struct CoalescenceResult
{
  double t0 = 0.0;
  long k = 0;
  double w = 0.0;
  double w_tilde = 0.0;
  //! P(W_k != W~_k) under shared draws, an upper estimate of the TV distance
  double non_coalesced = 0.0;
  double se = 0.0;
  double doeblin_bound = 0.0;
  double printed_bound = 0.0;
  double lemma_bound = 0.0;
};

//! Two sticky chains from w and w_tilde on shared (g, u), k = ceil(t0 / gamma).
//! doeblin_bound is uniform over steps up to gamma_bar.
CoalescenceResult coalescence_study(const StickyParams& p, double w, double w_tilde, double t0, double gamma_bar,
                                    long n_paths, const RandomStream& rng, int threads = 1);

struct Example14Result
{
  double rho = 0.0, a = 0.0, gamma = 0.0, sigma = 0.0;
  long n = 0;
  double std_derived = 0.0;
  double w1_exact = 0.0;
  double w1_empirical = 0.0;
  double tv_exact = 0.0;
  double tv_kde = 0.0;
};

//! Stationary samples of the shifted AR(1) pair from two independent long
//! chains (burn-in, then every thin-th state).
Example14Result example14(double rho, double a, double gamma, double sigma, long n, long burn_in, long thin,
                          const RandomStream& rng, int threads = 1);

struct BiasSweepSpec
{
  SynthSpec synth = SynthSpec::van_der_pol_defaults();
  double gamma = 1e-2;
  long n_iter = 200000;
  long burn_in = 10000;
  SolverChoice reference = SolverChoice::reference(1e-3);
  std::vector<double> h = {0.04, 0.02, 0.01, 0.005};
  //! empty: every parameter component
  std::vector<int> components;
  int replications = 1;
  std::optional<Eigen::VectorXd> theta0;
};

struct BiasSweepRow
{
  int replication = 0;
  double h = 0.0;
  int component = 0;
  double tv = 0.0;
};

//! Per-marginal KDE TV between the reference-gradient chain and each Euler(h)
//! chain. Within a replication every chain uses the same draws.
std::vector<BiasSweepRow> ode_bias_sweep(const BiasSweepSpec& spec, std::uint64_t seed, int threads = 1);

// ---------------------------------------------------------------------------
// Configuration and output.

//! Flat INI text: [section] then key = value lines; lists are comma separated.
class ExperimentConfig
{
public:
  static ExperimentConfig parse(const std::string& text);
  static ExperimentConfig load(const std::string& path);

  bool has(const std::string& key) const { return values_.count(key) > 0; }
  void set(const std::string& key, const std::string& value);

  //! Typed reads; each records the effective value for the provenance header.
  std::string get_string(const std::string& key, const std::string& fallback) const;
  double get_double(const std::string& key, double fallback) const;
  long get_long(const std::string& key, long fallback) const;
  std::vector<double> get_doubles(const std::string& key, const std::vector<double>& fallback) const;

  const std::map<std::string, std::string>& explicit_values() const { return values_; }
  const std::map<std::string, std::string>& effective_values() const { return used_; }
  //! FNV-1a of the effective key = value lines
  std::uint64_t hash() const;

private:
  std::map<std::string, std::string> values_;
  mutable std::map<std::string, std::string> used_;
};

using Cell = std::variant<long, double, std::string>;

struct ResultTable
{
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;

  void add(std::vector<Cell> row);
  void write_csv(std::ostream& os) const;
};

struct RunOptions
{
  std::optional<std::uint64_t> seed;
  std::optional<std::string> out_dir;
  int threads = 1;
  //! echo the summary on stdout
  bool print_summary = true;
};

struct RunResult
{
  int exit_code = 0;
  std::string kind;
  std::string csv_path;
  std::string summary_path;
  ResultTable table;
  std::string summary;
};

std::vector<std::string> experiment_kinds();

//! Runs config's [experiment] kind. Throws ConfigError / ParameterError on bad
//! input and DivergenceError when a simulation escapes.
RunResult run_experiment(const ExperimentConfig& config, const RunOptions& options);

//! --out, then [experiment] out, then $STICKY_OUT_DIR, then ".".
std::string resolve_out_dir(const ExperimentConfig& config, const RunOptions& options);

} // namespace sticky
