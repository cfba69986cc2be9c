#include "sticky/errors.hpp"
#include "sticky/experiments.hpp"

#include <CLI11.hpp>

#include <iostream>
#include <map>

namespace {

const std::map<std::string, std::string> kSubcommands = {
  {"simulate-coupling", "simulate-coupling"},
  {"simulate-sticky", "simulate-sticky"},
  {"bounds", "bounds-report"},
  {"validate", "validate-kernel"},
  {"ode-posterior", "ode-posterior"},
  {"limit-study", "limit-study"},
  {"domination", "coupling-domination"},
  {"example14", "example14"},
  {"bias-sweep", "ode-bias-sweep"},
};

} // namespace

int main(int argc, char** argv)
{
  CLI::App app{"Sticky-coupling simulation and bound calculators"};
  app.require_subcommand(1);
  std::string config_path;
  std::uint64_t seed = 0;
  std::string out_dir;
  int threads = 1;
  auto* o_cfg = app.add_option("--config", config_path, "INI configuration file");
  auto* o_seed = app.add_option("--seed", seed, "overrides [experiment] seed");
  auto* o_out = app.add_option("--out", out_dir, "output directory");
  app.add_option("--threads", threads, "worker threads")->check(CLI::PositiveNumber);
  for (auto* o : {o_cfg, o_seed, o_out})
    o->configurable(false);
  app.fallthrough();

  app.add_subcommand("run", "run the kind named in the configuration");
  for (const auto& [name, kind] : kSubcommands)
    app.add_subcommand(name, "run the " + kind + " study");

  CLI11_PARSE(app, argc, argv);

  try {
    sticky::ExperimentConfig cfg = config_path.empty() ? sticky::ExperimentConfig{}
                                                       : sticky::ExperimentConfig::load(config_path);
    const std::string sub = app.get_subcommands().front()->get_name();
    if (sub == "run") {
      if (!cfg.has("experiment.kind"))
        throw sticky::ConfigError("experiment.kind", "required by 'run'");
    } else {
      cfg.set("experiment.kind", kSubcommands.at(sub));
    }
    sticky::RunOptions opt;
    if (*o_seed)
      opt.seed = seed;
    if (*o_out)
      opt.out_dir = out_dir;
    opt.threads = threads;
    sticky::RunResult r = sticky::run_experiment(cfg, opt);
    std::cerr << "wrote " << r.csv_path << "\n";
    return r.exit_code;
  } catch (const sticky::DivergenceError& e) {
    std::cerr << "divergence: " << e.what() << "\n";
    return 3;
  } catch (const sticky::ParameterError& e) {
    std::cerr << "invalid configuration: " << e.what() << "\n";
    return 2;
  }
}
