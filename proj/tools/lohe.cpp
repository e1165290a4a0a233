#include "lohe/cli.hpp"

#include <CLI11.hpp>

#include <iostream>
#include <optional>
#include <string>

namespace {

struct Flags {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> out;
  int workers = 1;
  int theorem_factor = 1;
};

void add_run_flags(CLI::App& sub, Flags& f) {
  sub.add_option("--config", f.config, "Experiment config (JSON)")->required()->check(CLI::ExistingFile);
  sub.add_option("--seed", f.seed, "Override the config seed");
  sub.add_option("--out", f.out, "Override the output prefix");
  sub.add_option("--workers", f.workers, "Worker threads (sweep only)")->check(CLI::Range(1, 1024));
  sub.add_option("--theorem-factor", f.theorem_factor, "Bound constant: 1 (default) or 2")
      ->check(CLI::IsMember({1, 2}));
}

lohe::cli::RunOptions to_options(const Flags& f) {
  lohe::cli::RunOptions opt;
  opt.seed = f.seed;
  opt.out = f.out;
  opt.workers = f.workers;
  opt.factor = f.theorem_factor == 2 ? lohe::TheoremFactor::Doubled : lohe::TheoremFactor::Conservative;
  return opt;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Heterogeneous Lohe model: simulation, linearization and instability checks"};
  app.require_subcommand(1);

  Flags flags;
  auto* simulate = app.add_subcommand("simulate", "Integrate and write trajectory CSV + final-state JSON");
  auto* linearize = app.add_subcommand("linearize", "Locate an equilibrium and write the spectral report");
  auto* sweep = app.add_subcommand("sweep", "Run the configured parameter sweep and write a CSV");
  add_run_flags(*simulate, flags);
  add_run_flags(*linearize, flags);
  add_run_flags(*sweep, flags);

  auto* fixtures = app.add_subcommand("fixtures", "List built-in equilibrium fixtures");
  std::optional<std::string> show;
  int sphere_dim = 2;
  fixtures->add_option("--show", show, "Print the configuration of a fixture, e.g. twisted:N=6,q=1");
  fixtures->add_option("--dim", sphere_dim, "Sphere dimension n for --show")->check(CLI::Range(1, 64));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : lohe::cli::kConfigError;
  }

  if (*fixtures) return lohe::cli::cmd_fixtures(show, sphere_dim);

  lohe::cli::ExperimentConfig config;
  try {
    config = lohe::cli::load_config(flags.config);
  } catch (const lohe::cli::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return lohe::cli::kConfigError;
  }
  const auto opt = to_options(flags);
  try {
    if (*simulate) return lohe::cli::cmd_simulate(config, opt);
    if (*linearize) return lohe::cli::cmd_linearize(config, opt);
    return lohe::cli::cmd_sweep(config, opt);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
