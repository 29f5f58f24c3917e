// fockphase: simulate detection records on double Fock states and check the
// phase engine against the exact oracles.

#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "cli/commands.hpp"

int main(int argc, char** argv) {
  namespace cli = fockphase::cli;
  CLI::App app{"Measurement-induced relative phase between Fock-state condensates"};
  app.require_subcommand(1);

  cli::CommandOptions options;
  std::string config;
  std::uint64_t seed = 0;
  std::string out_dir;
  std::string record;

  auto add_common = [&](CLI::App* sub, bool needs_config) {
    auto* c = sub->add_option("--config", config, "Experiment configuration (JSON)");
    if (needs_config) c->required();
    sub->add_option("--seed", seed, "Override the configured seed");
    sub->add_option("--out-dir", out_dir, "Output directory");
    sub->add_option("--jobs", options.jobs, "Parallel runs for ensembles")->check(CLI::PositiveNumber);
    sub->add_flag("--final-only", options.final_only, "Write only the final posterior");
  };

  auto* simulate = app.add_subcommand("simulate", "Sample a record and track the posterior");
  add_common(simulate, true);
  auto* posterior = app.add_subcommand("posterior", "Posterior for a given record file");
  add_common(posterior, true);
  posterior->add_option("--record", record, "record.csv (index,u,theta,eta[,site])")->required();
  auto* oracle = app.add_subcommand("oracle-compare", "Engine vs exact transfer DP");
  add_common(oracle, true);
  auto* wallis = app.add_subcommand("wallis", "Closed-form vs quadrature spin pattern weights");
  wallis->add_option("--max-p", options.max_events, "Largest P+ + P- in the table");
  wallis->add_option("--out-dir", out_dir, "Output directory");
  auto* sweep = app.add_subcommand("sweep", "Seed ensembles over parameter ranges");
  add_common(sweep, true);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : cli::exit_validation;
  }

  if (!config.empty()) options.config = config;
  if (!out_dir.empty()) options.out_dir = out_dir;
  if (!record.empty()) options.record = record;
  for (auto* sub : app.get_subcommands()) {
    if (const auto* opt = sub->get_option_no_throw("--seed"); opt != nullptr && opt->count() > 0) {
      options.seed = seed;
    }
    return cli::run_command(sub->get_name(), options, std::cout, std::cerr);
  }
  return cli::exit_validation;
}
