#include <string>
#include <vector>

#include "CLI11.hpp"
#include "commands.hpp"

int main(int argc, char** argv) {
  namespace cli = fedstrat::cli;
  CLI::App app{"fedstrat: federated learning simulator with adaptive robust aggregation"};
  app.require_subcommand(1);

  cli::Options opts;
  opts.out_root = cli::default_out_root();
  std::string out_root = opts.out_root.string();
  std::uint64_t seed_override = 0;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--out", out_root, "Output root directory (default $FEDSTRAT_OUT or ./runs)");
    sub->add_option("--threads", opts.threads, "Worker threads for client training")
        ->check(CLI::PositiveNumber);
    sub->add_option("--seed-override", seed_override, "Replace the config's seed");
    sub->add_flag("--force", opts.force, "Overwrite run directories from a different config");
    sub->add_flag("--timing", opts.timing,
                  "Record wall_time_ms (rounds.csv is then no longer reproducible)");
  };

  std::string config;
  auto* run = app.add_subcommand("run", "Run one scenario");
  run->add_option("config", config, "Scenario config (JSON)")->required();
  add_common(run);

  std::string sweep_key;
  std::vector<std::string> sweep_values;
  auto* sweep = app.add_subcommand("sweep", "Run one scenario per value of a config key");
  sweep->add_option("config", config, "Scenario config (JSON)")->required();
  sweep->add_option("--key", sweep_key, "Dotted config key, e.g. reward.lambda_cost")->required();
  sweep->add_option("--values", sweep_values, "Comma-separated values")
      ->required()
      ->delimiter(',');
  add_common(sweep);

  std::vector<std::string> dirs;
  auto* plot = app.add_subcommand("plot", "Render SVG plots from run directories");
  plot->add_option("dirs", dirs, "Run directories containing rounds.csv")->required();
  plot->add_option("--out", out_root, "Directory for the SVG files");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }

  opts.out_root = out_root;
  for (auto* sub : {run, sweep})
    if (sub->parsed() && sub->count("--seed-override")) opts.seed_override = seed_override;

  if (run->parsed()) return cli::cmd_run(config, opts);
  if (sweep->parsed()) return cli::cmd_sweep(config, sweep_key, sweep_values, opts);
  std::vector<std::filesystem::path> paths(dirs.begin(), dirs.end());
  return cli::cmd_plot(paths, opts);
}
