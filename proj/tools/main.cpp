#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "exbound/driver.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Guaranteed energy-error bounds for exterior Dirichlet problems"};
  app.require_subcommand(1);

  std::string config_path;
  exbound::RunOptions options;
  std::string out_dir;

  for (const char* name : {"meshgen", "solve", "bounds", "nonconforming"}) {
    CLI::App* sub = app.add_subcommand(name);
    sub->add_option("--config", config_path, "JSON run configuration")->required();
    sub->add_option("--out", out_dir, "output directory (overrides the config)");
    sub->add_flag("--sequential", options.sequential, "run ladder entries one after another");
  }
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? exbound::kExitOk : exbound::kExitConfig;
  }
  if (!out_dir.empty()) options.out_dir = out_dir;

  const std::string command = app.get_subcommands().front()->get_name();
  return exbound::run_command(command, config_path, options, std::cout, std::cerr);
}
