#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "slowdrive/cli.hpp"

int main(int argc, char** argv) {
  CLI::App app{
      std::string("slowdrive: slow-driving expansions, exact propagation, "
                  "and finite-time thermodynamics of driven open qubits.\n\n") +
      slowdrive::cli::config_reference()};

  slowdrive::cli::RunOptions opts;
  app.add_option("-c,--config", opts.config_path, "Path to a JSON config file")
      ->required()
      ->check(CLI::ExistingFile);
  app.add_option("-o,--output", opts.output_override,
                 "Output path (overrides the config's \"output\")");
  app.add_option("-j,--jobs", opts.jobs,
                 "Worker threads for sweeps (default: all cores)")
      ->check(CLI::NonNegativeNumber);
  app.add_flag("-v,--verbose", opts.verbose, "Progress notes on stderr");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 1;  // bad invocation is a configuration error
  }

  return slowdrive::cli::run(opts);
}
