#include <CLI11.hpp>

#include <exception>
#include <iostream>

#include "ctgibbs/cli.hpp"
#include "ctgibbs/errors.hpp"

// Exit codes: 0 success, 2 configuration error, 3 data error, 4 numerical
// failure.

int main(int argc, char** argv) {
  CLI::App app{"Fan-beam CT reconstruction with uncertain view angles"};
  app.require_subcommand(1);

  std::string config_path;
  std::string data_dir;
  std::string chains_dir;

  auto* simulate = app.add_subcommand("simulate", "generate phantom, angles and noisy sinogram");
  simulate->add_option("--config", config_path, "configuration file")->required();

  auto* reconstruct = app.add_subcommand("reconstruct", "run the Gibbs sampler on a data bundle");
  reconstruct->add_option("--config", config_path, "configuration file")->required();
  reconstruct->add_option("--data", data_dir, "data bundle directory")->required();

  auto* report = app.add_subcommand("report", "summarize a chain bundle");
  report->add_option("--chains", chains_dir, "chain bundle directory")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (simulate->parsed()) {
      const auto cfg = ctgibbs::RunConfig::load(config_path);
      const auto dir = ctgibbs::cli::run_simulate(cfg);
      std::cout << "data bundle written to " << dir.string() << "\n";
    } else if (reconstruct->parsed()) {
      const auto cfg = ctgibbs::RunConfig::load(config_path);
      const auto dir = ctgibbs::cli::run_reconstruct(cfg, data_dir);
      std::cout << "chain bundle written to " << dir.string() << "\n";
    } else if (report->parsed()) {
      ctgibbs::cli::run_report(chains_dir, std::cout);
    }
  } catch (const ctgibbs::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const ctgibbs::DataError& e) {
    std::cerr << "data error: " << e.what() << "\n";
    return 3;
  } catch (const ctgibbs::NumericalError& e) {
    std::cerr << "numerical error: " << e.what() << "\n";
    return 4;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
