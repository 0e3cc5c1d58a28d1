#pragma once

#include <filesystem>
#include <iosfwd>

#include "ctgibbs/config.hpp"

namespace ctgibbs::cli {

// Subcommand bodies.  Each throws ConfigError / DataError / NumericalError;
// the binary maps these to exit codes 2 / 3 / 4.

// Generates the ground truth and noisy sinogram, writing into the config's
// output directory: x_true.{bin,pgm}, theta_true.bin, angles_nominal.bin,
// sinogram.bin, truth.meta.
std::filesystem::path run_simulate(const RunConfig& cfg);

// Runs the sampler on a simulated data bundle and writes the chain bundle:
// kept chains (x_chain, theta_chain, lambda/delta/kappa), posterior mean and
// std images (bin + pgm), hyperchains.csv, diagnostics.csv, run.meta.
std::filesystem::path run_reconstruct(const RunConfig& cfg,
                                      const std::filesystem::path& data_dir);

// Prints a summary table of a chain bundle and writes angle_summary.csv and
// cumulative_means.csv next to the chains.
void run_report(const std::filesystem::path& chains_dir, std::ostream& out);

}  // namespace ctgibbs::cli
