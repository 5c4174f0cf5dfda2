#include <CLI11.hpp>

#include <string>

#include "evw/cli.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Empirical Voronoi wavelet transform"};
  app.require_subcommand(1);

  evw::cli::CliConfig cfg;
  std::string input, output, seed_file, bank_dir;
  int max_levels = 0;

  auto add_detection_flags = [&](CLI::App* cmd) {
    cmd->add_option("--tau", cfg.tau,
                    "transition half-width in radians (overrides --gamma when set)");
    cmd->add_option("--gamma", cfg.gamma,
                    "transition width as a fraction of the smallest cell in-radius")
        ->check(CLI::Range(1e-9, 0.999999));
    cmd->add_option("--scale-step", cfg.scale_step,
                    "sigma increment between scale-space levels")
        ->check(CLI::PositiveNumber);
    cmd->add_option("--max-levels", max_levels,
                    "number of smoothing levels (default: min(H,W)/4)");
    cmd->add_option("--seed-file", seed_file,
                    "CSV seed list overriding detection (row,col or seeds.csv layout)");
  };

  CLI::App* decompose = app.add_subcommand(
      "decompose", "decompose an image (PGM/PFM) into a coefficient bundle directory");
  decompose->add_option("--input,-i", input, "input image")->required();
  decompose->add_option("--output,-o", output, "output bundle directory")->required();
  add_detection_flags(decompose);
  decompose->add_option("--bank-dir", bank_dir, "reuse the filter bank of an existing bundle");

  CLI::App* reconstruct = app.add_subcommand(
      "reconstruct", "rebuild an image from a coefficient bundle via the dual frame");
  reconstruct->add_option("--input,-i", input, "bundle directory")->required();
  reconstruct->add_option("--output,-o", output, "output image (.pfm or .pgm)")->required();

  CLI::App* partition = app.add_subcommand(
      "partition", "detect modes and export the Voronoi partition and overlay");
  partition->add_option("--input,-i", input, "input image")->required();
  partition->add_option("--output,-o", output, "output directory")->required();
  add_detection_flags(partition);

  CLI::App* synth = app.add_subcommand("synth", "write the built-in toy test image");
  synth->add_option("--output,-o", output, "output image (.pfm or .pgm)")->required();

  CLI::App* info =
      app.add_subcommand("info", "print bundle manifest and measured frame bounds");
  info->add_option("--input,-i", input, "bundle directory")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  if (decompose->parsed()) cfg.command = evw::cli::Command::Decompose;
  if (reconstruct->parsed()) cfg.command = evw::cli::Command::Reconstruct;
  if (partition->parsed()) cfg.command = evw::cli::Command::Partition;
  if (synth->parsed()) cfg.command = evw::cli::Command::Synth;
  if (info->parsed()) cfg.command = evw::cli::Command::Info;

  cfg.input = input;
  cfg.output = output;
  if (max_levels > 0) cfg.max_levels = max_levels;
  if (!seed_file.empty()) cfg.seed_file = seed_file;
  if (!bank_dir.empty()) cfg.bank_dir = bank_dir;
  return evw::cli::run(cfg);
}
