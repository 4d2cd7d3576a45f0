// wqed: runs one experiment from a config file and writes its CSV bundle.
//
//   wqed two_qubit_distance_sweep --config configs/two_qubit_distance_sweep.ini --out out/fig2
//
// Exit codes: 0 success, 2 configuration error, 3 numerical failure.

#include <chrono>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "wqed/experiments.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Waveguide QED experiment runner"};
  app.require_subcommand(1, 1);
  app.set_version_flag("--version", std::string(wqed::library_version()));

  std::string config_path;
  std::string out_dir;
  int threads = 1;
  std::uint64_t seed = 0;
  for (const char* name :
       {"single_qubit_cutoff_sweep", "two_qubit_distance_sweep", "ide_reference",
        "discrete_waveguide", "photonic_crystal", "scattering_spectrum", "lightcone_map"}) {
    auto* sub = app.add_subcommand(name, "run the " + std::string(name) + " experiment");
    sub->add_option("--config", config_path, "experiment config file")->required();
    sub->add_option("--out", out_dir, "output directory (overrides [output] directory)");
    sub->add_option("--threads", threads, "worker threads for sweep points")
        ->check(CLI::PositiveNumber);
    sub->add_option("--seed", seed, "reserved; the experiments are deterministic");
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  const std::string kind = app.get_subcommands().front()->get_name();
  try {
    const wqed::ExperimentConfig config = wqed::ExperimentConfig::load(config_path);
    if (wqed::to_string(config.kind) != kind) {
      std::cerr << "error: " << config_path << " configures " << wqed::to_string(config.kind)
                << ", not " << kind << '\n';
      return 2;
    }
    wqed::RunOptions options;
    options.threads = threads;
    options.seed = seed;
    options.output = out_dir;
    const wqed::RunReport report = wqed::run(config, options);
    std::cout << kind << ": " << report.points << " points, " << report.files.size()
              << " files in " << report.directory.string() << " (" << report.wall_seconds
              << " s)\n";
    return 0;
  } catch (const wqed::InvalidArgument& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return 2;
  } catch (const wqed::NumericalError& e) {
    std::cerr << "numerical failure: " << e.what() << '\n';
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 3;
  }
}
