// mimosim: Monte Carlo link-level experiments for the robust multiuser
// MIMO transceiver design. See README.md for the config format.

#include <cstdlib>
#include <optional>
#include <string>

#include "CLI11.hpp"

#include "mumimo/runner.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Robust multiuser MIMO TMMSE link simulator"};

  std::string experiment;
  std::string configPath;
  std::string outPath;
  std::optional<std::uint64_t> seed;
  int threads = 0;

  app.add_option("experiment", experiment,
                 "Experiment to run: ber-vs-snr, mse-vs-w or convergence")
      ->required();
  app.add_option("--config", configPath, "Path to the experiment config file")
      ->required();
  app.add_option("--out", outPath, "Output CSV path (default <experiment>.csv)");
  app.add_option("--seed", seed, "Master seed override (64-bit unsigned)");
  app.add_option("--threads", threads,
                 "Worker threads; 0 = all cores (env MIMO_SIM_THREADS as fallback)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  if (threads == 0) {
    if (const char* env = std::getenv("MIMO_SIM_THREADS")) {
      threads = std::atoi(env);
    }
  }
  if (outPath.empty()) outPath = experiment + ".csv";

  return mumimo::run(configPath, experiment, outPath, seed, threads);
}
