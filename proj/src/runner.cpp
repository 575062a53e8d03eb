#include "mumimo/runner.hpp"

#include <cstdio>
#include <iostream>

#include "mumimo/linksim.hpp"
#include "mumimo/simconfig.hpp"

namespace mumimo {

int run(const std::string& configPath, const std::string& experimentName,
        const std::string& outPath, std::optional<std::uint64_t> seedOverride,
        int threads) {
  try {
    SimConfig config = load_config(configPath);
    if (seedOverride) config.seed = *seedOverride;

    std::vector<ExperimentRecord> records;
    if (experimentName == "ber-vs-snr") {
      records = experiment_ber_vs_snr(config, threads);
    } else if (experimentName == "mse-vs-w") {
      records = experiment_mse_vs_w(config, threads);
    } else if (experimentName == "convergence") {
      records = experiment_convergence(config, threads);
    } else {
      std::cerr << "error: unknown experiment '" << experimentName
                << "' (expected ber-vs-snr, mse-vs-w or convergence)\n";
      return 2;
    }

    for (const auto& r : records) {
      std::printf("%s %s %s=%g metric=%.6g stderr=%.3g trials=%ld\n",
                  r.experiment.c_str(), r.scheme.c_str(), r.sweepName.c_str(),
                  r.sweepValue, r.metric, r.stderrVal, r.trials);
    }
    write_csv(records, outPath);
    std::printf("wrote %zu records to %s\n", records.size(), outPath.c_str());
    return 0;
  } catch (const ConfigError& e) {
    std::cerr << e.what() << "\n";
    return 2;
  } catch (const IoError& e) {
    std::cerr << e.what() << "\n";
    return 3;
  }
}

}  // namespace mumimo
