/**
 * @file linksim.hpp
 * @brief QPSK Monte Carlo link simulator and the three sweep experiments
 *        (BER vs SNR, average MSE vs W, convergence trace).
 */
#ifndef MUMIMO_LINKSIM_HPP
#define MUMIMO_LINKSIM_HPP

#include <cstdint>
#include <vector>

#include "mumimo/channel.hpp"
#include "mumimo/simconfig.hpp"
#include "mumimo/tmmse.hpp"

namespace mumimo {

/// Error and squared-error tallies of one simulation run. Merging is a
/// plain component-wise sum, so totals do not depend on merge order.
struct TrialResult {
  long long bitErrors = 0;
  long long bitsSent = 0;
  double sumSquaredError = 0.0;  // accumulated ||x_i - y_i||^2 over users and slots
  long long symbolsSent = 0;     // simultaneous symbol-vector slots

  void merge(const TrialResult& other);
  double ber() const;
  /// Average of sum_i ||x_i - y_i||^2 per slot; estimates the total MSE.
  double meanSquaredError() const;
};

/// Passes symbolSlots QPSK symbol vectors per user through the designed
/// link over fixed channel realizations: per slot every user's L streams
/// carry fresh bits, noise is CN(0, noiseVar I), and each user's filter
/// output is sliced per stream.
TrialResult run_trial(const TransceiverDesign& design,
                      const std::vector<ChannelRealization>& realizations,
                      double noiseVar, long long symbolSlots, Rng& rng);

/// Same link evaluation for several designs sharing the symbol and noise
/// draws (common random numbers); entry d uses noiseVars[d].
std::vector<TrialResult> run_trial_multi(
    const std::vector<const TransceiverDesign*>& designs,
    const std::vector<double>& noiseVars,
    const std::vector<ChannelRealization>& realizations, long long symbolSlots,
    Rng& rng);

/// Per-trial metric of one (experiment, sweep point, trial) cell, exposed
/// so seed isolation is testable: the value depends only on the master
/// seed and the cell indices, never on how many trials run.
struct TrialMetrics {
  std::vector<TrialResult> results;  // one per (snr, scheme) design
};

std::vector<ExperimentRecord> experiment_ber_vs_snr(const SimConfig& config,
                                                    int threads = 1);
std::vector<ExperimentRecord> experiment_mse_vs_w(const SimConfig& config,
                                                  int threads = 1);
std::vector<ExperimentRecord> experiment_convergence(const SimConfig& config,
                                                     int threads = 1);

/// BER-experiment cell (one W, one trial), evaluated for every configured
/// (snr, scheme) pair. Used by the sweep and by the seed-isolation test.
TrialMetrics ber_trial(const SimConfig& config, std::size_t wIndex,
                       std::size_t trial);
/// MSE-experiment cell (one W, one trial), one result per scheme.
TrialMetrics mse_trial(const SimConfig& config, std::size_t wIndex,
                       std::size_t trial);

}  // namespace mumimo

#endif
