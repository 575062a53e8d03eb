#include "mumimo/baseline.hpp"

namespace mumimo {

std::vector<ChannelStats> strip_uncertainty(const std::vector<ChannelStats>& stats) {
  std::vector<ChannelStats> stripped = stats;
  for (auto& s : stripped) {
    s.rxCorr.zeros(s.rxDim(), s.rxDim());
  }
  return stripped;
}

TransceiverDesign design_baseline(const std::vector<ChannelStats>& stats,
                                  arma::uword numStreams,
                                  const SolverSettings& settings, Rng& rng) {
  // With the receive correlations zeroed every uncertainty term in the
  // updates and in the objective vanishes, leaving the perfect-CSI joint
  // TMMSE applied to the channel mean.
  return design(strip_uncertainty(stats), numStreams, settings, rng);
}

}  // namespace mumimo
