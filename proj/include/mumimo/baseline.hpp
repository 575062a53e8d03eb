/**
 * @file baseline.hpp
 * @brief Non-robust total-MMSE comparator: the same alternating design run
 *        as if the channel mean were the true channel.
 */
#ifndef MUMIMO_BASELINE_HPP
#define MUMIMO_BASELINE_HPP

#include "mumimo/tmmse.hpp"

namespace mumimo {

/// Copies the stats with every receive correlation zeroed, which removes
/// all channel-uncertainty terms from the updates and the objective.
std::vector<ChannelStats> strip_uncertainty(const std::vector<ChannelStats>& stats);

/// Joint design that trusts the channel mean as perfect CSI. Same power
/// constraint and stopping rule as the robust design.
TransceiverDesign design_baseline(const std::vector<ChannelStats>& stats,
                                  arma::uword numStreams,
                                  const SolverSettings& settings, Rng& rng);

}  // namespace mumimo

#endif
