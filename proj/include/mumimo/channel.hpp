/**
 * @file channel.hpp
 * @brief Statistical CSI types and the correlated non-zero-mean MIMO
 *        channel generator.
 */
#ifndef MUMIMO_CHANNEL_HPP
#define MUMIMO_CHANNEL_HPP

#include <armadillo>

#include "mumimo/rng.hpp"

namespace mumimo {

/// Hermitian PSD matrix with unit diagonal (antenna correlation).
struct CorrelationMatrix {
  arma::cx_mat entries;

  arma::uword dim() const { return entries.n_rows; }
};

/// Raw statistical CSI of one user: normalized channel mean (unit average
/// entry power), unit-diagonal receive/transmit correlations, and the
/// mean-to-scatter power ratio w. w == +inf marks a mean-only channel.
struct ChannelStatsRaw {
  arma::cx_mat mean0;         // N x M
  CorrelationMatrix rxCorr0;  // N x N
  CorrelationMatrix txCorr;   // M x M
  double w = 0.0;
};

/// Equivalent-model CSI: the mean absorbs the mean-power weight and the
/// receive correlation absorbs the scatter-power weight, so rxCorr is no
/// longer unit-diagonal.
struct ChannelStats {
  arma::cx_mat mean;    // N x M
  arma::cx_mat rxCorr;  // N x N, Hermitian PSD
  arma::cx_mat txCorr;  // M x M, Hermitian PSD, unit diagonal

  arma::uword rxDim() const { return mean.n_rows; }
  arma::uword txDim() const { return mean.n_cols; }
};

/// One drawn channel matrix.
struct ChannelRealization {
  arma::cx_mat h;  // N x M
};

/// Exponential correlation profile: entry(i,j) = rho^|i-j|.
/// Throws std::invalid_argument unless 0 <= rho < 1 and dim >= 1.
CorrelationMatrix exp_correlation(arma::uword dim, double rho);

/// Unique Hermitian PSD square root S of r, S*S^H = r.
/// Rejects non-Hermitian input (max asymmetry > 1e-8) and eigenvalues
/// below -1e-10; eigenvalues in [-1e-10, 0] are clamped to 0.
arma::cx_mat psd_sqrt(const arma::cx_mat& r);

/// Folds the power ratio w into the mean and receive correlation:
/// mean = sqrt(w/(w+1)) * mean0, rxCorr = rxCorr0 / (w+1).
/// For w == +inf the channel is mean-only (rxCorr = 0).
ChannelStats to_equivalent(const ChannelStatsRaw& raw);

/// i.i.d. CN(0,1) entries, filled column-major from the stream.
arma::cx_mat randn_cx(arma::uword rows, arma::uword cols, Rng& rng);

/// Caches the correlation square roots so repeated draws stay cheap.
class ChannelSampler {
 public:
  explicit ChannelSampler(const ChannelStats& stats);

  ChannelRealization draw(Rng& rng) const;

 private:
  arma::cx_mat mean_;
  arma::cx_mat rxSqrt_;
  arma::cx_mat txSqrt_;
};

/// One draw h = mean + rxCorr^{1/2} * Delta * txCorr^{1/2}.
/// Convenience wrapper; use ChannelSampler for bulk draws.
ChannelRealization sample_channel(const ChannelStats& stats, Rng& rng);

}  // namespace mumimo

#endif
