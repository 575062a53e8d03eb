#include "mumimo/channel.hpp"

#include <cmath>
#include <stdexcept>

namespace mumimo {

CorrelationMatrix exp_correlation(arma::uword dim, double rho) {
  if (dim < 1) {
    throw std::invalid_argument("exp_correlation: dim must be at least 1");
  }
  if (!(rho >= 0.0 && rho < 1.0)) {
    throw std::invalid_argument("exp_correlation: rho must lie in [0, 1)");
  }
  arma::cx_mat r(dim, dim);
  for (arma::uword j = 0; j < dim; ++j) {
    for (arma::uword i = 0; i < dim; ++i) {
      double e = (i >= j) ? static_cast<double>(i - j) : static_cast<double>(j - i);
      r(i, j) = std::pow(rho, e);
    }
  }
  return {r};
}

arma::cx_mat psd_sqrt(const arma::cx_mat& r) {
  if (!r.is_square()) {
    throw std::invalid_argument("psd_sqrt: input must be square");
  }
  const double asym = arma::abs(r - r.t()).max();
  if (asym > 1e-8) {
    throw std::invalid_argument("psd_sqrt: input is not Hermitian");
  }
  // Symmetrize so the eigensolver sees an exactly Hermitian matrix.
  arma::cx_mat h = 0.5 * (r + r.t());
  arma::vec eigval;
  arma::cx_mat eigvec;
  if (!arma::eig_sym(eigval, eigvec, h)) {
    throw std::runtime_error("psd_sqrt: eigendecomposition failed");
  }
  for (double& v : eigval) {
    if (v < -1e-10) {
      throw std::invalid_argument("psd_sqrt: input is not positive semidefinite");
    }
    if (v < 0.0) v = 0.0;
  }
  return eigvec * arma::diagmat(arma::sqrt(eigval)) * eigvec.t();
}

ChannelStats to_equivalent(const ChannelStatsRaw& raw) {
  if (raw.mean0.n_rows != raw.rxCorr0.dim() || raw.mean0.n_cols != raw.txCorr.dim()) {
    throw std::invalid_argument("to_equivalent: mean/correlation shapes disagree");
  }
  if (std::isnan(raw.w) || raw.w < 0.0) {
    throw std::invalid_argument("to_equivalent: w must be nonnegative");
  }
  ChannelStats stats;
  stats.txCorr = raw.txCorr.entries;
  if (std::isinf(raw.w)) {
    stats.mean = raw.mean0;
    stats.rxCorr.zeros(raw.rxCorr0.dim(), raw.rxCorr0.dim());
  } else {
    stats.mean = std::sqrt(raw.w / (raw.w + 1.0)) * raw.mean0;
    stats.rxCorr = (1.0 / (raw.w + 1.0)) * raw.rxCorr0.entries;
  }
  return stats;
}

arma::cx_mat randn_cx(arma::uword rows, arma::uword cols, Rng& rng) {
  arma::cx_mat m(rows, cols);
  for (arma::uword j = 0; j < cols; ++j) {
    for (arma::uword i = 0; i < rows; ++i) {
      m(i, j) = rng.cgaussian();
    }
  }
  return m;
}

ChannelSampler::ChannelSampler(const ChannelStats& stats)
    : mean_(stats.mean),
      rxSqrt_(psd_sqrt(stats.rxCorr)),
      txSqrt_(psd_sqrt(stats.txCorr)) {}

ChannelRealization ChannelSampler::draw(Rng& rng) const {
  arma::cx_mat delta = randn_cx(mean_.n_rows, mean_.n_cols, rng);
  return {mean_ + rxSqrt_ * delta * txSqrt_};
}

ChannelRealization sample_channel(const ChannelStats& stats, Rng& rng) {
  return ChannelSampler(stats).draw(rng);
}

}  // namespace mumimo
