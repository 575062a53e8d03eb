// Shared oracles for the unit and acceptance suites. Everything here is
// deliberately independent of the library's closed-form code paths: the
// Monte Carlo estimator simulates the physical link directly, the root
// finder works on the unreduced matrix expression, and the gradients are
// plain central differences.
#ifndef MUMIMO_TEST_UTIL_HPP
#define MUMIMO_TEST_UTIL_HPP

#include <cmath>
#include <functional>
#include <vector>

#include <armadillo>

#include "mumimo/channel.hpp"
#include "mumimo/modem.hpp"
#include "mumimo/tmmse.hpp"

namespace testutil {

inline arma::cx_mat random_psd(arma::uword dim, mumimo::Rng& rng) {
  const arma::cx_mat a = mumimo::randn_cx(dim, dim, rng);
  return a * a.t() / static_cast<double>(dim);
}

inline std::vector<mumimo::ChannelStats> random_stats(unsigned users, unsigned n,
                                                      unsigned m, double w,
                                                      double rhoTx, double rhoRx,
                                                      mumimo::Rng& rng) {
  std::vector<mumimo::ChannelStats> stats(users);
  const mumimo::CorrelationMatrix rx = mumimo::exp_correlation(n, rhoRx);
  const mumimo::CorrelationMatrix tx = mumimo::exp_correlation(m, rhoTx);
  for (unsigned k = 0; k < users; ++k) {
    mumimo::ChannelStatsRaw raw;
    raw.mean0 = mumimo::randn_cx(n, m, rng);
    raw.rxCorr0 = rx;
    raw.txCorr = tx;
    raw.w = w;
    stats[k] = mumimo::to_equivalent(raw);
  }
  return stats;
}

struct McEstimate {
  double mean = 0.0;
  double se = 0.0;
};

// Physical-simulation estimate of the total MSE: per draw a fresh channel
// realization per user, fresh QPSK symbol vectors and fresh noise, then
// sum_i ||x_i - y_i||^2 through the actual link equation.
inline McEstimate mc_tmse(const mumimo::TransceiverDesign& design,
                          const std::vector<mumimo::ChannelStats>& stats,
                          double noiseVar, long draws, mumimo::Rng& rng) {
  const std::size_t users = stats.size();
  std::vector<mumimo::ChannelSampler> samplers;
  samplers.reserve(users);
  for (const auto& s : stats) samplers.emplace_back(s);
  const arma::uword streams = design.precoders.front().n_cols;
  const double noiseSd = std::sqrt(noiseVar);

  double sum = 0.0;
  double sumSq = 0.0;
  for (long d = 0; d < draws; ++d) {
    std::vector<arma::cx_vec> symbols(users);
    arma::cx_vec sent(design.precoders.front().n_rows, arma::fill::zeros);
    for (std::size_t k = 0; k < users; ++k) {
      symbols[k] = mumimo::random_qpsk_block(streams, rng).symbols;
      sent += design.precoders[k] * symbols[k];
    }
    double v = 0.0;
    for (std::size_t i = 0; i < users; ++i) {
      const arma::cx_mat h = samplers[i].draw(rng).h;
      arma::cx_vec noise(h.n_rows);
      for (auto& z : noise) z = noiseSd * rng.cgaussian();
      const arma::cx_vec y = design.receivers[i].t() * (h * sent + noise);
      v += arma::accu(arma::square(arma::abs(symbols[i] - y)));
    }
    sum += v;
    sumSq += v * v;
  }
  McEstimate est;
  est.mean = sum / static_cast<double>(draws);
  const double var =
      (sumSq - sum * sum / static_cast<double>(draws)) / static_cast<double>(draws - 1);
  est.se = std::sqrt(std::max(var, 0.0) / static_cast<double>(draws));
  return est;
}

// Largest |central difference| over the real and imaginary parts of every
// entry of m, for a scalar functional evaluated through f().
inline double max_abs_gradient(const std::function<double()>& f, arma::cx_mat& m,
                               double h) {
  double worst = 0.0;
  for (arma::uword j = 0; j < m.n_cols; ++j) {
    for (arma::uword i = 0; i < m.n_rows; ++i) {
      const std::complex<double> saved = m(i, j);
      for (int part = 0; part < 2; ++part) {
        const std::complex<double> step =
            part == 0 ? std::complex<double>(h, 0.0) : std::complex<double>(0.0, h);
        m(i, j) = saved + step;
        const double fp = f();
        m(i, j) = saved - step;
        const double fm = f();
        m(i, j) = saved;
        worst = std::max(worst, std::abs(fp - fm) / (2.0 * h));
      }
    }
  }
  return worst;
}

// Independent multiplier solver: plain bisection on the matrix expression
// tr(X (X + Y + lambda I)^-2) - P with explicit inverses, no
// eigen-reduction. 300 halvings pin the root to machine precision.
inline double oracle_lambda(const arma::cx_mat& x, const arma::cx_mat& y,
                            double power) {
  const arma::uword m = x.n_rows;
  const auto mismatch = [&](double lambda) {
    arma::cx_mat g = x + y;
    g.diag() += lambda;
    const arma::cx_mat inv = arma::inv(g);
    return arma::trace(x * inv * inv).real() - power;
  };
  arma::cx_mat xy = x + y;
  const double trx = arma::trace(x).real();
  if (trx <= 0.0) return 0.0;
  if (arma::rcond(xy) > 1e-12 && mismatch(0.0) <= 0.0) return 0.0;
  double lo = 0.0;
  double hi = std::sqrt(trx / power) + 1.0;
  while (mismatch(hi) > 0.0) hi *= 2.0;
  for (int i = 0; i < 300; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (mismatch(mid) > 0.0) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

// Lagrangian of the constrained problem at fixed multiplier.
inline double lagrangian(const mumimo::TransceiverDesign& design,
                         const std::vector<mumimo::ChannelStats>& stats,
                         double noiseVar, double power) {
  return mumimo::tmse(design, stats, noiseVar) +
         design.lambda * (mumimo::total_power(design.precoders) - power);
}

}  // namespace testutil

#endif
