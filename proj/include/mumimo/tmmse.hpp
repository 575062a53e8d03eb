/**
 * @file tmmse.hpp
 * @brief Robust total-MMSE joint precoder/receiver design from statistical
 *        CSI: average-MSE evaluation, the KKT update rules, the power
 *        multiplier solved by eigen-reduction plus bisection, and the
 *        alternating iteration.
 */
#ifndef MUMIMO_TMMSE_HPP
#define MUMIMO_TMMSE_HPP

#include <cstddef>
#include <vector>

#include <armadillo>

#include "mumimo/channel.hpp"
#include "mumimo/rng.hpp"

namespace mumimo {

struct SolverSettings {
  double epsilon = 1e-4;        // stop when sum ||dA||_F^2 + ||dB||_F^2 < epsilon
  int maxIterations = 100;
  double bisectionTol = 1e-10;  // relative tolerance on the power mismatch
  double power = 1.0;           // total transmit power P
  double noiseVar = 1.0;        // per-antenna noise power sigma_n^2
};

/// Joint design for all K users plus iteration diagnostics.
struct TransceiverDesign {
  std::vector<arma::cx_mat> precoders;  // K of M x L
  std::vector<arma::cx_mat> receivers;  // K of N_k x L
  double lambda = 0.0;                  // power-constraint multiplier
  int iterations = 0;                   // full iterations executed
  bool converged = false;
  std::vector<double> tmseTrace;        // total MSE after each full iteration
};

/// tr(sum_k B_k B_k^H)
double total_power(const std::vector<arma::cx_mat>& precoders);

/// Average MSE of user j under statistical CSI, in closed form.
double per_user_mse(const TransceiverDesign& design, const ChannelStats& statsJ,
                    double noiseVar, std::size_t j);

/// Total average MSE, sum of the per-user terms.
double tmse(const std::vector<arma::cx_mat>& precoders,
            const std::vector<arma::cx_mat>& receivers,
            const std::vector<ChannelStats>& stats, double noiseVar);
double tmse(const TransceiverDesign& design,
            const std::vector<ChannelStats>& stats, double noiseVar);

/// MMSE receiver of user i for fixed precoders. Throws std::runtime_error
/// when the system matrix is numerically singular (condition > 1e14).
arma::cx_mat receiver_update(const std::vector<arma::cx_mat>& precoders,
                             const ChannelStats& statsI, double noiseVar,
                             std::size_t i);

/// Precoders of all users for fixed receivers and multiplier; the shared
/// system matrix is factored once.
std::vector<arma::cx_mat> precoder_update(
    const std::vector<arma::cx_mat>& receivers,
    const std::vector<ChannelStats>& stats, double lambda);

/// Power-constraint multiplier for fixed receivers: 0 when the constraint
/// is inactive, otherwise the bisection root of the reduced power equation.
double solve_lambda(const std::vector<arma::cx_mat>& receivers,
                    const std::vector<ChannelStats>& stats, double power,
                    double bisectionTol = 1e-10);

/// Random initial precoders: i.i.d. CN(0,1) entries scaled to use the full
/// power budget.
std::vector<arma::cx_mat> initial_precoders(
    const std::vector<ChannelStats>& stats, arma::uword numStreams,
    double power, Rng& rng);

/// Alternating joint design. Deterministic given the stream; returns with
/// converged == false when maxIterations is hit.
TransceiverDesign design(const std::vector<ChannelStats>& stats,
                         arma::uword numStreams, const SolverSettings& settings,
                         Rng& rng);

}  // namespace mumimo

#endif
