#include "mumimo/tmmse.hpp"

#include <cmath>
#include <stdexcept>

namespace mumimo {

namespace {

// sum_k M_k M_k^H
arma::cx_mat gram_sum(const std::vector<arma::cx_mat>& ms) {
  arma::cx_mat s(ms.front().n_rows, ms.front().n_rows, arma::fill::zeros);
  for (const auto& m : ms) s += m * m.t();
  return s;
}

void check_dims(const std::vector<arma::cx_mat>& precoders,
                const std::vector<arma::cx_mat>& receivers,
                const std::vector<ChannelStats>& stats) {
  const std::size_t k = stats.size();
  if (precoders.size() != k || receivers.size() != k) {
    throw std::invalid_argument("tmse: user counts disagree");
  }
  for (std::size_t i = 0; i < k; ++i) {
    if (precoders[i].n_rows != stats[i].txDim() ||
        receivers[i].n_rows != stats[i].rxDim() ||
        precoders[i].n_cols != receivers[i].n_cols) {
      throw std::invalid_argument("tmse: matrix shapes disagree with stats");
    }
  }
}

double real_trace(const arma::cx_mat& m) { return arma::trace(m).real(); }

// System matrix shared by all precoders: X + Y + lambda*I with
// X = sum_k H_k^H A_k A_k^H H_k and Y the correlation coupling term.
arma::cx_mat precoder_system_matrix(const std::vector<arma::cx_mat>& receivers,
                                    const std::vector<ChannelStats>& stats,
                                    double lambda) {
  const arma::uword m = stats.front().txDim();
  arma::cx_mat g(m, m, arma::fill::zeros);
  for (std::size_t k = 0; k < stats.size(); ++k) {
    const arma::cx_mat ha = stats[k].mean.t() * receivers[k];  // M x L
    g += ha * ha.t();
    g += real_trace(receivers[k].t() * stats[k].rxCorr * receivers[k]) *
         stats[k].txCorr;
  }
  g.diag() += lambda;
  return 0.5 * (g + g.t());
}

}  // namespace

double total_power(const std::vector<arma::cx_mat>& precoders) {
  double p = 0.0;
  for (const auto& b : precoders) p += arma::accu(arma::square(arma::abs(b)));
  return p;
}

double per_user_mse(const TransceiverDesign& design, const ChannelStats& statsJ,
                    double noiseVar, std::size_t j) {
  if (j >= design.precoders.size() || j >= design.receivers.size()) {
    throw std::out_of_range("per_user_mse: user index out of range");
  }
  const arma::cx_mat s = gram_sum(design.precoders);
  const arma::cx_mat& h = statsJ.mean;
  const arma::cx_mat& a = design.receivers[j];
  const arma::cx_mat& b = design.precoders[j];
  const arma::cx_mat ah = a.t() * h;  // L x M
  const double quad = real_trace(ah * s * ah.t());
  const double noise = noiseVar * real_trace(a.t() * a);
  const double cross = 2.0 * real_trace(b.t() * h.t() * a);
  const double ident = static_cast<double>(b.n_cols);
  const double uncertainty =
      real_trace(a.t() * statsJ.rxCorr * a) * real_trace(s * statsJ.txCorr);
  return quad + noise - cross + ident + uncertainty;
}

double tmse(const std::vector<arma::cx_mat>& precoders,
            const std::vector<arma::cx_mat>& receivers,
            const std::vector<ChannelStats>& stats, double noiseVar) {
  check_dims(precoders, receivers, stats);
  if (!(noiseVar > 0.0)) {
    throw std::invalid_argument("tmse: noiseVar must be positive");
  }
  TransceiverDesign view;
  view.precoders = precoders;
  view.receivers = receivers;
  double sum = 0.0;
  for (std::size_t j = 0; j < stats.size(); ++j) {
    sum += per_user_mse(view, stats[j], noiseVar, j);
  }
  return sum;
}

double tmse(const TransceiverDesign& design,
            const std::vector<ChannelStats>& stats, double noiseVar) {
  return tmse(design.precoders, design.receivers, stats, noiseVar);
}

arma::cx_mat receiver_update(const std::vector<arma::cx_mat>& precoders,
                             const ChannelStats& statsI, double noiseVar,
                             std::size_t i) {
  if (i >= precoders.size()) {
    throw std::out_of_range("receiver_update: user index out of range");
  }
  const arma::cx_mat s = gram_sum(precoders);
  const arma::cx_mat& h = statsI.mean;
  arma::cx_mat g = h * s * h.t() + real_trace(s * statsI.txCorr) * statsI.rxCorr;
  g.diag() += noiseVar;
  g = 0.5 * (g + g.t());
  if (arma::rcond(g) < 1e-14) {
    throw std::runtime_error(
        "receiver_update: system matrix is numerically singular");
  }
  return arma::solve(g, h * precoders[i], arma::solve_opts::likely_sympd);
}

std::vector<arma::cx_mat> precoder_update(
    const std::vector<arma::cx_mat>& receivers,
    const std::vector<ChannelStats>& stats, double lambda) {
  if (receivers.size() != stats.size() || stats.empty()) {
    throw std::invalid_argument("precoder_update: user counts disagree");
  }
  if (lambda < 0.0) {
    throw std::invalid_argument("precoder_update: lambda must be nonnegative");
  }
  const arma::cx_mat g = precoder_system_matrix(receivers, stats, lambda);
  if (arma::rcond(g) < 1e-14) {
    throw std::runtime_error(
        "precoder_update: system matrix is numerically singular");
  }

  // One factorization for all users: stack the right-hand sides.
  const arma::uword m = stats.front().txDim();
  arma::uword cols = 0;
  for (const auto& a : receivers) cols += a.n_cols;
  arma::cx_mat rhs(m, cols);
  arma::uword at = 0;
  for (std::size_t k = 0; k < stats.size(); ++k) {
    rhs.cols(at, at + receivers[k].n_cols - 1) = stats[k].mean.t() * receivers[k];
    at += receivers[k].n_cols;
  }
  const arma::cx_mat sol = arma::solve(g, rhs, arma::solve_opts::likely_sympd);

  std::vector<arma::cx_mat> precoders(stats.size());
  at = 0;
  for (std::size_t k = 0; k < stats.size(); ++k) {
    precoders[k] = sol.cols(at, at + receivers[k].n_cols - 1);
    at += receivers[k].n_cols;
  }
  return precoders;
}

double solve_lambda(const std::vector<arma::cx_mat>& receivers,
                    const std::vector<ChannelStats>& stats, double power,
                    double bisectionTol) {
  if (!(power > 0.0)) {
    throw std::invalid_argument("solve_lambda: power must be positive");
  }
  if (receivers.size() != stats.size() || stats.empty()) {
    throw std::invalid_argument("solve_lambda: user counts disagree");
  }
  const arma::uword m = stats.front().txDim();
  arma::cx_mat x(m, m, arma::fill::zeros);
  arma::cx_mat y(m, m, arma::fill::zeros);
  for (std::size_t k = 0; k < stats.size(); ++k) {
    const arma::cx_mat ha = stats[k].mean.t() * receivers[k];
    x += ha * ha.t();
    y += real_trace(receivers[k].t() * stats[k].rxCorr * receivers[k]) *
         stats[k].txCorr;
  }
  x = 0.5 * (x + x.t());

  arma::vec d;
  arma::cx_mat u;
  if (!arma::eig_sym(d, u, 0.5 * ((x + y) + (x + y).t()))) {
    throw std::runtime_error("solve_lambda: eigendecomposition failed");
  }
  if (d.min() < -1e-10) {
    throw std::runtime_error(
        "solve_lambda: X + Y has a negative eigenvalue beyond tolerance");
  }
  d.clamp(0.0, arma::datum::inf);

  arma::vec xdiag = arma::real(arma::diagvec(u.t() * x * u));
  xdiag.clamp(0.0, arma::datum::inf);
  const double trx = arma::accu(xdiag);
  if (trx <= 0.0) return 0.0;  // all receivers zero: constraint inactive

  // Inactive-constraint test at lambda = 0 on the range of X + Y. X never
  // leaks into the null space in exact arithmetic (X <= X + Y), so a
  // significant diagonal entry there marks corruption and forces the
  // constraint active.
  const double dtol = 1e-12 * d.max();
  bool activeByNullspace = false;
  double phi0 = 0.0;
  for (arma::uword i = 0; i < d.n_elem; ++i) {
    if (d(i) > dtol) {
      phi0 += xdiag(i) / (d(i) * d(i));
    } else if (xdiag(i) > 1e-10 * trx) {
      activeByNullspace = true;
    }
  }
  if (!activeByNullspace && phi0 <= power) return 0.0;

  const double root = std::sqrt(trx / power);
  double lo = std::max(root - d.max(), 0.0);
  double hi = std::max(root - d.min(), 0.0);
  if (hi <= 0.0) return 0.0;  // no root between the bounds

  const auto phi = [&](double lambda) {
    double p = 0.0;
    for (arma::uword i = 0; i < d.n_elem; ++i) {
      const double den = d(i) + lambda;
      p += xdiag(i) / (den * den);
    }
    return p;
  };

  // Bisection on the power mismatch, 200-step cap.
  double mid = 0.5 * (lo + hi);
  for (int step = 0; step < 200; ++step) {
    mid = 0.5 * (lo + hi);
    const double p = phi(mid);
    if (std::abs(p - power) <= bisectionTol * power) return mid;
    if (p > power) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return mid;
}

std::vector<arma::cx_mat> initial_precoders(
    const std::vector<ChannelStats>& stats, arma::uword numStreams,
    double power, Rng& rng) {
  std::vector<arma::cx_mat> precoders(stats.size());
  for (std::size_t k = 0; k < stats.size(); ++k) {
    precoders[k] = randn_cx(stats[k].txDim(), numStreams, rng);
  }
  const double scale = std::sqrt(power / total_power(precoders));
  for (auto& b : precoders) b *= scale;
  return precoders;
}

TransceiverDesign design(const std::vector<ChannelStats>& stats,
                         arma::uword numStreams, const SolverSettings& settings,
                         Rng& rng) {
  if (stats.empty()) throw std::invalid_argument("design: no users");
  if (numStreams < 1) throw std::invalid_argument("design: numStreams must be >= 1");
  if (!(settings.epsilon > 0.0) || settings.maxIterations < 1 ||
      !(settings.power > 0.0) || !(settings.noiseVar > 0.0)) {
    throw std::invalid_argument("design: invalid solver settings");
  }

  std::vector<arma::cx_mat> precoders =
      initial_precoders(stats, numStreams, settings.power, rng);
  std::vector<arma::cx_mat> receivers(stats.size());
  for (std::size_t i = 0; i < stats.size(); ++i) {
    receivers[i] = receiver_update(precoders, stats[i], settings.noiseVar, i);
  }

  TransceiverDesign out;
  for (int iter = 1; iter <= settings.maxIterations; ++iter) {
    const double lambda =
        solve_lambda(receivers, stats, settings.power, settings.bisectionTol);
    std::vector<arma::cx_mat> nextPrecoders =
        precoder_update(receivers, stats, lambda);
    std::vector<arma::cx_mat> nextReceivers(stats.size());
    for (std::size_t i = 0; i < stats.size(); ++i) {
      nextReceivers[i] =
          receiver_update(nextPrecoders, stats[i], settings.noiseVar, i);
    }

    double change = 0.0;
    for (std::size_t i = 0; i < stats.size(); ++i) {
      change += arma::accu(arma::square(arma::abs(nextReceivers[i] - receivers[i])));
      change += arma::accu(arma::square(arma::abs(nextPrecoders[i] - precoders[i])));
    }

    precoders = std::move(nextPrecoders);
    receivers = std::move(nextReceivers);
    out.lambda = lambda;
    out.iterations = iter;
    out.tmseTrace.push_back(tmse(precoders, receivers, stats, settings.noiseVar));

    if (change < settings.epsilon) {
      out.converged = true;
      break;
    }
  }
  out.precoders = std::move(precoders);
  out.receivers = std::move(receivers);
  return out;
}

}  // namespace mumimo
