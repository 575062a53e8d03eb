#include "mumimo/linksim.hpp"

#include <atomic>
#include <cmath>
#include <cstdio>
#include <functional>
#include <mutex>
#include <stdexcept>
#include <thread>

#include "mumimo/baseline.hpp"
#include "mumimo/modem.hpp"

namespace mumimo {

namespace {

// Fixed ids for substream derivation. Scheme ids are fixed per name so a
// scheme's results do not depend on which other schemes are enabled.
constexpr std::uint64_t kExpBer = 1;
constexpr std::uint64_t kExpMse = 2;
constexpr std::uint64_t kExpConv = 3;
constexpr std::uint64_t kStreamChannel = 1;
constexpr std::uint64_t kStreamSymbols = 2;
constexpr std::uint64_t kStreamDesign = 3;

double noise_var_for_snr(double power, double snrDb) {
  return power * std::pow(10.0, -snrDb / 10.0);
}

std::string format_value(double v) {
  if (std::isinf(v)) return "inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%g", v);
  return buf;
}

struct MeanStderr {
  double mean = 0.0;
  double se = 0.0;
};

MeanStderr mean_stderr(const std::vector<double>& values) {
  MeanStderr out;
  const std::size_t n = values.size();
  if (n == 0) return out;
  double sum = 0.0;
  for (double v : values) sum += v;
  out.mean = sum / static_cast<double>(n);
  if (n < 2) return out;
  double ss = 0.0;
  for (double v : values) ss += (v - out.mean) * (v - out.mean);
  out.se = std::sqrt(ss / static_cast<double>(n - 1) / static_cast<double>(n));
  return out;
}

// Runs fn(0..count-1) on up to `threads` workers. Results must be written
// to per-index slots; the caller reduces them in index order afterwards so
// output does not depend on the thread count.
void parallel_for(std::size_t count, int threads,
                  const std::function<void(std::size_t)>& fn) {
  std::size_t workers = threads <= 0
                            ? std::max(1u, std::thread::hardware_concurrency())
                            : static_cast<std::size_t>(threads);
  workers = std::min(workers, count);
  if (workers <= 1) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr firstError;
  std::mutex errorLock;
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (std::size_t w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (;;) {
        const std::size_t i = next.fetch_add(1);
        if (i >= count) return;
        try {
          fn(i);
        } catch (...) {
          std::lock_guard<std::mutex> guard(errorLock);
          if (!firstError) firstError = std::current_exception();
          return;
        }
      }
    });
  }
  for (auto& t : pool) t.join();
  if (firstError) std::rethrow_exception(firstError);
}

// Statistical CSI for all users with a fresh random channel mean per user.
std::vector<ChannelStats> draw_stats(const SimConfig& cfg, double w, Rng& rng) {
  std::vector<ChannelStats> stats(cfg.k);
  const CorrelationMatrix rx = exp_correlation(cfg.n, cfg.rhoRx);
  const CorrelationMatrix tx = exp_correlation(cfg.m, cfg.rhoTx);
  for (unsigned k = 0; k < cfg.k; ++k) {
    ChannelStatsRaw raw;
    raw.mean0 = randn_cx(cfg.n, cfg.m, rng);
    raw.rxCorr0 = rx;
    raw.txCorr = tx;
    raw.w = w;
    stats[k] = to_equivalent(raw);
  }
  return stats;
}

TransceiverDesign design_for_scheme(const std::string& scheme,
                                    const std::vector<ChannelStats>& stats,
                                    const SimConfig& cfg, double noiseVar,
                                    Rng& rng) {
  SolverSettings settings;
  settings.epsilon = cfg.epsilon;
  settings.maxIterations = cfg.maxIterations;
  settings.bisectionTol = cfg.bisectionTol;
  settings.power = cfg.power;
  settings.noiseVar = noiseVar;
  if (scheme == "baseline") return design_baseline(stats, cfg.l, settings, rng);
  return design(stats, cfg.l, settings, rng);
}

// One (w, trial) cell evaluated for designCount = |snrs| * |schemes|
// designs on shared channel, symbol and noise draws.
TrialMetrics link_trial(const SimConfig& cfg, std::uint64_t expId,
                        const std::vector<double>& snrs, std::size_t wIndex,
                        std::size_t trial) {
  const double w = cfg.wList.at(wIndex);
  Rng chanRng(derive_seed(cfg.seed, {expId, wIndex, trial, kStreamChannel}));
  Rng symRng(derive_seed(cfg.seed, {expId, wIndex, trial, kStreamSymbols}));

  const std::vector<ChannelStats> stats = draw_stats(cfg, w, chanRng);

  std::vector<TransceiverDesign> designs;
  std::vector<double> noiseVars;
  designs.reserve(snrs.size() * cfg.schemes.size());
  for (std::size_t s = 0; s < snrs.size(); ++s) {
    const double noiseVar = noise_var_for_snr(cfg.power, snrs[s]);
    for (const auto& scheme : cfg.schemes) {
      // schemes share the initial draw so comparisons are seed-matched
      Rng designRng(derive_seed(cfg.seed, {expId, wIndex, trial, kStreamDesign, s}));
      designs.push_back(design_for_scheme(scheme, stats, cfg, noiseVar, designRng));
      noiseVars.push_back(noiseVar);
    }
  }
  std::vector<const TransceiverDesign*> designPtrs;
  designPtrs.reserve(designs.size());
  for (const auto& d : designs) designPtrs.push_back(&d);

  std::vector<ChannelSampler> samplers;
  samplers.reserve(stats.size());
  for (const auto& s : stats) samplers.emplace_back(s);

  TrialMetrics metrics;
  metrics.results.resize(designs.size());
  for (int r = 0; r < cfg.nReal; ++r) {
    std::vector<ChannelRealization> realizations(cfg.k);
    for (unsigned k = 0; k < cfg.k; ++k) realizations[k] = samplers[k].draw(chanRng);
    const std::vector<TrialResult> batch =
        run_trial_multi(designPtrs, noiseVars, realizations, cfg.nSym, symRng);
    for (std::size_t d = 0; d < batch.size(); ++d) metrics.results[d].merge(batch[d]);
  }
  return metrics;
}

}  // namespace

void TrialResult::merge(const TrialResult& other) {
  bitErrors += other.bitErrors;
  bitsSent += other.bitsSent;
  sumSquaredError += other.sumSquaredError;
  symbolsSent += other.symbolsSent;
}

double TrialResult::ber() const {
  return bitsSent > 0 ? static_cast<double>(bitErrors) / static_cast<double>(bitsSent)
                      : 0.0;
}

double TrialResult::meanSquaredError() const {
  return symbolsSent > 0 ? sumSquaredError / static_cast<double>(symbolsSent) : 0.0;
}

std::vector<TrialResult> run_trial_multi(
    const std::vector<const TransceiverDesign*>& designs,
    const std::vector<double>& noiseVars,
    const std::vector<ChannelRealization>& realizations, long long symbolSlots,
    Rng& rng) {
  if (designs.empty() || designs.size() != noiseVars.size()) {
    throw std::invalid_argument("run_trial_multi: design/noise counts disagree");
  }
  const std::size_t users = realizations.size();
  for (const auto* d : designs) {
    if (d->precoders.size() != users || d->receivers.size() != users) {
      throw std::invalid_argument("run_trial_multi: user counts disagree");
    }
    for (std::size_t i = 0; i < users; ++i) {
      if (realizations[i].h.n_rows != d->receivers[i].n_rows ||
          realizations[i].h.n_cols != d->precoders[i].n_rows) {
        throw std::invalid_argument("run_trial_multi: channel shapes disagree");
      }
    }
  }
  const arma::uword streams = designs.front()->precoders.front().n_cols;

  std::vector<double> noiseSd(noiseVars.size());
  for (std::size_t d = 0; d < noiseVars.size(); ++d) noiseSd[d] = std::sqrt(noiseVars[d]);

  std::vector<TrialResult> results(designs.size());
  std::vector<ModemSymbolBlock> blocks(users);
  std::vector<arma::cx_vec> noiseUnit(users);

  for (long long slot = 0; slot < symbolSlots; ++slot) {
    for (std::size_t k = 0; k < users; ++k) blocks[k] = random_qpsk_block(streams, rng);
    for (std::size_t i = 0; i < users; ++i) {
      noiseUnit[i].set_size(realizations[i].h.n_rows);
      for (auto& v : noiseUnit[i]) v = rng.cgaussian();
    }

    for (std::size_t d = 0; d < designs.size(); ++d) {
      const TransceiverDesign& dsg = *designs[d];
      arma::cx_vec sent(dsg.precoders.front().n_rows, arma::fill::zeros);
      for (std::size_t k = 0; k < users; ++k) sent += dsg.precoders[k] * blocks[k].symbols;

      TrialResult& res = results[d];
      for (std::size_t i = 0; i < users; ++i) {
        const arma::cx_vec received =
            realizations[i].h * sent + noiseSd[d] * noiseUnit[i];
        const arma::cx_vec filtered = dsg.receivers[i].t() * received;
        const std::vector<std::uint8_t> decided = qpsk_demodulate(filtered);
        for (std::size_t b = 0; b < decided.size(); ++b) {
          if (decided[b] != blocks[i].bits[b]) ++res.bitErrors;
        }
        res.bitsSent += static_cast<long long>(decided.size());
        res.sumSquaredError +=
            arma::accu(arma::square(arma::abs(blocks[i].symbols - filtered)));
      }
      res.symbolsSent += 1;
    }
  }
  return results;
}

TrialResult run_trial(const TransceiverDesign& design,
                      const std::vector<ChannelRealization>& realizations,
                      double noiseVar, long long symbolSlots, Rng& rng) {
  return run_trial_multi({&design}, {noiseVar}, realizations, symbolSlots, rng)
      .front();
}

TrialMetrics ber_trial(const SimConfig& config, std::size_t wIndex,
                       std::size_t trial) {
  return link_trial(config, kExpBer, config.snrDbList, wIndex, trial);
}

TrialMetrics mse_trial(const SimConfig& config, std::size_t wIndex,
                       std::size_t trial) {
  return link_trial(config, kExpMse, {config.mseSnrDb}, wIndex, trial);
}

std::vector<ExperimentRecord> experiment_ber_vs_snr(const SimConfig& config,
                                                    int threads) {
  const std::size_t nw = config.wList.size();
  const std::size_t trials = static_cast<std::size_t>(config.nTrials);
  std::vector<TrialMetrics> cells(nw * trials);
  parallel_for(nw * trials, threads, [&](std::size_t i) {
    cells[i] = ber_trial(config, i / trials, i % trials);
  });

  std::vector<ExperimentRecord> records;
  for (std::size_t wi = 0; wi < nw; ++wi) {
    const std::string tag = "ber-vs-snr/w=" + format_value(config.wList[wi]);
    for (std::size_t s = 0; s < config.snrDbList.size(); ++s) {
      for (std::size_t c = 0; c < config.schemes.size(); ++c) {
        const std::size_t d = s * config.schemes.size() + c;
        std::vector<double> perTrial(trials);
        for (std::size_t t = 0; t < trials; ++t) {
          perTrial[t] = cells[wi * trials + t].results[d].ber();
        }
        const MeanStderr stat = mean_stderr(perTrial);
        records.push_back({tag, config.schemes[c], "snr_db", config.snrDbList[s],
                           stat.mean, stat.se, static_cast<long>(trials),
                           config.seed});
      }
    }
  }
  return records;
}

std::vector<ExperimentRecord> experiment_mse_vs_w(const SimConfig& config,
                                                  int threads) {
  const std::size_t nw = config.wList.size();
  const std::size_t trials = static_cast<std::size_t>(config.nTrials);
  std::vector<TrialMetrics> cells(nw * trials);
  parallel_for(nw * trials, threads, [&](std::size_t i) {
    cells[i] = mse_trial(config, i / trials, i % trials);
  });

  const std::string tag = "mse-vs-w/snr=" + format_value(config.mseSnrDb);
  std::vector<ExperimentRecord> records;
  for (std::size_t wi = 0; wi < nw; ++wi) {
    for (std::size_t c = 0; c < config.schemes.size(); ++c) {
      std::vector<double> perTrial(trials);
      for (std::size_t t = 0; t < trials; ++t) {
        // average squared error per user per symbol vector
        perTrial[t] = cells[wi * trials + t].results[c].meanSquaredError() /
                      static_cast<double>(config.k);
      }
      const MeanStderr stat = mean_stderr(perTrial);
      records.push_back({tag, config.schemes[c], "w", config.wList[wi], stat.mean,
                         stat.se, static_cast<long>(trials), config.seed});
    }
  }
  return records;
}

std::vector<ExperimentRecord> experiment_convergence(const SimConfig& config,
                                                     int threads) {
  const std::size_t nSnr = config.snrDbList.size();
  const std::size_t seeds = static_cast<std::size_t>(config.nTrials);
  const std::size_t nSchemes = config.schemes.size();
  std::vector<std::vector<double>> traces(nSnr * seeds * nSchemes);

  parallel_for(nSnr * seeds, threads, [&](std::size_t i) {
    const std::size_t si = i / seeds;
    const std::size_t seedIdx = i % seeds;
    Rng chanRng(derive_seed(config.seed, {kExpConv, si, seedIdx, kStreamChannel}));
    const std::vector<ChannelStats> stats = draw_stats(config, config.convW, chanRng);
    const double noiseVar = noise_var_for_snr(config.power, config.snrDbList[si]);
    for (std::size_t c = 0; c < nSchemes; ++c) {
      Rng designRng(
          derive_seed(config.seed, {kExpConv, si, seedIdx, kStreamDesign}));
      const TransceiverDesign d =
          design_for_scheme(config.schemes[c], stats, config, noiseVar, designRng);
      traces[(si * seeds + seedIdx) * nSchemes + c] = d.tmseTrace;
    }
  });

  std::vector<ExperimentRecord> records;
  for (std::size_t si = 0; si < nSnr; ++si) {
    const std::string tag = "convergence/w=" + format_value(config.convW) +
                            "/snr=" + format_value(config.snrDbList[si]);
    for (std::size_t c = 0; c < nSchemes; ++c) {
      std::size_t maxLen = 0;
      for (std::size_t seedIdx = 0; seedIdx < seeds; ++seedIdx) {
        maxLen = std::max(maxLen,
                          traces[(si * seeds + seedIdx) * nSchemes + c].size());
      }
      for (std::size_t it = 0; it < maxLen; ++it) {
        std::vector<double> values(seeds);
        for (std::size_t seedIdx = 0; seedIdx < seeds; ++seedIdx) {
          const auto& tr = traces[(si * seeds + seedIdx) * nSchemes + c];
          // converged runs hold their final value
          values[seedIdx] = it < tr.size() ? tr[it] : tr.back();
        }
        const MeanStderr stat = mean_stderr(values);
        records.push_back({tag, config.schemes[c], "iteration",
                           static_cast<double>(it + 1), stat.mean, stat.se,
                           static_cast<long>(seeds), config.seed});
      }
    }
  }
  return records;
}

}  // namespace mumimo
