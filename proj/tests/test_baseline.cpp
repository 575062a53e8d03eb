#include <catch2/catch_amalgamated.hpp>

#include "mumimo/baseline.hpp"
#include "test_util.hpp"

using namespace mumimo;

TEST_CASE("strip_uncertainty zeroes only the receive correlations") {
  Rng rng(40);
  const auto stats = testutil::random_stats(2, 3, 4, 2.0, 0.9, 0.5, rng);
  const auto stripped = strip_uncertainty(stats);
  for (std::size_t k = 0; k < stats.size(); ++k) {
    REQUIRE(arma::abs(stripped[k].rxCorr).max() == 0.0);
    REQUIRE(arma::abs(stripped[k].mean - stats[k].mean).max() == 0.0);
    REQUIRE(arma::abs(stripped[k].txCorr - stats[k].txCorr).max() == 0.0);
  }
}

TEST_CASE("baseline objective is the closed form with zero uncertainty") {
  Rng rng(41);
  const auto stats = testutil::random_stats(2, 2, 4, 10.0, 0.9, 0.2, rng);
  SolverSettings s;
  s.noiseVar = 0.01;
  Rng designRng(42);
  const TransceiverDesign d = design_baseline(stats, 2, s, designRng);
  REQUIRE(d.converged);
  const double reduced = tmse(d, strip_uncertainty(stats), s.noiseVar);
  REQUIRE(d.tmseTrace.back() == Catch::Approx(reduced).epsilon(1e-12));
}

TEST_CASE("baseline keeps the power and slackness invariants") {
  Rng rng(43);
  for (int trial = 0; trial < 10; ++trial) {
    const double w = std::pow(10.0, rng.uniform() * 3.0);
    const auto stats = testutil::random_stats(2, 2, 4, w, 0.9, 0.0, rng);
    SolverSettings s;
    s.noiseVar = std::pow(10.0, -3.0 * rng.uniform());
    Rng designRng(derive_seed(900, {static_cast<std::uint64_t>(trial)}));
    const TransceiverDesign d = design_baseline(stats, 2, s, designRng);
    const double used = total_power(d.precoders);
    REQUIRE(used <= s.power * (1.0 + 1e-9));
    REQUIRE(std::abs(d.lambda * (used - s.power)) <= 1e-6 * s.power);
    for (std::size_t i = 1; i < d.tmseTrace.size(); ++i) {
      REQUIRE(d.tmseTrace[i] <= d.tmseTrace[i - 1] + 1e-9);
    }
  }
}

TEST_CASE("robust design beats the baseline on the true average MSE") {
  // Reference configuration: W = 10, N = 2, SNR = 20 dB.
  Rng rng(44);
  const auto stats = testutil::random_stats(2, 2, 4, 10.0, 0.9, 0.0, rng);
  SolverSettings s;
  s.noiseVar = 0.01;
  Rng r1(50), r2(51);
  const TransceiverDesign robust = design(stats, 2, s, r1);
  const TransceiverDesign base = design_baseline(stats, 2, s, r2);

  // closed-form comparison on the true statistics
  const double robustClosed = tmse(robust, stats, s.noiseVar);
  const double baseClosed = tmse(base, stats, s.noiseVar);
  REQUIRE(robustClosed < baseClosed);

  // Monte Carlo comparison over true channel draws
  Rng mc1(52), mc2(53);
  const auto mcRobust = testutil::mc_tmse(robust, stats, s.noiseVar, 10000, mc1);
  const auto mcBase = testutil::mc_tmse(base, stats, s.noiseVar, 10000, mc2);
  const double gap = mcBase.mean - mcRobust.mean;
  const double se = std::sqrt(mcBase.se * mcBase.se + mcRobust.se * mcRobust.se);
  REQUIRE(gap > 3.0 * se);
}
