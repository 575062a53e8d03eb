#ifndef MUMIMO_RNG_HPP
#define MUMIMO_RNG_HPP

#include <complex>
#include <cstdint>
#include <initializer_list>
#include <random>

namespace mumimo {

// SplitMix64 mixing step (Steele, Lea, Flood 2014).
inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

// Derives a substream seed from a master seed and a path of indices
// (counter-based splitting). Streams with distinct paths are independent
// and adding streams later never perturbs existing ones.
inline std::uint64_t derive_seed(std::uint64_t master,
                                 std::initializer_list<std::uint64_t> path) {
  std::uint64_t h = splitmix64(master);
  for (std::uint64_t id : path) h = splitmix64(h ^ id);
  return h;
}

/// Seeded random stream. One instance per logical stream; not thread-safe,
/// hand each worker its own.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  // N(0,1)
  double gaussian() { return normal_(engine_); }

  // Circularly-symmetric complex Gaussian with unit total variance,
  // i.e. real and imaginary parts each N(0, 1/2).
  std::complex<double> cgaussian() {
    constexpr double kInvSqrt2 = 0.70710678118654752440;
    return {kInvSqrt2 * gaussian(), kInvSqrt2 * gaussian()};
  }

  double uniform() {
    return std::uniform_real_distribution<double>(0.0, 1.0)(engine_);
  }

  bool bit() { return (engine_() & 1ULL) != 0; }

  std::uint64_t raw() { return engine_(); }

 private:
  std::mt19937_64 engine_;
  std::normal_distribution<double> normal_{0.0, 1.0};
};

}  // namespace mumimo

#endif
