#include "mumimo/modem.hpp"

#include <stdexcept>

namespace mumimo {

namespace {
constexpr double kInvSqrt2 = 0.70710678118654752440;
}

arma::cx_vec qpsk_modulate(const std::vector<std::uint8_t>& bits) {
  if (bits.size() % 2 != 0) {
    throw std::invalid_argument("qpsk_modulate: bit count must be even");
  }
  arma::cx_vec symbols(bits.size() / 2);
  for (arma::uword s = 0; s < symbols.n_elem; ++s) {
    const double re = bits[2 * s] ? -kInvSqrt2 : kInvSqrt2;
    const double im = bits[2 * s + 1] ? -kInvSqrt2 : kInvSqrt2;
    symbols(s) = {re, im};
  }
  return symbols;
}

std::vector<std::uint8_t> qpsk_demodulate(const arma::cx_vec& symbols) {
  std::vector<std::uint8_t> bits(2 * symbols.n_elem);
  for (arma::uword s = 0; s < symbols.n_elem; ++s) {
    bits[2 * s] = symbols(s).real() < 0.0 ? 1 : 0;
    bits[2 * s + 1] = symbols(s).imag() < 0.0 ? 1 : 0;
  }
  return bits;
}

ModemSymbolBlock random_qpsk_block(arma::uword numSymbols, Rng& rng) {
  ModemSymbolBlock block;
  block.bits.resize(2 * numSymbols);
  for (auto& b : block.bits) b = rng.bit() ? 1 : 0;
  block.symbols = qpsk_modulate(block.bits);
  return block;
}

}  // namespace mumimo
