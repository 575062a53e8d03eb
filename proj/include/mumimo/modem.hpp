/**
 * @file modem.hpp
 * @brief Gray-mapped QPSK at unit average symbol energy.
 */
#ifndef MUMIMO_MODEM_HPP
#define MUMIMO_MODEM_HPP

#include <cstdint>
#include <vector>

#include <armadillo>

#include "mumimo/rng.hpp"

namespace mumimo {

/// A run of bits with its modulated symbols; len(bits) = 2 * len(symbols).
struct ModemSymbolBlock {
  std::vector<std::uint8_t> bits;
  arma::cx_vec symbols;
};

/// Pair (b0, b1) -> ((1 - 2*b0) + j*(1 - 2*b1)) / sqrt(2).
/// Throws std::invalid_argument on an odd number of bits.
arma::cx_vec qpsk_modulate(const std::vector<std::uint8_t>& bits);

/// Per-component sign decision; inverse of the mapping on noiseless input.
std::vector<std::uint8_t> qpsk_demodulate(const arma::cx_vec& symbols);

/// Draws 2*numSymbols fair bits and modulates them.
ModemSymbolBlock random_qpsk_block(arma::uword numSymbols, Rng& rng);

}  // namespace mumimo

#endif
