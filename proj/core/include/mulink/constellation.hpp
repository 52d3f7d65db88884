#pragma once

#include <complex>
#include <cstdint>
#include <span>
#include <vector>

namespace mulink {

// Unit-average-energy complex constellation with bit labels. Bit j of a
// label is taken MSB-first, so bit 0 is the first bit in stream order.
struct Constellation {
  std::vector<std::complex<double>> points;  // indexed by label value
  int bits_per_symbol = 0;

  int size() const { return static_cast<int>(points.size()); }

  int bit_of(std::uint32_t label, int bit_index) const {
    return static_cast<int>((label >> (bits_per_symbol - 1 - bit_index)) & 1u);
  }

  void validate() const;
};

// QPSK with the anti-gray labeling: 00 -> (+1+i)/sqrt2, 11 -> (-1+i)/sqrt2,
// 01 -> (-1-i)/sqrt2, 10 -> (+1-i)/sqrt2. Walking the circle, adjacent
// points alternate Hamming distance 2,1,2,1.
const Constellation& qpsk_anti_gray();

// Maps a bit stream (length divisible by bits_per_symbol) onto symbols.
std::vector<std::complex<double>> modulate(const Constellation& c,
                                           std::span<const std::uint8_t> bits);

struct SoftSymbol {
  std::complex<double> mean;  // sum_a P[a] a
  double variance = 0.0;      // sum_a P[a]|a|^2 - |mean|^2
};

// Symbol statistics under independent per-bit priors, LLR = log p0/p1.
SoftSymbol soft_symbol(const Constellation& c, std::span<const double> prior_llrs);

// Extrinsic LLRs of each bit of one symbol under the model y = mu*x + n,
// n complex Gaussian with variance nu2. Exact sum over the constellation;
// the prior of the bit being demapped is excluded, so
// posterior = extrinsic + prior holds identically.
std::vector<double> demap_llr(const Constellation& c, std::complex<double> y,
                              double mu, double nu2,
                              std::span<const double> prior_llrs);

}  // namespace mulink
