#pragma once

#include <cstdint>
#include <vector>

#include "mulink/gf2.hpp"
#include "mulink/parity_check_matrix.hpp"

namespace mulink {

// Systematic generator derived from H by one-time Gauss-Jordan elimination
// with column pivoting. Message bits occupy the non-pivot columns of H (their
// original positions are recoverable through message_positions()); the pivot
// columns carry parity. G * H^T = 0 by construction.
class GeneratorMatrix {
 public:
  static GeneratorMatrix from_parity_check(const ParityCheckMatrix& H);

  int message_length() const { return static_cast<int>(msg_positions_.size()); }
  int block_length() const { return block_length_; }

  // original H columns holding message bits, ascending
  const std::vector<int>& message_positions() const { return msg_positions_; }

  // msg has message_length() bits; returns an N-bit codeword with zero
  // syndrome under the originating H
  std::vector<std::uint8_t> encode(const std::vector<std::uint8_t>& msg) const;

  std::vector<std::uint8_t> extract_message(
      const std::vector<std::uint8_t>& codeword) const;

 private:
  GeneratorMatrix(int block_length, std::vector<int> msg_positions,
                  std::vector<int> parity_positions, Gf2Matrix parity_map)
      : block_length_(block_length), msg_positions_(std::move(msg_positions)),
        parity_positions_(std::move(parity_positions)),
        parity_map_(std::move(parity_map)) {}

  int block_length_;
  std::vector<int> msg_positions_;     // non-pivot columns
  std::vector<int> parity_positions_;  // pivot columns, one per reduced row
  Gf2Matrix parity_map_;               // rank x K: parity bits = map * msg
};

}  // namespace mulink
