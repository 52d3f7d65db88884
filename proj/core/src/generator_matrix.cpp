#include "mulink/generator_matrix.hpp"

#include <algorithm>
#include <stdexcept>

namespace mulink {

GeneratorMatrix GeneratorMatrix::from_parity_check(const ParityCheckMatrix& H) {
  const int m = H.num_checks();
  const int n = H.num_vars();

  Gf2Matrix dense(static_cast<std::size_t>(m), static_cast<std::size_t>(n));
  for (int i = 0; i < m; ++i)
    for (int j : H.check_neighbors(i))
      dense.set(static_cast<std::size_t>(i), static_cast<std::size_t>(j), true);

  const std::vector<std::size_t> pivots = dense.row_reduce();
  const std::size_t rank = pivots.size();

  std::vector<char> is_pivot(static_cast<std::size_t>(n), 0);
  std::vector<int> parity_positions;
  parity_positions.reserve(rank);
  for (std::size_t c : pivots) {
    is_pivot[c] = 1;
    parity_positions.push_back(static_cast<int>(c));
  }
  std::vector<int> msg_positions;
  msg_positions.reserve(static_cast<std::size_t>(n) - rank);
  for (int j = 0; j < n; ++j)
    if (!is_pivot[static_cast<std::size_t>(j)]) msg_positions.push_back(j);

  // In reduced form, row r reads: c[pivot_r] + sum over non-pivot columns
  // of H'[r][j] * c[j] = 0, so each parity bit is a GF(2) sum of message bits.
  Gf2Matrix parity_map(rank, msg_positions.size());
  for (std::size_t r = 0; r < rank; ++r)
    for (std::size_t k = 0; k < msg_positions.size(); ++k)
      parity_map.set(r, k,
                     dense.get(r, static_cast<std::size_t>(msg_positions[k])));

  return GeneratorMatrix(n, std::move(msg_positions), std::move(parity_positions),
                         std::move(parity_map));
}

std::vector<std::uint8_t> GeneratorMatrix::encode(
    const std::vector<std::uint8_t>& msg) const {
  if (msg.size() != msg_positions_.size())
    throw std::invalid_argument("encode: message length != K");
  std::vector<std::uint8_t> codeword(static_cast<std::size_t>(block_length_), 0);
  for (std::size_t k = 0; k < msg_positions_.size(); ++k)
    codeword[static_cast<std::size_t>(msg_positions_[k])] = msg[k] & 1u;
  const std::vector<std::uint8_t> parity = parity_map_.multiply(msg);
  for (std::size_t r = 0; r < parity_positions_.size(); ++r)
    codeword[static_cast<std::size_t>(parity_positions_[r])] = parity[r];
  return codeword;
}

std::vector<std::uint8_t> GeneratorMatrix::extract_message(
    const std::vector<std::uint8_t>& codeword) const {
  if (codeword.size() != static_cast<std::size_t>(block_length_))
    throw std::invalid_argument("extract_message: codeword length != N");
  std::vector<std::uint8_t> msg(msg_positions_.size());
  for (std::size_t k = 0; k < msg_positions_.size(); ++k)
    msg[k] = codeword[static_cast<std::size_t>(msg_positions_[k])] & 1u;
  return msg;
}

}  // namespace mulink
