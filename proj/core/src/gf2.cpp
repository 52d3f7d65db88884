#include "mulink/gf2.hpp"

#include <stdexcept>

namespace mulink {

std::vector<std::size_t> Gf2Matrix::row_reduce() {
  std::vector<std::size_t> pivots;
  std::size_t row = 0;
  for (std::size_t col = 0; col < cols_ && row < rows_; ++col) {
    std::size_t pivot = rows_;
    for (std::size_t r = row; r < rows_; ++r) {
      if (get(r, col)) {
        pivot = r;
        break;
      }
    }
    if (pivot == rows_) continue;
    swap_rows(row, pivot);
    for (std::size_t r = 0; r < rows_; ++r) {
      if (r != row && get(r, col)) xor_row(r, row);
    }
    pivots.push_back(col);
    ++row;
  }
  return pivots;
}

std::vector<std::uint8_t> Gf2Matrix::multiply(
    const std::vector<std::uint8_t>& x) const {
  if (x.size() != cols_) throw std::invalid_argument("gf2 multiply: size mismatch");
  std::vector<std::uint8_t> y(rows_, 0);
  for (std::size_t r = 0; r < rows_; ++r) {
    std::uint8_t acc = 0;
    for (std::size_t c = 0; c < cols_; ++c) acc ^= (get(r, c) & (x[c] & 1u));
    y[r] = acc;
  }
  return y;
}

}  // namespace mulink
