#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

namespace mulink {

// Dense GF(2) matrix with rows packed into 64-bit words. Dense storage is
// only used offline (generator construction); decoding works on the sparse
// adjacency.
class Gf2Matrix {
 public:
  Gf2Matrix(std::size_t rows, std::size_t cols)
      : rows_(rows), cols_(cols), words_((cols + 63) / 64),
        bits_(rows * words_, 0) {}

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }

  bool get(std::size_t r, std::size_t c) const {
    return (bits_[r * words_ + c / 64] >> (c % 64)) & 1u;
  }

  void set(std::size_t r, std::size_t c, bool v) {
    std::uint64_t& w = bits_[r * words_ + c / 64];
    const std::uint64_t mask = std::uint64_t{1} << (c % 64);
    if (v)
      w |= mask;
    else
      w &= ~mask;
  }

  void xor_row(std::size_t dst, std::size_t src) {
    std::uint64_t* d = &bits_[dst * words_];
    const std::uint64_t* s = &bits_[src * words_];
    for (std::size_t k = 0; k < words_; ++k) d[k] ^= s[k];
  }

  void swap_rows(std::size_t a, std::size_t b) {
    if (a == b) return;
    std::uint64_t* pa = &bits_[a * words_];
    std::uint64_t* pb = &bits_[b * words_];
    for (std::size_t k = 0; k < words_; ++k) std::swap(pa[k], pb[k]);
  }

  bool row_empty(std::size_t r) const {
    const std::uint64_t* p = &bits_[r * words_];
    for (std::size_t k = 0; k < words_; ++k)
      if (p[k]) return false;
    return true;
  }

  // In-place Gauss-Jordan reduction. Returns the pivot column of each pivot
  // row in order; rank = returned size. Rows below the rank are zero.
  std::vector<std::size_t> row_reduce();

  // y = M * x over GF(2); x has cols() entries, result rows() entries.
  std::vector<std::uint8_t> multiply(const std::vector<std::uint8_t>& x) const;

 private:
  std::size_t rows_, cols_, words_;
  std::vector<std::uint64_t> bits_;
};

}  // namespace mulink
