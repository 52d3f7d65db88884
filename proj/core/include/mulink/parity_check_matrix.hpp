#pragma once

#include <cstdint>
#include <utility>
#include <vector>

namespace mulink {

// Sparse M x N binary parity-check matrix stored as bipartite adjacency:
// check_neighbors(i) lists the variable nodes of check i, var_neighbors(j)
// the check nodes of variable j. Both sides are sorted, duplicate-free and
// mutually consistent; every node has degree >= 1. Immutable once built.
class ParityCheckMatrix {
 public:
  // check_adjacency[i] = variable indices of check i (any order, no dups).
  ParityCheckMatrix(int num_checks, int num_vars,
                    std::vector<std::vector<int>> check_adjacency);

  static ParityCheckMatrix from_edges(
      int num_checks, int num_vars,
      const std::vector<std::pair<int, int>>& check_var_edges);

  int num_checks() const { return num_checks_; }
  int num_vars() const { return num_vars_; }
  int num_edges() const { return num_edges_; }

  const std::vector<int>& check_neighbors(int check) const {
    return rows_[static_cast<std::size_t>(check)];
  }
  const std::vector<int>& var_neighbors(int var) const {
    return cols_[static_cast<std::size_t>(var)];
  }

  int check_degree(int check) const {
    return static_cast<int>(rows_[static_cast<std::size_t>(check)].size());
  }
  int var_degree(int var) const {
    return static_cast<int>(cols_[static_cast<std::size_t>(var)].size());
  }

  int max_check_degree() const;
  int max_var_degree() const;

  bool operator==(const ParityCheckMatrix& other) const = default;

 private:
  int num_checks_ = 0;
  int num_vars_ = 0;
  int num_edges_ = 0;
  std::vector<std::vector<int>> rows_;  // per check: variable indices
  std::vector<std::vector<int>> cols_;  // per variable: check indices
};

// H * x^T over GF(2); x holds N bits (0/1), result holds M bits.
std::vector<std::uint8_t> syndrome(const ParityCheckMatrix& H,
                                   const std::vector<std::uint8_t>& x);

bool is_codeword(const ParityCheckMatrix& H, const std::vector<std::uint8_t>& x);

// Node-perspective degree distribution polynomials: coefficient k is the
// fraction of nodes with degree k+1, so a dv=3 regular code has
// variable = {0, 0, 1} (upsilon(x) = x^2).
struct DegreeDistribution {
  std::vector<double> variable;
  std::vector<double> check;

  static DegreeDistribution of(const ParityCheckMatrix& H);

  // throws std::invalid_argument unless both coefficient lists are
  // nonnegative and sum to 1
  void validate() const;
};

// Integral over [0,1] of the polynomial with the given coefficient list.
double polynomial_integral01(const std::vector<double>& coeffs);

}  // namespace mulink
