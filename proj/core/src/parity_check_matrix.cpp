#include "mulink/parity_check_matrix.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace mulink {

ParityCheckMatrix::ParityCheckMatrix(int num_checks, int num_vars,
                                     std::vector<std::vector<int>> check_adjacency)
    : num_checks_(num_checks), num_vars_(num_vars), rows_(std::move(check_adjacency)) {
  if (num_checks < 1 || num_vars < 1)
    throw std::invalid_argument("parity check matrix: M and N must be >= 1");
  if (rows_.size() != static_cast<std::size_t>(num_checks))
    throw std::invalid_argument("parity check matrix: row count mismatch");

  cols_.assign(static_cast<std::size_t>(num_vars), {});
  for (int i = 0; i < num_checks; ++i) {
    auto& row = rows_[static_cast<std::size_t>(i)];
    std::sort(row.begin(), row.end());
    if (std::adjacent_find(row.begin(), row.end()) != row.end())
      throw std::invalid_argument("parity check matrix: duplicate edge");
    for (int j : row) {
      if (j < 0 || j >= num_vars)
        throw std::invalid_argument("parity check matrix: variable index out of range");
      cols_[static_cast<std::size_t>(j)].push_back(i);
    }
    num_edges_ += static_cast<int>(row.size());
  }

  for (int i = 0; i < num_checks; ++i)
    if (rows_[static_cast<std::size_t>(i)].empty())
      throw std::invalid_argument("parity check matrix: empty check node");
  for (int j = 0; j < num_vars; ++j)
    if (cols_[static_cast<std::size_t>(j)].empty())
      throw std::invalid_argument("parity check matrix: unconnected variable node");
  // cols_ entries are appended in ascending check order already
}

ParityCheckMatrix ParityCheckMatrix::from_edges(
    int num_checks, int num_vars,
    const std::vector<std::pair<int, int>>& check_var_edges) {
  std::vector<std::vector<int>> rows(static_cast<std::size_t>(num_checks));
  for (auto [c, v] : check_var_edges) {
    if (c < 0 || c >= num_checks)
      throw std::invalid_argument("parity check matrix: check index out of range");
    rows[static_cast<std::size_t>(c)].push_back(v);
  }
  return {num_checks, num_vars, std::move(rows)};
}

int ParityCheckMatrix::max_check_degree() const {
  int d = 0;
  for (const auto& r : rows_) d = std::max(d, static_cast<int>(r.size()));
  return d;
}

int ParityCheckMatrix::max_var_degree() const {
  int d = 0;
  for (const auto& c : cols_) d = std::max(d, static_cast<int>(c.size()));
  return d;
}

std::vector<std::uint8_t> syndrome(const ParityCheckMatrix& H,
                                   const std::vector<std::uint8_t>& x) {
  if (x.size() != static_cast<std::size_t>(H.num_vars()))
    throw std::invalid_argument("syndrome: word length != N");
  std::vector<std::uint8_t> s(static_cast<std::size_t>(H.num_checks()), 0);
  for (int i = 0; i < H.num_checks(); ++i) {
    std::uint8_t acc = 0;
    for (int j : H.check_neighbors(i)) acc ^= (x[static_cast<std::size_t>(j)] & 1u);
    s[static_cast<std::size_t>(i)] = acc;
  }
  return s;
}

bool is_codeword(const ParityCheckMatrix& H, const std::vector<std::uint8_t>& x) {
  if (x.size() != static_cast<std::size_t>(H.num_vars()))
    throw std::invalid_argument("is_codeword: word length != N");
  for (int i = 0; i < H.num_checks(); ++i) {
    std::uint8_t acc = 0;
    for (int j : H.check_neighbors(i)) acc ^= (x[static_cast<std::size_t>(j)] & 1u);
    if (acc) return false;
  }
  return true;
}

DegreeDistribution DegreeDistribution::of(const ParityCheckMatrix& H) {
  DegreeDistribution dd;
  dd.variable.assign(static_cast<std::size_t>(H.max_var_degree()), 0.0);
  dd.check.assign(static_cast<std::size_t>(H.max_check_degree()), 0.0);
  for (int j = 0; j < H.num_vars(); ++j)
    dd.variable[static_cast<std::size_t>(H.var_degree(j) - 1)] += 1.0 / H.num_vars();
  for (int i = 0; i < H.num_checks(); ++i)
    dd.check[static_cast<std::size_t>(H.check_degree(i) - 1)] += 1.0 / H.num_checks();
  return dd;
}

void DegreeDistribution::validate() const {
  for (const auto* poly : {&variable, &check}) {
    double sum = 0.0;
    for (double c : *poly) {
      if (c < 0.0) throw std::invalid_argument("degree distribution: negative coefficient");
      sum += c;
    }
    if (std::abs(sum - 1.0) > 1e-9)
      throw std::invalid_argument("degree distribution: coefficients must sum to 1");
  }
}

double polynomial_integral01(const std::vector<double>& coeffs) {
  double s = 0.0;
  for (std::size_t k = 0; k < coeffs.size(); ++k)
    s += coeffs[k] / static_cast<double>(k + 1);
  return s;
}

}  // namespace mulink
