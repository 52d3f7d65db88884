#include "mulink/peg.hpp"

#include <algorithm>
#include <limits>
#include <queue>
#include <stdexcept>

namespace mulink {

namespace {

constexpr int kUnreached = std::numeric_limits<int>::max();

struct Builder {
  int num_vars, num_checks, cap;
  std::vector<std::vector<int>> var_adj, chk_adj;
  std::vector<int> chk_degree;

  Builder(int n, int m, int dc_cap)
      : num_vars(n), num_checks(m), cap(dc_cap),
        var_adj(static_cast<std::size_t>(n)), chk_adj(static_cast<std::size_t>(m)),
        chk_degree(static_cast<std::size_t>(m), 0) {}

  bool adjacent(int v, int c) const {
    const auto& a = var_adj[static_cast<std::size_t>(v)];
    return std::find(a.begin(), a.end(), c) != a.end();
  }

  void add(int v, int c) {
    var_adj[static_cast<std::size_t>(v)].push_back(c);
    chk_adj[static_cast<std::size_t>(c)].push_back(v);
    ++chk_degree[static_cast<std::size_t>(c)];
  }

  void remove(int v, int c) {
    auto& va = var_adj[static_cast<std::size_t>(v)];
    va.erase(std::find(va.begin(), va.end(), c));
    auto& ca = chk_adj[static_cast<std::size_t>(c)];
    ca.erase(std::find(ca.begin(), ca.end(), v));
    --chk_degree[static_cast<std::size_t>(c)];
  }

  // BFS depth of every check node from variable root; depth is in edges.
  std::vector<int> check_depths(int root) const {
    std::vector<int> chk_dist(static_cast<std::size_t>(num_checks), kUnreached);
    std::vector<char> vvis(static_cast<std::size_t>(num_vars), 0);
    std::vector<char> cvis(static_cast<std::size_t>(num_checks), 0);
    std::queue<std::pair<int, int>> q;  // (node, depth); even depth = variable
    vvis[static_cast<std::size_t>(root)] = 1;
    q.push({root, 0});
    while (!q.empty()) {
      auto [node, d] = q.front();
      q.pop();
      if (d % 2 == 0) {
        for (int c : var_adj[static_cast<std::size_t>(node)])
          if (!cvis[static_cast<std::size_t>(c)]) {
            cvis[static_cast<std::size_t>(c)] = 1;
            chk_dist[static_cast<std::size_t>(c)] = d + 1;
            q.push({c, d + 1});
          }
      } else {
        for (int v : chk_adj[static_cast<std::size_t>(node)])
          if (!vvis[static_cast<std::size_t>(v)]) {
            vvis[static_cast<std::size_t>(v)] = 1;
            q.push({v, d + 1});
          }
      }
    }
    return chk_dist;
  }

  // Greedy PEG choice for one more edge of variable v: deepest non-saturated
  // check, ties by lowest degree then lowest index. Returns (check, depth);
  // check = -1 when no candidate exists.
  std::pair<int, int> pick(int v, bool first_edge) const {
    std::vector<int> depth;
    if (!first_edge) depth = check_depths(v);
    int best = -1;
    long long best_depth = -1;
    for (int c = 0; c < num_checks; ++c) {
      if (chk_degree[static_cast<std::size_t>(c)] >= cap) continue;
      if (adjacent(v, c)) continue;
      const long long d = first_edge ? kUnreached : depth[static_cast<std::size_t>(c)];
      if (d > best_depth ||
          (d == best_depth && chk_degree[static_cast<std::size_t>(c)] <
                                  chk_degree[static_cast<std::size_t>(best)])) {
        best = c;
        best_depth = d;
      }
    }
    return {best, best_depth > kUnreached ? kUnreached : static_cast<int>(best_depth)};
  }

  // When every non-saturated candidate would close a 4-cycle, free capacity
  // on a distant saturated check: attach v there and move one of its existing
  // edges to a non-saturated check that itself avoids a 4-cycle. Returns true
  // on success. This only happens when the construction is almost complete.
  bool swap_repair(int v) {
    const std::vector<int> depth = check_depths(v);
    std::vector<int> saturated;
    for (int c = 0; c < num_checks; ++c) {
      if (chk_degree[static_cast<std::size_t>(c)] < cap) continue;
      if (adjacent(v, c)) continue;
      if (depth[static_cast<std::size_t>(c)] > 3) saturated.push_back(c);
    }
    std::sort(saturated.begin(), saturated.end(), [&](int a, int b) {
      const int da = depth[static_cast<std::size_t>(a)];
      const int db = depth[static_cast<std::size_t>(b)];
      if (da != db) return da > db;
      return a < b;
    });
    for (int c_far : saturated) {
      std::vector<int> movable = chk_adj[static_cast<std::size_t>(c_far)];
      std::sort(movable.begin(), movable.end());
      for (int v_move : movable) {
        if (v_move == v) continue;
        remove(v_move, c_far);
        add(v, c_far);
        auto [c_new, d_new] = pick(v_move, false);
        if (c_new >= 0 && d_new > 3) {
          add(v_move, c_new);
          return true;
        }
        remove(v, c_far);
        add(v_move, c_far);
      }
    }
    return false;
  }
};

}  // namespace

ParityCheckMatrix peg_construct(int num_vars, int num_checks, int variable_degree,
                                std::uint64_t /*seed*/) {
  if (num_checks < 1 || num_vars <= num_checks)
    throw std::invalid_argument("peg: requires N > M >= 1");
  if (variable_degree < 2)
    throw std::invalid_argument("peg: variable degree must be >= 2");
  if (variable_degree > num_checks)
    throw std::invalid_argument("peg: variable degree exceeds check count");
  if ((static_cast<long long>(num_vars) * variable_degree) % num_checks != 0)
    throw std::invalid_argument("peg: N * dv must be divisible by M for regular checks");

  const int cap =
      static_cast<int>(static_cast<long long>(num_vars) * variable_degree / num_checks);
  Builder b(num_vars, num_checks, cap);

  for (int j = 0; j < num_vars; ++j) {
    for (int e = 0; e < variable_degree; ++e) {
      auto [c, d] = b.pick(j, e == 0);
      if (c < 0) throw std::runtime_error("peg: no attachable check node");
      // depth 3 closes a 4-cycle; try an endgame swap before accepting one
      if (e > 0 && d <= 3 && b.swap_repair(j)) continue;
      b.add(j, c);
    }
  }

  return ParityCheckMatrix(num_checks, num_vars, std::move(b.chk_adj));
}

}  // namespace mulink
