#include "mulink/graph_analysis.hpp"

#include <algorithm>
#include <map>
#include <queue>
#include <stdexcept>

namespace mulink {

namespace {

// Unified node ids: variables 0..N-1, checks N..N+M-1.
struct BipartiteView {
  int num_vars;
  int num_checks;
  std::vector<std::vector<int>> adj;  // over unified ids

  explicit BipartiteView(const ParityCheckMatrix& H)
      : num_vars(H.num_vars()), num_checks(H.num_checks()),
        adj(static_cast<std::size_t>(H.num_vars() + H.num_checks())) {
    for (int j = 0; j < num_vars; ++j)
      for (int c : H.var_neighbors(j))
        adj[static_cast<std::size_t>(j)].push_back(num_vars + c);
    for (int i = 0; i < num_checks; ++i)
      for (int v : H.check_neighbors(i))
        adj[static_cast<std::size_t>(num_vars + i)].push_back(v);
  }

  int size() const { return num_vars + num_checks; }
};

constexpr int kUnvisited = -1;

// Shortest cycle reachable from root (exact when minimized over all roots of
// a cycle; every cycle contains a variable node, so variable roots suffice).
int shortest_cycle_from(const BipartiteView& g, int root, int upper_bound,
                        std::vector<int>& dist, std::vector<int>& parent) {
  dist.assign(static_cast<std::size_t>(g.size()), kUnvisited);
  parent.assign(static_cast<std::size_t>(g.size()), kUnvisited);
  std::queue<int> q;
  dist[static_cast<std::size_t>(root)] = 0;
  q.push(root);
  int best = upper_bound;
  while (!q.empty()) {
    const int u = q.front();
    q.pop();
    if (2 * dist[static_cast<std::size_t>(u)] >= best) break;
    for (int w : g.adj[static_cast<std::size_t>(u)]) {
      if (dist[static_cast<std::size_t>(w)] == kUnvisited) {
        dist[static_cast<std::size_t>(w)] = dist[static_cast<std::size_t>(u)] + 1;
        parent[static_cast<std::size_t>(w)] = u;
        q.push(w);
      } else if (w != parent[static_cast<std::size_t>(u)]) {
        best = std::min(best, dist[static_cast<std::size_t>(u)] +
                                  dist[static_cast<std::size_t>(w)] + 1);
      }
    }
  }
  return best;
}

int girth_impl(const BipartiteView& g) {
  int best = kInfiniteGirth;
  std::vector<int> dist, parent;
  for (int s = 0; s < g.num_vars; ++s) {
    const int found = shortest_cycle_from(g, s, best, dist, parent);
    best = std::min(best, found);
    if (best == 4) break;  // no shorter cycle exists in a simple bipartite graph
  }
  return best;
}

// ---- non-backtracking closed-walk counting ----

struct DirectedEdges {
  // directed edge e: tail[e] -> head[e]; reverse(e) = e ^ 1
  std::vector<int> tail, head;
  std::vector<std::vector<int>> out;  // outgoing directed edges per node

  explicit DirectedEdges(const BipartiteView& g) {
    for (int u = 0; u < g.size(); ++u)
      for (int w : g.adj[static_cast<std::size_t>(u)])
        if (u < w) {
          tail.push_back(u);
          head.push_back(w);
          tail.push_back(w);
          head.push_back(u);
        }
    out.assign(static_cast<std::size_t>(g.size()), {});
    for (std::size_t e = 0; e < tail.size(); ++e)
      out[static_cast<std::size_t>(tail[e])].push_back(static_cast<int>(e));
  }

  std::size_t count() const { return tail.size(); }
};

// One non-backtracking transition: y[f] = sum over e with head(e)=tail(f),
// f != reverse(e), of x[e].
void nb_step(const DirectedEdges& de, const std::vector<long long>& x,
             std::vector<long long>& y) {
  y.assign(de.count(), 0);
  for (std::size_t e = 0; e < de.count(); ++e) {
    if (x[e] == 0) continue;
    const int node = de.head[e];
    for (int f : de.out[static_cast<std::size_t>(node)]) {
      if (f == static_cast<int>(e ^ 1)) continue;
      y[static_cast<std::size_t>(f)] += x[e];
    }
  }
}

// Rooted cyclically-non-backtracking closed walks from `node`, for each
// requested length. lengths must be ascending.
void nb_closed_walks(const DirectedEdges& de, int node,
                     const std::vector<int>& lengths,
                     std::vector<long long>& result) {
  result.assign(lengths.size(), 0);
  if (lengths.empty()) return;
  const int max_len = lengths.back();
  std::vector<long long> x(de.count()), y;
  for (int start : de.out[static_cast<std::size_t>(node)]) {
    std::fill(x.begin(), x.end(), 0);
    x[static_cast<std::size_t>(start)] = 1;  // walks of one edge
    int steps = 1;
    for (std::size_t li = 0; li < lengths.size(); ++li) {
      while (steps < lengths[li]) {
        nb_step(de, x, y);
        x.swap(y);
        ++steps;
      }
      // close the walk at `node`, excluding a backtrack across the wrap
      long long total = 0;
      for (std::size_t e = 0; e < de.count(); ++e)
        if (x[e] != 0 && de.head[e] == node && static_cast<int>(e) != (start ^ 1))
          total += x[e];
      result[li] += total;
      if (lengths[li] == max_len) break;
    }
  }
}

// Simple cycles of length exactly 2k through `root`, counted as pairs of
// internally vertex-disjoint k-paths from root to a common antipodal node.
// Used for the boundary length L = 2*girth, where closed-walk counting
// overshoots.
long long cycles_via_path_pairs(const BipartiteView& g, int root, int half_len) {
  // enumerate simple paths of half_len edges from root
  std::map<int, std::vector<std::vector<int>>> by_endpoint;  // endpoint -> internal node sets
  std::vector<int> path;                                     // nodes after root
  std::vector<char> on_path(static_cast<std::size_t>(g.size()), 0);

  auto dfs = [&](auto&& self, int u, int depth) -> void {
    if (depth == half_len) {
      std::vector<int> internals(path.begin(), path.end() - 1);
      by_endpoint[path.back()].push_back(std::move(internals));
      return;
    }
    for (int w : g.adj[static_cast<std::size_t>(u)]) {
      if (w == root || on_path[static_cast<std::size_t>(w)]) continue;
      on_path[static_cast<std::size_t>(w)] = 1;
      path.push_back(w);
      self(self, w, depth + 1);
      path.pop_back();
      on_path[static_cast<std::size_t>(w)] = 0;
    }
  };
  dfs(dfs, root, 0);

  long long count = 0;
  for (const auto& [endpoint, paths] : by_endpoint) {
    for (std::size_t a = 0; a < paths.size(); ++a) {
      for (std::size_t b = a + 1; b < paths.size(); ++b) {
        bool disjoint = true;
        for (int x : paths[a]) {
          if (std::find(paths[b].begin(), paths[b].end(), x) != paths[b].end()) {
            disjoint = false;
            break;
          }
        }
        if (disjoint) ++count;
      }
    }
  }
  return count;
}

}  // namespace

int girth(const ParityCheckMatrix& H) { return girth_impl(BipartiteView(H)); }

CycleCensus count_short_cycles(const ParityCheckMatrix& H, int num_lengths) {
  if (num_lengths < 1 || num_lengths > 3)
    throw std::invalid_argument("count_short_cycles: num_lengths must be 1..3");

  const BipartiteView g(H);
  CycleCensus census;
  census.girth = girth_impl(g);

  const int m = H.num_checks();
  if (census.girth == kInfiniteGirth) {
    census.lengths.assign(1, kInfiniteGirth);
    census.per_check.assign(1, std::vector<long long>(static_cast<std::size_t>(m), 0));
    census.total.assign(1, 0);
    census.mu_g = 0.0;
    return census;
  }

  for (int k = 0; k < num_lengths; ++k) census.lengths.push_back(census.girth + 2 * k);
  census.per_check.assign(census.lengths.size(),
                          std::vector<long long>(static_cast<std::size_t>(m), 0));

  // lengths strictly below 2*girth: cycles through a node are exactly half
  // its rooted cyclically-non-backtracking closed walks
  std::vector<int> walk_lengths;
  for (int L : census.lengths)
    if (L < 2 * census.girth) walk_lengths.push_back(L);

  const DirectedEdges de(g);
  std::vector<long long> walks;
  for (int i = 0; i < m; ++i) {
    if (!walk_lengths.empty()) {
      nb_closed_walks(de, g.num_vars + i, walk_lengths, walks);
      for (std::size_t li = 0; li < walk_lengths.size(); ++li) {
        census.per_check[li][static_cast<std::size_t>(i)] = walks[li] / 2;
      }
    }
    for (std::size_t li = walk_lengths.size(); li < census.lengths.size(); ++li) {
      const int L = census.lengths[li];
      census.per_check[li][static_cast<std::size_t>(i)] =
          cycles_via_path_pairs(g, g.num_vars + i, L / 2);
    }
  }

  census.total.assign(census.lengths.size(), 0);
  for (std::size_t li = 0; li < census.lengths.size(); ++li) {
    long long sum = 0;
    for (long long d : census.per_check[li]) sum += d;
    // each cycle of length L runs through L/2 check nodes
    census.total[li] = sum / (census.lengths[li] / 2);
  }
  double acc = 0.0;
  for (long long d : census.per_check[0]) acc += static_cast<double>(d);
  census.mu_g = acc / static_cast<double>(m);
  return census;
}

double average_connectivity(const DegreeDistribution& dd, int num_checks,
                            int num_vars) {
  return average_connectivity_routes(dd, num_checks, num_vars).from_variable_side;
}

AverageConnectivity average_connectivity_routes(const DegreeDistribution& dd,
                                                int num_checks, int num_vars) {
  dd.validate();
  const double iv = polynomial_integral01(dd.variable);
  const double ic = polynomial_integral01(dd.check);
  if (iv <= 0.0 || ic <= 0.0)
    throw std::invalid_argument("average connectivity: degree polynomial integrates to zero");
  AverageConnectivity r;
  r.from_variable_side = 1.0 / iv;
  r.from_check_side = static_cast<double>(num_checks) /
                      (static_cast<double>(num_vars) * ic);
  return r;
}

ParityCheckMatrix Subgraph::local_matrix() const {
  std::vector<std::vector<int>> rows(check_nodes.size());
  for (auto [c, v] : edges) {
    const auto ci = std::lower_bound(check_nodes.begin(), check_nodes.end(), c) -
                    check_nodes.begin();
    const auto vi = std::lower_bound(var_nodes.begin(), var_nodes.end(), v) -
                    var_nodes.begin();
    rows[static_cast<std::size_t>(ci)].push_back(static_cast<int>(vi));
  }
  return ParityCheckMatrix(static_cast<int>(check_nodes.size()),
                           static_cast<int>(var_nodes.size()), std::move(rows));
}

namespace {

// BFS distance between two nodes inside the partially built subgraph.
int subgraph_distance(const std::vector<std::vector<int>>& sub_adj, int from, int to) {
  if (from == to) return 0;
  std::map<int, int> dist;
  std::queue<int> q;
  dist[from] = 0;
  q.push(from);
  while (!q.empty()) {
    const int u = q.front();
    q.pop();
    for (int w : sub_adj[static_cast<std::size_t>(u)]) {
      if (dist.count(w)) continue;
      dist[w] = dist[u] + 1;
      if (w == to) return dist[w];
      q.push(w);
    }
  }
  return kInfiniteGirth;
}

}  // namespace

std::vector<Subgraph> expand_subgraphs(const ParityCheckMatrix& H, int max_depth,
                                       std::uint64_t /*seed*/) {
  if (max_depth < 1) throw std::invalid_argument("expand_subgraphs: max_depth must be >= 1");

  const BipartiteView g(H);
  const int parent_girth = girth_impl(g);

  std::vector<char> var_covered(static_cast<std::size_t>(H.num_vars()), 0);
  std::vector<char> in_sub(static_cast<std::size_t>(g.size()), 0);
  std::vector<std::vector<int>> sub_adj(static_cast<std::size_t>(g.size()));
  std::vector<Subgraph> result;

  for (int seed_var = 0; seed_var < H.num_vars(); ++seed_var) {
    if (var_covered[static_cast<std::size_t>(seed_var)]) continue;

    std::vector<int> members{seed_var};
    std::vector<std::pair<int, int>> edges;  // (check, var) global
    in_sub[static_cast<std::size_t>(seed_var)] = 1;

    std::vector<int> frontier{seed_var};
    for (int level = 1; level <= max_depth && !frontier.empty(); ++level) {
      std::vector<int> next;
      for (int u : frontier) {
        for (int w : g.adj[static_cast<std::size_t>(u)]) {
          const bool present = in_sub[static_cast<std::size_t>(w)] != 0;
          if (present) {
            const auto& wu = sub_adj[static_cast<std::size_t>(u)];
            if (std::find(wu.begin(), wu.end(), w) != wu.end()) continue;  // edge exists
            // keep the edge only if the cycle it closes is longer than the
            // parent girth
            const int d = subgraph_distance(sub_adj, u, w);
            if (d == kInfiniteGirth || d + 1 <= parent_girth) continue;
          } else {
            in_sub[static_cast<std::size_t>(w)] = 1;
            members.push_back(w);
            next.push_back(w);
          }
          sub_adj[static_cast<std::size_t>(u)].push_back(w);
          sub_adj[static_cast<std::size_t>(w)].push_back(u);
          const int check = (u >= g.num_vars) ? u - g.num_vars : w - g.num_vars;
          const int var = (u >= g.num_vars) ? w : u;
          edges.emplace_back(check, var);
        }
      }
      frontier = std::move(next);
    }

    Subgraph sub;
    sub.id = static_cast<int>(result.size());
    for (int node : members) {
      if (node < g.num_vars) {
        sub.var_nodes.push_back(node);
        var_covered[static_cast<std::size_t>(node)] = 1;
      } else {
        sub.check_nodes.push_back(node - g.num_vars);
      }
    }
    std::sort(sub.var_nodes.begin(), sub.var_nodes.end());
    std::sort(sub.check_nodes.begin(), sub.check_nodes.end());
    std::sort(edges.begin(), edges.end());
    sub.edges = std::move(edges);
    sub.local_girth = sub.check_nodes.empty() ? kInfiniteGirth : girth(sub.local_matrix());
    result.push_back(std::move(sub));

    // reset scratch state for the next seed
    for (int node : members) {
      in_sub[static_cast<std::size_t>(node)] = 0;
      sub_adj[static_cast<std::size_t>(node)].clear();
    }
  }

  return result;
}

int choose_expansion_depth(const ParityCheckMatrix& H, int target_subgraphs,
                           int max_sweep_depth) {
  int best_depth = 1;
  long long best_gap = std::numeric_limits<long long>::max();
  for (int d = 1; d <= max_sweep_depth; ++d) {
    const long long count = static_cast<long long>(expand_subgraphs(H, d).size());
    const long long gap = std::llabs(count - target_subgraphs);
    if (gap < best_gap) {
      best_gap = gap;
      best_depth = d;
    }
  }
  return best_depth;
}

}  // namespace mulink
