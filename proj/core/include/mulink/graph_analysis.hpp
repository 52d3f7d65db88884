#pragma once

#include <cstdint>
#include <limits>
#include <vector>

#include "mulink/parity_check_matrix.hpp"

namespace mulink {

// Returned by girth() for acyclic graphs.
constexpr int kInfiniteGirth = std::numeric_limits<int>::max();

// Length of the shortest cycle of the Tanner graph (even, >= 4), or
// kInfiniteGirth if the graph is a forest.
int girth(const ParityCheckMatrix& H);

// Exact per-check short-cycle counts for the lengths girth, girth+2 and
// girth+4.
struct CycleCensus {
  int girth = kInfiniteGirth;
  std::vector<int> lengths;                      // requested cycle lengths
  std::vector<std::vector<long long>> per_check; // per_check[k][i]: cycles of
                                                 // lengths[k] through check i
  std::vector<long long> total;                  // whole-graph count per length
  double mu_g = 0.0;                             // mean of per_check[0]

  const std::vector<long long>& shortest() const { return per_check.front(); }
};

// Counts cycles of length g, g+2 and g+4 through every check node with the
// closed-walk matrix-power method: cycles of length L < 2g through a node are
// exactly half its non-backtracking closed L-walks. The boundary case L = 2g
// (girth-4 graphs only) is handled by an explicit path-pair count. Counts are
// exact.
//
// num_lengths selects how many of {g, g+2, g+4} to compute (1 to 3).
// Requested lengths beyond the maximum cycle length simply produce zeros.
// Throws if the graph is acyclic (girth undefined) and lengths cannot be
// anchored; callers should test girth() first.
CycleCensus count_short_cycles(const ParityCheckMatrix& H, int num_lengths = 3);

// Average connectivity of the N variable nodes, 1 / integral(upsilon).
// M and N feed the dual form M / (N * integral(nu)); both routes agree for
// a consistent (distribution, M, N) triple and the primary route is returned
// either way.
double average_connectivity(const DegreeDistribution& dd, int num_checks,
                            int num_vars);

// Both routes, for consistency checks.
struct AverageConnectivity {
  double from_variable_side = 0.0;
  double from_check_side = 0.0;
};
AverageConnectivity average_connectivity_routes(const DegreeDistribution& dd,
                                                int num_checks, int num_vars);

// A connected piece of the Tanner graph produced by PEG-style expansion.
// Node indices are global; edges are a subset of the parent's edges. The
// local structure either is a forest or has girth strictly above the parent
// girth.
struct Subgraph {
  int id = 0;
  std::vector<int> check_nodes;               // global check indices, sorted
  std::vector<int> var_nodes;                 // global variable indices, sorted
  std::vector<std::pair<int, int>> edges;     // (check, variable), global
  int local_girth = kInfiniteGirth;

  // Adjacency over local indices (positions in check_nodes / var_nodes).
  ParityCheckMatrix local_matrix() const;

  int num_checks() const { return static_cast<int>(check_nodes.size()); }
};

// Expands the Tanner graph into subgraphs by breadth-first growth from seed
// variable nodes (taken in ascending index order). Growth proceeds level by
// level up to max_depth levels from the seed; an edge to a node already in
// the subgraph is kept only if the cycle it closes is longer than the parent
// girth. Expansion of one subgraph stops when its whole visit set has been
// expanded or the depth limit is reached; new seeds are started until every
// variable node belongs to at least one subgraph. Check nodes may appear in
// several subgraphs. Deterministic; the seed argument is recorded only.
std::vector<Subgraph> expand_subgraphs(const ParityCheckMatrix& H, int max_depth,
                                       std::uint64_t seed = 0);

// Depth in [1, max_sweep_depth] whose expansion yields a subgraph count
// closest to target_subgraphs; ties go to the smaller depth.
int choose_expansion_depth(const ParityCheckMatrix& H, int target_subgraphs,
                           int max_sweep_depth = 6);

}  // namespace mulink
