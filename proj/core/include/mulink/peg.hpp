#pragma once

#include <cstdint>

#include "mulink/parity_check_matrix.hpp"

namespace mulink {

// Progressive edge growth construction of a (dv, dc)-regular code with
// dc = N * dv / M. Edges are placed one variable node at a time; each edge
// attaches to the non-saturated check node at maximal BFS depth from the
// variable in the graph built so far (unreached checks count as infinitely
// deep). Ties break by lowest current check degree, then lowest check index,
// so the construction is fully deterministic; the seed is recorded for
// provenance but does not influence the result. In the saturated endgame,
// where the greedy choice would close a 4-cycle, a single edge swap moves
// capacity to a distant check when that avoids the 4-cycle.
//
// Requires num_vars > num_checks >= 1, variable_degree >= 2, and
// num_vars * variable_degree divisible by num_checks.
ParityCheckMatrix peg_construct(int num_vars, int num_checks, int variable_degree,
                                std::uint64_t seed = 0);

}  // namespace mulink
