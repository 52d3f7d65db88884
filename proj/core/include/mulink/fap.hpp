#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "mulink/decoder.hpp"
#include "mulink/generator_matrix.hpp"
#include "mulink/graph_analysis.hpp"
#include "mulink/parity_check_matrix.hpp"

namespace mulink {

// ---- CKAR: cycle-count-driven two-level assignment ----

struct CkarConfig {
  double alpha = 0.85;        // in (0,1)
  int num_cycle_lengths = 1;  // 1: girth only; 2/3 add g+2, g+4 with unit weight
};

// rho_i = 1 where the (summed) short-cycle count through check i is below its
// mean, else rho_v = 2*alpha / avg_connectivity. Throws when rho_v would
// leave (0,1).
ReweightingVector ckar_assign(const CycleCensus& census, double avg_connectivity,
                              const CkarConfig& config);

inline double uniform_fap(double alpha, double avg_connectivity) {
  return 2.0 * alpha / avg_connectivity;
}

// ---- EKAR: per-subgraph conditional-gradient optimization ----

// Divergence, in bits, between the parity-constrained factor belief of one
// check (built from its incoming variable-to-check messages) and the product
// of its variables' marginal beliefs. Nonnegative; zero iff they coincide.
// Throws for factor degree > 24 (enumeration bound).
double factor_mutual_information_bits(std::span<const double> incoming_psi,
                                      std::span<const double> variable_beliefs);

// Runs reweighted message passing on a (sub)graph for a fixed number of
// iterations and returns the per-check mutual information vector.
std::vector<double> subgraph_mutual_information(const ParityCheckMatrix& local,
                                                const ReweightingVector& rho,
                                                const std::vector<double>& llr_in,
                                                int iterations);

// Linear minimizer of -mi . rho over the relaxed FAP polytope: the convex
// hull of {rho_min, 1} indicators of check subsets whose induced factor
// subgraph is acyclic. Greedy by decreasing mutual information (ties by
// lower index), keeping a check only if it joins the selected forest without
// closing a cycle. Selected checks get 1, the rest rho_min.
std::vector<double> cg_linear_minimizer(std::span<const double> mi,
                                        const ParityCheckMatrix& local,
                                        double rho_min);

struct EkarConfig {
  double rho_min = 0.1;
  double init_rho = 0.5;            // uniform probe value for the vertex start
  double surrogate_llr_mean = 1.0;  // Gaussian-consistent prior strength
  int message_passing_iters = 8;
  int line_search_points = 21;  // grid over [0,1] including both endpoints
  int max_recursions = 600;
  double tol = 1e-3;  // convergence: max |rho_next - rho| below tol
  std::uint64_t seed = 1;
};

struct EkarTracePoint {
  double f;  // objective -rho . mi at the iterate
  double z;  // best linear lower bound so far
};

struct EkarResult {
  std::vector<double> rho;  // per subgraph check, local order
  bool converged = false;
  int recursions = 0;
  std::vector<EkarTracePoint> trace;
};

// Grid minimization over alpha in [0,1] (points including both endpoints).
// Only strict improvements move the argmin, so ties keep the smaller step
// and a flat objective stays at alpha = 0.
std::pair<double, double> line_search_argmin(const std::function<double(double)>& f,
                                             int points);

// One conditional-gradient step: commits a certified lower bound of the
// linearized model and runs a grid line search over alpha in [0,1] with the
// mutual information refreshed at every grid point; alpha = 0 (no move) is
// always admissible, so the objective never increases.
struct CgUpdateResult {
  std::vector<double> rho_next;
  std::vector<double> mi_next;  // mutual information at rho_next
  double f_next = 0.0;
  double z_next = 0.0;
  double alpha = 0.0;
};
CgUpdateResult cg_update(const ParityCheckMatrix& local,
                         const std::vector<double>& llr_in,
                         const EkarConfig& config,
                         const std::vector<double>& rho_cur, double f_cur,
                         const std::vector<double>& mi_cur,
                         const std::vector<double>& rho_star, double z_cur);

// Full recursion for one subgraph. The surrogate decoding problem is a fixed
// Gaussian-consistent LLR draw for the all-zero codeword, seeded from
// config.seed and the subgraph id, shared across every recursion and line
// search point.
EkarResult ekar_optimize_subgraph(const Subgraph& subgraph, const EkarConfig& config);

// All subgraphs (parallel over subgraphs when threads > 1).
std::vector<EkarResult> ekar_optimize(std::span<const Subgraph> subgraphs,
                                      const EkarConfig& config, int threads = 1);

// Global length-M vector from one subgraph's optimized values; checks outside
// the subgraph keep rho = 1.
ReweightingVector lift_to_global(const Subgraph& subgraph,
                                 std::span<const double> rho_local,
                                 int num_checks);

// ---- candidate scoring ----

struct FapEvalConfig {
  double ebn0_db = 2.0;
  int frames = 200;
  int max_iters = 30;
  std::uint64_t seed = 7;
};

struct FapScore {
  int frame_errors = 0;
  double mean_iterations = 0.0;
};

// Frame-error count of one reweighting vector on a seeded batch of noisy
// BPSK codewords (identical noise across candidates).
FapScore score_fap(const ParityCheckMatrix& H, const GeneratorMatrix& G,
                   const ReweightingVector& rho, const FapEvalConfig& config);

// Lowest frame-error count wins; ties by mean decoder iterations, then by
// candidate index.
ReweightingVector select_best_fap(const ParityCheckMatrix& H,
                                  const GeneratorMatrix& G,
                                  std::span<const ReweightingVector> candidates,
                                  const FapEvalConfig& config,
                                  int* winner_index = nullptr);

}  // namespace mulink
