#include "mulink/fap.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>
#include <stdexcept>
#include <thread>

#include "mulink/rng.hpp"

namespace mulink {

ReweightingVector ckar_assign(const CycleCensus& census, double avg_connectivity,
                              const CkarConfig& config) {
  if (!(config.alpha > 0.0) || !(config.alpha < 1.0))
    throw std::invalid_argument("ckar: alpha must lie in (0,1)");
  if (!(avg_connectivity > 0.0))
    throw std::invalid_argument("ckar: average connectivity must be positive");
  const double rho_v = uniform_fap(config.alpha, avg_connectivity);
  if (rho_v >= 1.0)
    throw std::invalid_argument("ckar: rho_v = 2*alpha/avg_connectivity >= 1");

  const int lengths = std::clamp(config.num_cycle_lengths, 1,
                                 static_cast<int>(census.per_check.size()));
  const std::size_t m = census.per_check.front().size();
  std::vector<long long> delta(m, 0);
  for (int k = 0; k < lengths; ++k)
    for (std::size_t i = 0; i < m; ++i) delta[i] += census.per_check[static_cast<std::size_t>(k)][i];

  double mu = 0.0;
  for (long long d : delta) mu += static_cast<double>(d);
  mu /= static_cast<double>(m);

  ReweightingVector rv;
  rv.rho.resize(m);
  for (std::size_t i = 0; i < m; ++i)
    rv.rho[i] = static_cast<double>(delta[i]) < mu ? 1.0 : rho_v;
  return rv;
}

namespace {

// log(1 + e^x), stable
double log1pexp(double x) { return x > 0.0 ? x + std::log1p(std::exp(-x)) : std::log1p(std::exp(x)); }

}  // namespace

double factor_mutual_information_bits(std::span<const double> incoming_psi,
                                      std::span<const double> variable_beliefs) {
  const std::size_t d = incoming_psi.size();
  if (d != variable_beliefs.size())
    throw std::invalid_argument("factor mi: psi/belief size mismatch");
  if (d == 0) return 0.0;
  if (d > 24) throw std::invalid_argument("factor mi: degree above enumeration bound 24");

  // log p(bit) from an LLR log(p0/p1); handles infinite LLRs exactly
  auto log_p0 = [](double llr) { return -log1pexp(-llr); };
  auto log_p1 = [](double llr) { return -log1pexp(llr); };

  std::vector<double> m0(d), m1(d), q0(d), q1(d);
  for (std::size_t k = 0; k < d; ++k) {
    m0[k] = log_p0(incoming_psi[k]);
    m1[k] = log_p1(incoming_psi[k]);
    q0[k] = log_p0(variable_beliefs[k]);
    q1[k] = log_p1(variable_beliefs[k]);
  }

  // factor belief: product of message probabilities restricted to even parity
  const std::uint32_t configs = 1u << d;
  std::vector<double> logw;
  std::vector<std::uint32_t> even;
  logw.reserve(configs / 2);
  even.reserve(configs / 2);
  double lse = -std::numeric_limits<double>::infinity();
  for (std::uint32_t x = 0; x < configs; ++x) {
    if (__builtin_popcount(x) % 2 != 0) continue;
    double lw = 0.0;
    for (std::size_t k = 0; k < d; ++k) lw += (x >> k) & 1u ? m1[k] : m0[k];
    even.push_back(x);
    logw.push_back(lw);
    lse = std::max(lse, lw);
  }
  if (!std::isfinite(lse))
    throw std::domain_error("factor mi: even-parity support has zero probability");
  double norm = 0.0;
  for (double lw : logw) norm += std::exp(lw - lse);
  const double log_norm = lse + std::log(norm);

  double kl = 0.0;
  for (std::size_t t = 0; t < even.size(); ++t) {
    const double lp = logw[t] - log_norm;
    const double p = std::exp(lp);
    if (p == 0.0) continue;
    double lq = 0.0;
    for (std::size_t k = 0; k < d; ++k) lq += (even[t] >> k) & 1u ? q1[k] : q0[k];
    kl += p * (lp - lq);
  }
  return std::max(kl, 0.0) / std::numbers::ln2_v<double>;
}

std::vector<double> subgraph_mutual_information(const ParityCheckMatrix& local,
                                                const ReweightingVector& rho,
                                                const std::vector<double>& llr_in,
                                                int iterations) {
  RbpDecoder dec(local, rho);
  DecodeOptions opt;
  opt.early_stop = false;  // measure at a fixed iteration count
  const DecodeResult res = dec.decode(llr_in, iterations, opt);

  std::vector<double> mi(static_cast<std::size_t>(local.num_checks()));
  std::vector<double> psi, beliefs;
  for (int i = 0; i < local.num_checks(); ++i) {
    const auto edges = dec.check_edges(i);
    psi.resize(edges.size());
    beliefs.resize(edges.size());
    const auto& vars = local.check_neighbors(i);
    for (std::size_t k = 0; k < edges.size(); ++k) {
      psi[k] = dec.psi()[static_cast<std::size_t>(edges[k])];
      beliefs[k] = res.beliefs[static_cast<std::size_t>(vars[k])];
    }
    mi[static_cast<std::size_t>(i)] = factor_mutual_information_bits(psi, beliefs);
  }
  return mi;
}

std::vector<double> cg_linear_minimizer(std::span<const double> mi,
                                        const ParityCheckMatrix& local,
                                        double rho_min) {
  const int m = local.num_checks();
  if (mi.size() != static_cast<std::size_t>(m))
    throw std::invalid_argument("cg_linear_minimizer: mi length != checks");

  std::vector<int> order(static_cast<std::size_t>(m));
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
    return mi[static_cast<std::size_t>(a)] > mi[static_cast<std::size_t>(b)];
  });

  // union-find over variable nodes; adding a check joins all its variables,
  // which is acyclic iff they start in pairwise distinct components
  std::vector<int> parent(static_cast<std::size_t>(local.num_vars()));
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](int x) {
    while (parent[static_cast<std::size_t>(x)] != x) {
      parent[static_cast<std::size_t>(x)] = parent[static_cast<std::size_t>(parent[static_cast<std::size_t>(x)])];
      x = parent[static_cast<std::size_t>(x)];
    }
    return x;
  };

  std::vector<double> rho(static_cast<std::size_t>(m), rho_min);
  std::vector<int> roots;
  for (int c : order) {
    roots.clear();
    bool acyclic = true;
    for (int v : local.check_neighbors(c)) {
      const int r = find(v);
      if (std::find(roots.begin(), roots.end(), r) != roots.end()) {
        acyclic = false;
        break;
      }
      roots.push_back(r);
    }
    if (!acyclic) continue;
    for (std::size_t k = 1; k < roots.size(); ++k)
      parent[static_cast<std::size_t>(roots[k])] = roots[0];
    rho[static_cast<std::size_t>(c)] = 1.0;
  }
  return rho;
}

namespace {

double dot(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) s += a[k] * b[k];
  return s;
}

std::vector<double> blend(const std::vector<double>& rho,
                          const std::vector<double>& rho_star, double alpha,
                          double rho_min) {
  if (alpha <= 0.0) return rho;
  if (alpha >= 1.0) return rho_star;
  std::vector<double> out(rho.size());
  for (std::size_t k = 0; k < rho.size(); ++k)
    out[k] = std::clamp(rho[k] + alpha * (rho_star[k] - rho[k]), rho_min, 1.0);
  return out;
}

}  // namespace

std::pair<double, double> line_search_argmin(const std::function<double(double)>& f,
                                             int points) {
  const int n = std::max(points, 2);
  double best_alpha = 0.0;
  double best_value = f(0.0);
  for (int p = 1; p < n; ++p) {
    const double alpha = static_cast<double>(p) / static_cast<double>(n - 1);
    const double value = f(alpha);
    if (value < best_value) {
      best_value = value;
      best_alpha = alpha;
    }
  }
  return {best_alpha, best_value};
}

CgUpdateResult cg_update(const ParityCheckMatrix& local,
                         const std::vector<double>& llr_in,
                         const EkarConfig& config,
                         const std::vector<double>& rho_cur, double f_cur,
                         const std::vector<double>& mi_cur,
                         const std::vector<double>& rho_star, double z_cur) {
  // Lower bound from the linearization with gradient -mi. The greedy
  // minimizer carries no optimality certificate on factor graphs, so its
  // value cannot be trusted as a bound; the linearized objective at the
  // all-ones corner of the enclosing box, -sum(mi), bounds the model on the
  // whole FAP polytope.
  double mi_sum = 0.0;
  for (double v : mi_cur) mi_sum += v;
  CgUpdateResult out;
  out.z_next = std::max(z_cur, -mi_sum);

  std::vector<double> last_rho, last_mi;
  double last_alpha = -1.0;
  const auto objective = [&](double alpha) {
    if (alpha == 0.0) return f_cur;
    last_rho = blend(rho_cur, rho_star, alpha, config.rho_min);
    last_mi = subgraph_mutual_information(local, ReweightingVector{last_rho}, llr_in,
                                          config.message_passing_iters);
    last_alpha = alpha;
    return -dot(last_rho, last_mi);
  };

  const auto [alpha, value] = line_search_argmin(objective, config.line_search_points);
  out.alpha = alpha;
  out.f_next = value;
  if (alpha == 0.0) {
    out.rho_next = rho_cur;
    out.mi_next = mi_cur;
  } else {
    if (last_alpha != alpha) objective(alpha);  // re-evaluate the winner
    out.rho_next = std::move(last_rho);
    out.mi_next = std::move(last_mi);
  }
  return out;
}

EkarResult ekar_optimize_subgraph(const Subgraph& subgraph, const EkarConfig& config) {
  const ParityCheckMatrix local = subgraph.local_matrix();

  // fixed Gaussian-consistent LLRs for the all-zero codeword: N(m, 2m)
  Rng rng(mix_seed(config.seed, {0x5ab6ULL, static_cast<std::uint64_t>(subgraph.id)}));
  std::vector<double> llr(static_cast<std::size_t>(local.num_vars()));
  const double mean = config.surrogate_llr_mean;
  const double sigma = std::sqrt(2.0 * mean);
  for (double& l : llr) l = mean + sigma * rng.normal();

  EkarResult res;
  // The recursion must start inside the FAP polytope (a uniform value can
  // fall outside it on dense subgraphs, which would immediately break the
  // lower-bound bracket). Probe the landscape at the nominal uniform value,
  // then start from the vertex its gradient selects.
  const std::vector<double> probe(static_cast<std::size_t>(local.num_checks()),
                                  std::clamp(config.init_rho, config.rho_min, 1.0));
  const std::vector<double> probe_mi = subgraph_mutual_information(
      local, ReweightingVector{probe}, llr, config.message_passing_iters);
  res.rho = cg_linear_minimizer(probe_mi, local, config.rho_min);
  std::vector<double> mi = subgraph_mutual_information(
      local, ReweightingVector{res.rho}, llr, config.message_passing_iters);
  double f = -dot(res.rho, mi);
  double z = -std::numeric_limits<double>::infinity();
  res.trace.push_back({f, z});

  for (int r = 1; r <= config.max_recursions; ++r) {
    res.recursions = r;
    const std::vector<double> rho_star = cg_linear_minimizer(mi, local, config.rho_min);
    if (rho_star == res.rho) {
      res.converged = true;
      break;
    }
    CgUpdateResult step =
        cg_update(local, llr, config, res.rho, f, mi, rho_star, z);
    if (step.alpha == 0.0) {
      // rejected step: the line search found no improvement, so the
      // recursion has converged; nothing is committed
      res.converged = true;
      break;
    }
    double delta = 0.0;
    for (std::size_t k = 0; k < res.rho.size(); ++k)
      delta = std::max(delta, std::abs(step.rho_next[k] - res.rho[k]));
    res.rho = std::move(step.rho_next);
    mi = std::move(step.mi_next);
    f = step.f_next;
    z = step.z_next;
    res.trace.push_back({f, z});
    if (delta < config.tol) {
      res.converged = true;
      break;
    }
  }
  return res;
}

std::vector<EkarResult> ekar_optimize(std::span<const Subgraph> subgraphs,
                                      const EkarConfig& config, int threads) {
  std::vector<EkarResult> results(subgraphs.size());
  if (threads <= 1 || subgraphs.size() <= 1) {
    for (std::size_t t = 0; t < subgraphs.size(); ++t)
      results[t] = ekar_optimize_subgraph(subgraphs[t], config);
    return results;
  }
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (;;) {
      const std::size_t t = next.fetch_add(1);
      if (t >= subgraphs.size()) return;
      results[t] = ekar_optimize_subgraph(subgraphs[t], config);
    }
  };
  std::vector<std::thread> pool;
  const int count = std::min<int>(threads, static_cast<int>(subgraphs.size()));
  pool.reserve(static_cast<std::size_t>(count));
  for (int t = 0; t < count; ++t) pool.emplace_back(worker);
  for (auto& th : pool) th.join();
  return results;
}

ReweightingVector lift_to_global(const Subgraph& subgraph,
                                 std::span<const double> rho_local,
                                 int num_checks) {
  if (rho_local.size() != subgraph.check_nodes.size())
    throw std::invalid_argument("lift_to_global: rho length != subgraph checks");
  ReweightingVector out = ReweightingVector::ones(num_checks);
  for (std::size_t k = 0; k < rho_local.size(); ++k)
    out.rho[static_cast<std::size_t>(subgraph.check_nodes[k])] = rho_local[k];
  return out;
}

FapScore score_fap(const ParityCheckMatrix& H, const GeneratorMatrix& G,
                   const ReweightingVector& rho, const FapEvalConfig& config) {
  if (config.frames < 1) throw std::invalid_argument("score_fap: frames must be >= 1");
  const double rate = static_cast<double>(G.message_length()) / H.num_vars();
  const double sigma2 = 1.0 / (2.0 * rate * std::pow(10.0, config.ebn0_db / 10.0));
  const double sigma = std::sqrt(sigma2);

  RbpDecoder dec(H, rho);
  FapScore score;
  long long iter_sum = 0;
  std::vector<std::uint8_t> msg(static_cast<std::size_t>(G.message_length()));
  std::vector<double> llr(static_cast<std::size_t>(H.num_vars()));
  for (int frame = 0; frame < config.frames; ++frame) {
    Rng rng(mix_seed(config.seed, {static_cast<std::uint64_t>(frame)}));
    for (auto& b : msg) b = rng.bit() ? 1 : 0;
    const std::vector<std::uint8_t> codeword = G.encode(msg);
    for (std::size_t j = 0; j < llr.size(); ++j) {
      const double s = codeword[j] ? -1.0 : 1.0;
      const double y = s + sigma * rng.normal();
      llr[j] = 2.0 * y / sigma2;
    }
    const DecodeResult res = dec.decode(llr, config.max_iters);
    iter_sum += res.iterations_used;
    if (res.hard_bits != codeword) ++score.frame_errors;
  }
  score.mean_iterations = static_cast<double>(iter_sum) / config.frames;
  return score;
}

ReweightingVector select_best_fap(const ParityCheckMatrix& H,
                                  const GeneratorMatrix& G,
                                  std::span<const ReweightingVector> candidates,
                                  const FapEvalConfig& config,
                                  int* winner_index) {
  if (candidates.empty())
    throw std::invalid_argument("select_best_fap: no candidates");
  int best = 0;
  FapScore best_score = score_fap(H, G, candidates[0], config);
  for (std::size_t t = 1; t < candidates.size(); ++t) {
    const FapScore s = score_fap(H, G, candidates[t], config);
    if (s.frame_errors < best_score.frame_errors ||
        (s.frame_errors == best_score.frame_errors &&
         s.mean_iterations < best_score.mean_iterations)) {
      best = static_cast<int>(t);
      best_score = s;
    }
  }
  if (winner_index) *winner_index = best;
  return candidates[static_cast<std::size_t>(best)];
}

}  // namespace mulink
