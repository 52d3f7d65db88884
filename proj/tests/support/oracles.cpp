#include "oracles.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "mulink/graph_analysis.hpp"
#include "mulink/rng.hpp"

namespace mulink::test {

namespace {

double clip50(double x) { return std::clamp(x, -50.0, 50.0); }

SpaResult run_reference(const ParityCheckMatrix& H, const std::vector<double>& llr_in,
                        int max_iters, bool early_stop, bool uniform_rho,
                        double rho_v) {
  const int n = H.num_vars();
  const int m = H.num_checks();

  std::vector<double> lambda(llr_in.size());
  for (std::size_t j = 0; j < llr_in.size(); ++j) lambda[j] = clip50(llr_in[j]);

  // messages keyed by (check, position within the check's neighbor list)
  std::vector<std::vector<double>> psi(static_cast<std::size_t>(m));
  std::vector<std::vector<double>> lam_cv(static_cast<std::size_t>(m));
  for (int i = 0; i < m; ++i) {
    const auto& nbr = H.check_neighbors(i);
    psi[static_cast<std::size_t>(i)].resize(nbr.size());
    lam_cv[static_cast<std::size_t>(i)].assign(nbr.size(), 0.0);
    for (std::size_t a = 0; a < nbr.size(); ++a)
      psi[static_cast<std::size_t>(i)][a] = lambda[static_cast<std::size_t>(nbr[a])];
  }

  SpaResult out;
  out.hard_bits.assign(static_cast<std::size_t>(n), 0);
  out.beliefs.assign(static_cast<std::size_t>(n), 0.0);

  for (int iter = 1; iter <= max_iters; ++iter) {
    // check pass from previous psi
    for (int i = 0; i < m; ++i) {
      const auto& row = psi[static_cast<std::size_t>(i)];
      auto& lc = lam_cv[static_cast<std::size_t>(i)];
      for (std::size_t a = 0; a < row.size(); ++a) {
        double prod = 1.0;
        for (std::size_t b = 0; b < row.size(); ++b) {
          if (b == a) continue;
          prod *= std::tanh(std::clamp(0.5 * row[b], -19.0, 19.0));
        }
        lc[a] = clip50(2.0 * std::atanh(prod));
      }
    }

    // variable pass + beliefs; per variable gather (check, position) pairs
    for (int j = 0; j < n; ++j) {
      const auto& checks = H.var_neighbors(j);
      std::vector<double> incoming(checks.size());
      for (std::size_t k = 0; k < checks.size(); ++k) {
        const auto& nbr = H.check_neighbors(checks[k]);
        const std::size_t pos = static_cast<std::size_t>(
            std::lower_bound(nbr.begin(), nbr.end(), j) - nbr.begin());
        incoming[k] = lam_cv[static_cast<std::size_t>(checks[k])][pos];
      }
      const double w = uniform_rho ? rho_v : 1.0;
      for (std::size_t k = 0; k < checks.size(); ++k) {
        double acc = lambda[static_cast<std::size_t>(j)];
        for (std::size_t kp = 0; kp < checks.size(); ++kp)
          if (kp != k) acc += w * incoming[kp];
        acc -= (1.0 - w) * incoming[k];
        const auto& nbr = H.check_neighbors(checks[k]);
        const std::size_t pos = static_cast<std::size_t>(
            std::lower_bound(nbr.begin(), nbr.end(), j) - nbr.begin());
        psi[static_cast<std::size_t>(checks[k])][pos] = clip50(acc);
      }
      double b = lambda[static_cast<std::size_t>(j)];
      for (std::size_t k = 0; k < checks.size(); ++k) b += w * incoming[k];
      out.beliefs[static_cast<std::size_t>(j)] = b;
      out.hard_bits[static_cast<std::size_t>(j)] = b < 0.0 ? 1 : 0;
    }

    // snapshots in edge order (check-major, neighbor ascending)
    std::vector<double> psi_snap, lam_snap;
    for (int i = 0; i < m; ++i) {
      for (std::size_t a = 0; a < psi[static_cast<std::size_t>(i)].size(); ++a) {
        psi_snap.push_back(psi[static_cast<std::size_t>(i)][a]);
        lam_snap.push_back(lam_cv[static_cast<std::size_t>(i)][a]);
      }
    }
    out.psi_history.push_back(std::move(psi_snap));
    out.lambda_history.push_back(std::move(lam_snap));

    out.iterations_used = iter;
    if (early_stop && is_codeword(H, out.hard_bits)) {
      out.converged = true;
      break;
    }
  }
  if (!early_stop) out.converged = is_codeword(H, out.hard_bits);
  return out;
}

}  // namespace

SpaResult reference_sum_product(const ParityCheckMatrix& H,
                                const std::vector<double>& llr_in, int max_iters,
                                bool early_stop) {
  return run_reference(H, llr_in, max_iters, early_stop, false, 1.0);
}

SpaResult reference_urw(const ParityCheckMatrix& H, double rho_v,
                        const std::vector<double>& llr_in, int max_iters,
                        bool early_stop) {
  return run_reference(H, llr_in, max_iters, early_stop, true, rho_v);
}

std::vector<std::vector<std::uint8_t>> enumerate_codewords(const ParityCheckMatrix& H) {
  const int n = H.num_vars();
  if (n > 22) throw std::invalid_argument("enumerate_codewords: N too large");
  std::vector<std::vector<std::uint8_t>> words;
  for (std::uint32_t x = 0; x < (1u << n); ++x) {
    std::vector<std::uint8_t> bits(static_cast<std::size_t>(n));
    for (int j = 0; j < n; ++j) bits[static_cast<std::size_t>(j)] = (x >> j) & 1u;
    if (is_codeword(H, bits)) words.push_back(std::move(bits));
  }
  return words;
}

std::vector<double> exact_marginal_llrs(const ParityCheckMatrix& H,
                                        const std::vector<double>& llr_in) {
  const int n = H.num_vars();
  const auto words = enumerate_codewords(H);
  // weight of word x: prod_j p_j(x_j), p from LLRs; accumulate in log domain
  std::vector<double> p0(static_cast<std::size_t>(n)), p1(static_cast<std::size_t>(n));
  for (int j = 0; j < n; ++j) {
    const double l = llr_in[static_cast<std::size_t>(j)];
    p0[static_cast<std::size_t>(j)] = -std::log1p(std::exp(-l));
    p1[static_cast<std::size_t>(j)] = -std::log1p(std::exp(l));
  }
  std::vector<double> num0(static_cast<std::size_t>(n),
                           -std::numeric_limits<double>::infinity());
  std::vector<double> num1 = num0;
  auto lse = [](double a, double b) {
    if (a == -std::numeric_limits<double>::infinity()) return b;
    if (b == -std::numeric_limits<double>::infinity()) return a;
    const double m = std::max(a, b);
    return m + std::log(std::exp(a - m) + std::exp(b - m));
  };
  for (const auto& w : words) {
    double logw = 0.0;
    for (int j = 0; j < n; ++j)
      logw += w[static_cast<std::size_t>(j)] ? p1[static_cast<std::size_t>(j)]
                                             : p0[static_cast<std::size_t>(j)];
    for (int j = 0; j < n; ++j) {
      if (w[static_cast<std::size_t>(j)])
        num1[static_cast<std::size_t>(j)] = lse(num1[static_cast<std::size_t>(j)], logw);
      else
        num0[static_cast<std::size_t>(j)] = lse(num0[static_cast<std::size_t>(j)], logw);
    }
  }
  std::vector<double> out(static_cast<std::size_t>(n));
  for (int j = 0; j < n; ++j)
    out[static_cast<std::size_t>(j)] =
        num0[static_cast<std::size_t>(j)] - num1[static_cast<std::size_t>(j)];
  return out;
}

std::vector<std::vector<long long>> dfs_cycle_census(const ParityCheckMatrix& H,
                                                     int max_len) {
  const int n = H.num_vars();
  const int m = H.num_checks();
  const int total = n + m;  // unified: vars then checks
  std::vector<std::vector<int>> adj(static_cast<std::size_t>(total));
  for (int j = 0; j < n; ++j)
    for (int c : H.var_neighbors(j)) {
      adj[static_cast<std::size_t>(j)].push_back(n + c);
      adj[static_cast<std::size_t>(n + c)].push_back(j);
    }

  std::vector<std::vector<long long>> counts(
      static_cast<std::size_t>(max_len) + 1,
      std::vector<long long>(static_cast<std::size_t>(m), 0));
  std::vector<char> on_path(static_cast<std::size_t>(total), 0);
  std::vector<int> path;

  // every simple cycle is rooted at its minimal node and traversed in the
  // direction where the second node is smaller than the last
  auto dfs = [&](auto&& self, int root, int u, int depth) -> void {
    if (depth > max_len) return;
    for (int w : adj[static_cast<std::size_t>(u)]) {
      if (w == root) {
        // closing edge: the path holds `depth` nodes, so the cycle has
        // `depth` edges; depth 2 is the immediate backtrack over one edge
        if (depth >= 4 && path[1] < u) {
          const int len = depth;
          if (len <= max_len) {
            for (int node : path)
              if (node >= n) ++counts[static_cast<std::size_t>(len)]
                                     [static_cast<std::size_t>(node - n)];
          }
        }
        continue;
      }
      if (w < root || on_path[static_cast<std::size_t>(w)]) continue;
      if (depth + 1 > max_len) continue;
      on_path[static_cast<std::size_t>(w)] = 1;
      path.push_back(w);
      self(self, root, w, depth + 1);
      path.pop_back();
      on_path[static_cast<std::size_t>(w)] = 0;
    }
  };

  for (int root = 0; root < total; ++root) {
    on_path[static_cast<std::size_t>(root)] = 1;
    path.assign(1, root);
    dfs(dfs, root, root, 1);
    on_path[static_cast<std::size_t>(root)] = 0;
  }
  return counts;
}

int dfs_girth(const ParityCheckMatrix& H, int max_len) {
  const auto counts = dfs_cycle_census(H, std::min(max_len, H.num_vars() + H.num_checks()));
  for (std::size_t len = 0; len < counts.size(); ++len)
    for (long long c : counts[len])
      if (c > 0) return static_cast<int>(len);
  return kInfiniteGirth;
}

std::vector<std::uint8_t> dense_syndrome(const ParityCheckMatrix& H,
                                         const std::vector<std::uint8_t>& x) {
  const int n = H.num_vars();
  const int m = H.num_checks();
  std::vector<std::vector<std::uint8_t>> dense(
      static_cast<std::size_t>(m), std::vector<std::uint8_t>(static_cast<std::size_t>(n), 0));
  for (int i = 0; i < m; ++i)
    for (int j : H.check_neighbors(i)) dense[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] = 1;
  std::vector<std::uint8_t> s(static_cast<std::size_t>(m), 0);
  for (int i = 0; i < m; ++i) {
    int acc = 0;
    for (int j = 0; j < n; ++j)
      acc += dense[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] *
             (x[static_cast<std::size_t>(j)] & 1);
    s[static_cast<std::size_t>(i)] = static_cast<std::uint8_t>(acc % 2);
  }
  return s;
}

ParityCheckMatrix random_matrix(int num_checks, int num_vars, double density,
                                std::uint64_t seed) {
  Rng rng(seed);
  for (;;) {
    std::vector<std::vector<int>> rows(static_cast<std::size_t>(num_checks));
    for (int i = 0; i < num_checks; ++i)
      for (int j = 0; j < num_vars; ++j)
        if (rng.uniform() < density) rows[static_cast<std::size_t>(i)].push_back(j);
    // patch empty nodes
    std::vector<int> var_deg(static_cast<std::size_t>(num_vars), 0);
    for (const auto& r : rows)
      for (int j : r) ++var_deg[static_cast<std::size_t>(j)];
    bool ok = true;
    for (int i = 0; i < num_checks && ok; ++i)
      if (rows[static_cast<std::size_t>(i)].empty()) ok = false;
    for (int j = 0; j < num_vars && ok; ++j)
      if (var_deg[static_cast<std::size_t>(j)] == 0) ok = false;
    if (ok) return ParityCheckMatrix(num_checks, num_vars, std::move(rows));
  }
}

Interval wilson_interval(long long successes, long long trials, double z) {
  if (trials <= 0) return {0.0, 1.0};
  const double n = static_cast<double>(trials);
  const double p = static_cast<double>(successes) / n;
  const double z2 = z * z;
  const double denom = 1.0 + z2 / n;
  const double center = (p + z2 / (2.0 * n)) / denom;
  const double half = z * std::sqrt(p * (1.0 - p) / n + z2 / (4.0 * n * n)) / denom;
  return {std::max(center - half, 0.0), std::min(center + half, 1.0)};
}

double binomial_tail_half(long long k, long long n) {
  if (k <= 0) return 1.0;
  if (k > n) return 0.0;
  // sum C(n, i) / 2^n for i in [k, n], in log domain
  double tail = 0.0;
  double log_c = 0.0;  // log C(n, 0)
  const double log_half_n = -static_cast<double>(n) * std::log(2.0);
  for (long long i = 0; i <= n; ++i) {
    if (i >= k) tail += std::exp(log_c + log_half_n);
    log_c += std::log(static_cast<double>(n - i)) - std::log(static_cast<double>(i + 1));
  }
  return std::min(tail, 1.0);
}

}  // namespace mulink::test
