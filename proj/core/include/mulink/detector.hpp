#pragma once

#include <Eigen/Dense>
#include <span>
#include <vector>

#include "mulink/constellation.hpp"

namespace mulink {

// Soft parallel interference cancellation: r_hat_k = r - sum_{q != k} c_q x_q.
Eigen::VectorXcd pic_cancel(const Eigen::VectorXcd& r, const Eigen::MatrixXcd& C,
                            std::span<const SoftSymbol> soft, int k);

struct MmseFilter {
  Eigen::VectorXcd w;       // sigma_x^2 Sigma_k^{-1} c_k
  double mu = 0.0;          // effective gain w^H c_k
  double nu2 = 0.0;         // residual noise-plus-interference variance
  bool regularized = false; // Sigma_k was singular; 1e-12 I was added
};

// MMSE filter for user k after cancellation, with
// Sigma_k = sum_{q != k} v_q c_q c_q^H + sigma_x^2 c_k c_k^H + sigma_n^2 I.
// Under the unbiased Gaussian model y = mu x + n_eff, nu2 = sigma_x^2
// (mu - mu^2).
MmseFilter mmse_filter(const Eigen::MatrixXcd& C,
                       std::span<const double> soft_variances, int k,
                       double noise_var, double symbol_energy = 1.0);

// Full soft-in soft-out detection of one received vector: soft symbols from
// the priors, PIC, per-user MMSE filtering and exact demapping. Returns the
// extrinsic LLRs of each user's bits for this channel use.
// prior_llrs is indexed [user][bit-of-symbol].
std::vector<std::vector<double>> detect_extrinsic(
    const Constellation& c, const Eigen::VectorXcd& r, const Eigen::MatrixXcd& C,
    const std::vector<std::vector<double>>& prior_llrs, double noise_var);

}  // namespace mulink
