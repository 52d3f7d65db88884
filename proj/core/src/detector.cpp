#include "mulink/detector.hpp"

#include <stdexcept>

namespace mulink {

Eigen::VectorXcd pic_cancel(const Eigen::VectorXcd& r, const Eigen::MatrixXcd& C,
                            std::span<const SoftSymbol> soft, int k) {
  if (C.rows() != r.size() || static_cast<std::size_t>(C.cols()) != soft.size())
    throw std::invalid_argument("pic_cancel: dimension mismatch");
  Eigen::VectorXcd r_hat = r;
  for (int q = 0; q < C.cols(); ++q) {
    if (q == k) continue;
    r_hat -= C.col(q) * soft[static_cast<std::size_t>(q)].mean;
  }
  return r_hat;
}

MmseFilter mmse_filter(const Eigen::MatrixXcd& C,
                       std::span<const double> soft_variances, int k,
                       double noise_var, double symbol_energy) {
  const int nr = static_cast<int>(C.rows());
  const int nu = static_cast<int>(C.cols());
  if (static_cast<std::size_t>(nu) != soft_variances.size())
    throw std::invalid_argument("mmse_filter: variance count != users");
  if (k < 0 || k >= nu) throw std::invalid_argument("mmse_filter: bad user index");

  Eigen::MatrixXcd sigma = noise_var * Eigen::MatrixXcd::Identity(nr, nr);
  for (int q = 0; q < nu; ++q) {
    const double v = q == k ? symbol_energy : soft_variances[static_cast<std::size_t>(q)];
    sigma.noalias() += v * (C.col(q) * C.col(q).adjoint());
  }

  MmseFilter out;
  const Eigen::VectorXcd rhs = symbol_energy * C.col(k);
  Eigen::LDLT<Eigen::MatrixXcd> ldlt(sigma);
  out.w = ldlt.solve(rhs);

  // rank deficiency shows up as a vanishing pivot
  const Eigen::VectorXd d = ldlt.vectorD().real();
  const double d_max = d.cwiseAbs().maxCoeff();
  const double d_min = d.minCoeff();
  if (ldlt.info() != Eigen::Success || !out.w.allFinite() || d_max <= 0.0 ||
      d_min <= 1e-12 * d_max) {
    out.regularized = true;
    Eigen::MatrixXcd reg = sigma + 1e-12 * Eigen::MatrixXcd::Identity(nr, nr);
    out.w = reg.ldlt().solve(rhs);
  }

  out.mu = out.w.dot(C.col(k)).real();  // w^H c_k; Hermitian solve makes it real
  out.nu2 = std::max(symbol_energy * (out.mu - out.mu * out.mu), 1e-15);
  return out;
}

std::vector<std::vector<double>> detect_extrinsic(
    const Constellation& c, const Eigen::VectorXcd& r, const Eigen::MatrixXcd& C,
    const std::vector<std::vector<double>>& prior_llrs, double noise_var) {
  const int nu = static_cast<int>(C.cols());
  if (prior_llrs.size() != static_cast<std::size_t>(nu))
    throw std::invalid_argument("detect_extrinsic: one prior set per user required");

  std::vector<SoftSymbol> soft(static_cast<std::size_t>(nu));
  std::vector<double> variances(static_cast<std::size_t>(nu));
  for (int q = 0; q < nu; ++q) {
    soft[static_cast<std::size_t>(q)] = soft_symbol(c, prior_llrs[static_cast<std::size_t>(q)]);
    variances[static_cast<std::size_t>(q)] = soft[static_cast<std::size_t>(q)].variance;
  }

  std::vector<std::vector<double>> extrinsic(static_cast<std::size_t>(nu));
  for (int k = 0; k < nu; ++k) {
    const Eigen::VectorXcd r_hat = pic_cancel(r, C, soft, k);
    const MmseFilter f = mmse_filter(C, variances, k, noise_var);
    const std::complex<double> y = f.w.dot(r_hat);  // w^H r_hat
    extrinsic[static_cast<std::size_t>(k)] =
        demap_llr(c, y, f.mu, f.nu2, prior_llrs[static_cast<std::size_t>(k)]);
  }
  return extrinsic;
}

}  // namespace mulink
