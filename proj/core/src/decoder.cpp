#include "mulink/decoder.hpp"

#include <stdexcept>

namespace mulink {

void ReweightingVector::validate() const {
  for (double r : rho)
    if (!(r > 0.0) || r > 1.0)
      throw std::invalid_argument("reweighting vector: entries must lie in (0, 1]");
}

double variable_to_check_message(double lambda_in,
                                 std::span<const double> check_messages,
                                 std::span<const double> rho,
                                 std::size_t target) {
  double acc = lambda_in;
  for (std::size_t k = 0; k < check_messages.size(); ++k)
    if (k != target) acc += rho[k] * check_messages[k];
  acc -= (1.0 - rho[target]) * check_messages[target];
  return clip_message(acc);
}

double check_to_variable_message(std::span<const double> other_psi) {
  double prod = 1.0;
  for (double psi : other_psi)
    prod *= std::tanh(std::clamp(0.5 * psi, -kTanhArgClip, kTanhArgClip));
  return clip_message(2.0 * std::atanh(prod));
}

double compute_belief(double lambda_in, std::span<const double> check_messages,
                      std::span<const double> rho) {
  double acc = lambda_in;
  for (std::size_t k = 0; k < check_messages.size(); ++k)
    acc += rho[k] * check_messages[k];
  return acc;
}

RbpDecoder::RbpDecoder(const ParityCheckMatrix& H, ReweightingVector rho)
    : H_(H), rho_(std::move(rho)) {
  if (rho_.rho.size() != static_cast<std::size_t>(H.num_checks()))
    throw std::invalid_argument("decoder: rho length != M");
  rho_.validate();

  chk_offset_.assign(static_cast<std::size_t>(H.num_checks()) + 1, 0);
  var_offset_.assign(static_cast<std::size_t>(H.num_vars()) + 1, 0);
  // edges enumerated check-major, variables ascending inside a check
  for (int i = 0; i < H.num_checks(); ++i) {
    for (int j : H.check_neighbors(i)) {
      edge_check_.push_back(i);
      edge_var_.push_back(j);
    }
    chk_offset_[static_cast<std::size_t>(i) + 1] = static_cast<int>(edge_check_.size());
  }
  chk_edges_.resize(edge_check_.size());
  for (int e = 0; e < static_cast<int>(edge_check_.size()); ++e) chk_edges_[static_cast<std::size_t>(e)] = e;

  var_edges_.resize(edge_check_.size());
  for (int e = 0; e < static_cast<int>(edge_check_.size()); ++e)
    ++var_offset_[static_cast<std::size_t>(edge_var_[static_cast<std::size_t>(e)]) + 1];
  for (std::size_t j = 1; j < var_offset_.size(); ++j) var_offset_[j] += var_offset_[j - 1];
  {
    std::vector<int> cursor(var_offset_.begin(), var_offset_.end() - 1);
    // edges appended in ascending check order per variable
    for (int e = 0; e < static_cast<int>(edge_check_.size()); ++e) {
      const int j = edge_var_[static_cast<std::size_t>(e)];
      var_edges_[static_cast<std::size_t>(cursor[static_cast<std::size_t>(j)]++)] = e;
    }
  }

  psi_.assign(edge_check_.size(), 0.0);
  lambda_cv_.assign(edge_check_.size(), 0.0);
}

DecodeResult RbpDecoder::decode(const std::vector<double>& llr_in, int max_iters,
                                const DecodeOptions& options) {
  const int n = H_.num_vars();
  const int m = H_.num_checks();
  if (llr_in.size() != static_cast<std::size_t>(n))
    throw std::invalid_argument("decode: llr length != N");
  if (max_iters < 1) throw std::invalid_argument("decode: max_iters must be >= 1");

  lambda_.resize(static_cast<std::size_t>(n));
  for (int j = 0; j < n; ++j) lambda_[static_cast<std::size_t>(j)] = clip_message(llr_in[static_cast<std::size_t>(j)]);

  DecodeResult result;
  result.hard_bits.assign(static_cast<std::size_t>(n), 0);
  result.beliefs.assign(static_cast<std::size_t>(n), 0.0);

  std::vector<double> tanh_buf(psi_.size());
  std::vector<double> nbr_msgs, nbr_rho;

  if (!options.warm_start) {
    std::fill(lambda_cv_.begin(), lambda_cv_.end(), 0.0);
    // variable update with zero check messages: psi = lambda
    for (std::size_t e = 0; e < psi_.size(); ++e)
      psi_[e] = lambda_[static_cast<std::size_t>(edge_var_[e])];
  } else {
    // variable update against the retained check messages
    for (int j = 0; j < n; ++j) {
      const int lo = var_offset_[static_cast<std::size_t>(j)];
      const int hi = var_offset_[static_cast<std::size_t>(j) + 1];
      nbr_msgs.resize(static_cast<std::size_t>(hi - lo));
      nbr_rho.resize(static_cast<std::size_t>(hi - lo));
      for (int k = lo; k < hi; ++k) {
        const int e = var_edges_[static_cast<std::size_t>(k)];
        nbr_msgs[static_cast<std::size_t>(k - lo)] = lambda_cv_[static_cast<std::size_t>(e)];
        nbr_rho[static_cast<std::size_t>(k - lo)] =
            rho_.rho[static_cast<std::size_t>(edge_check_[static_cast<std::size_t>(e)])];
      }
      for (int k = lo; k < hi; ++k) {
        const int e = var_edges_[static_cast<std::size_t>(k)];
        psi_[static_cast<std::size_t>(e)] = variable_to_check_message(
            lambda_[static_cast<std::size_t>(j)], nbr_msgs, nbr_rho,
            static_cast<std::size_t>(k - lo));
      }
    }
  }

  for (int iter = 1; iter <= max_iters; ++iter) {
    // check pass, from the previous iteration's psi
    for (std::size_t e = 0; e < psi_.size(); ++e)
      tanh_buf[e] = std::tanh(std::clamp(0.5 * psi_[e], -kTanhArgClip, kTanhArgClip));
    for (int i = 0; i < m; ++i) {
      const auto edges = check_edges(i);
      for (std::size_t a = 0; a < edges.size(); ++a) {
        double prod = 1.0;
        for (std::size_t b = 0; b < edges.size(); ++b)
          if (b != a) prod *= tanh_buf[static_cast<std::size_t>(edges[b])];
        lambda_cv_[static_cast<std::size_t>(edges[a])] = clip_message(2.0 * std::atanh(prod));
      }
    }

    // variable pass and beliefs
    for (int j = 0; j < n; ++j) {
      const int lo = var_offset_[static_cast<std::size_t>(j)];
      const int hi = var_offset_[static_cast<std::size_t>(j) + 1];
      nbr_msgs.resize(static_cast<std::size_t>(hi - lo));
      nbr_rho.resize(static_cast<std::size_t>(hi - lo));
      for (int k = lo; k < hi; ++k) {
        const int e = var_edges_[static_cast<std::size_t>(k)];
        nbr_msgs[static_cast<std::size_t>(k - lo)] = lambda_cv_[static_cast<std::size_t>(e)];
        nbr_rho[static_cast<std::size_t>(k - lo)] =
            rho_.rho[static_cast<std::size_t>(edge_check_[static_cast<std::size_t>(e)])];
      }
      for (int k = lo; k < hi; ++k) {
        const int e = var_edges_[static_cast<std::size_t>(k)];
        psi_[static_cast<std::size_t>(e)] = variable_to_check_message(
            lambda_[static_cast<std::size_t>(j)], nbr_msgs, nbr_rho,
            static_cast<std::size_t>(k - lo));
      }
      result.beliefs[static_cast<std::size_t>(j)] =
          compute_belief(lambda_[static_cast<std::size_t>(j)], nbr_msgs, nbr_rho);
      result.hard_bits[static_cast<std::size_t>(j)] =
          result.beliefs[static_cast<std::size_t>(j)] < 0.0 ? 1 : 0;
    }

    result.iterations_used = iter;
    if (options.early_stop && is_codeword(H_, result.hard_bits)) {
      result.converged = true;
      break;
    }
  }
  if (!options.early_stop) result.converged = is_codeword(H_, result.hard_bits);

  result.extrinsic.resize(static_cast<std::size_t>(n));
  for (int j = 0; j < n; ++j)
    result.extrinsic[static_cast<std::size_t>(j)] =
        result.beliefs[static_cast<std::size_t>(j)] - lambda_[static_cast<std::size_t>(j)];
  return result;
}

DecodeResult decode(const ParityCheckMatrix& H, const ReweightingVector& rho,
                    const std::vector<double>& llr_in, int max_iters,
                    const DecodeOptions& options) {
  RbpDecoder dec(H, rho);
  return dec.decode(llr_in, max_iters, options);
}

}  // namespace mulink
