#pragma once

#include <algorithm>
#include <cmath>
#include <span>
#include <vector>

#include "mulink/parity_check_matrix.hpp"

namespace mulink {

// Message clipping keeps atanh well away from its poles; tanh arguments are
// clipped separately.
constexpr double kTanhArgClip = 19.0;
constexpr double kMessageClip = 50.0;

inline double clip_message(double x) {
  return std::clamp(x, -kMessageClip, kMessageClip);
}

// Factor appearance probabilities, one per check node, each in (0, 1].
// rho = all ones reproduces the standard sum-product algorithm.
struct ReweightingVector {
  std::vector<double> rho;

  static ReweightingVector ones(int num_checks) {
    return {std::vector<double>(static_cast<std::size_t>(num_checks), 1.0)};
  }
  static ReweightingVector uniform(int num_checks, double rho_v) {
    return {std::vector<double>(static_cast<std::size_t>(num_checks), rho_v)};
  }

  void validate() const;
};

// Variable-to-check update. check_messages and rho cover the full check
// neighborhood of the variable in the same order; target selects the
// receiving check:
//   psi = lambda_in + sum_{k != target} rho[k]*msg[k]
//                   - (1 - rho[target])*msg[target]
double variable_to_check_message(double lambda_in,
                                 std::span<const double> check_messages,
                                 std::span<const double> rho,
                                 std::size_t target);

// Check-to-variable update over the incoming messages of all *other*
// variables: 2 atanh(prod tanh(psi/2)), with the tanh argument clipped.
double check_to_variable_message(std::span<const double> other_psi);

// Belief of one variable: lambda_in + sum rho[k]*msg[k] over its checks.
double compute_belief(double lambda_in, std::span<const double> check_messages,
                      std::span<const double> rho);

struct DecodeResult {
  std::vector<std::uint8_t> hard_bits;
  bool converged = false;
  int iterations_used = 0;
  std::vector<double> beliefs;    // final b(x_j)
  std::vector<double> extrinsic;  // b(x_j) - lambda_in,j
};

struct DecodeOptions {
  bool early_stop = true;   // stop on zero syndrome
  bool warm_start = false;  // keep check messages from the previous decode call
};

// Edge-centric reweighted belief propagation engine with a flooding
// schedule: all check updates from the previous iteration's variable
// messages, then all variable updates, then beliefs and the syndrome test.
// Check messages start at zero, so iteration 1 sees channel LLRs only.
// LLR convention everywhere: positive means bit 0 (BPSK symbol +1).
class RbpDecoder {
 public:
  RbpDecoder(const ParityCheckMatrix& H, ReweightingVector rho);

  DecodeResult decode(const std::vector<double>& llr_in, int max_iters,
                      const DecodeOptions& options = {});

  const ParityCheckMatrix& matrix() const { return H_; }
  const ReweightingVector& rho() const { return rho_; }

  // message state of the last decode, for offline analysis
  const std::vector<double>& psi() const { return psi_; }
  const std::vector<double>& lambda() const { return lambda_; }

  // edges of check i as indices into psi()
  std::span<const int> check_edges(int check) const {
    return {chk_edges_.data() + chk_offset_[static_cast<std::size_t>(check)],
            static_cast<std::size_t>(chk_offset_[static_cast<std::size_t>(check) + 1] -
                                     chk_offset_[static_cast<std::size_t>(check)])};
  }

 private:
  ParityCheckMatrix H_;
  ReweightingVector rho_;
  // edge e connects check edge_check_[e] with variable edge_var_[e]
  std::vector<int> edge_check_, edge_var_;
  std::vector<int> chk_edges_, chk_offset_;  // CSR over checks
  std::vector<int> var_edges_, var_offset_;  // CSR over variables
  std::vector<double> psi_, lambda_cv_, lambda_;
};

// One-call decode per the module contract.
DecodeResult decode(const ParityCheckMatrix& H, const ReweightingVector& rho,
                    const std::vector<double>& llr_in, int max_iters,
                    const DecodeOptions& options = {});

}  // namespace mulink
