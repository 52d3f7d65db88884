#pragma once

#include <Eigen/Dense>
#include <vector>

#include "mulink/rng.hpp"

namespace mulink {

enum class ChannelScenario {
  kIidRayleigh = 1,        // C entries CN(0,1)
  kCorrelatedLargeScale = 2,  // path loss, log-normal shadowing, rx correlation
};

// N_R x K matrix with independent CN(0,1) entries, drawn column by column.
Eigen::MatrixXcd iid_rayleigh(int num_users, int num_rx, Rng& rng);

struct LargeScaleParams {
  std::vector<double> path_loss;  // L_p per user
  std::vector<double> alpha;      // sqrt(L_p)
  std::vector<double> beta;       // 10^(shadow_db * z / 10), z ~ N(0,1)
};

LargeScaleParams large_scale(const std::vector<double>& path_loss,
                             double shadow_spread_db, Rng& rng);

// Receive correlation with entry (i,j) = coefficient^((i-j)^2) and its
// Hermitian square root (negative eigenvalues clamped to zero).
struct CorrelationModel {
  double coefficient = 0.0;
  Eigen::MatrixXd rxx;
  Eigen::MatrixXd root;
  bool clamped = false;  // clamping exceeded 1e-8
};

CorrelationModel build_rx_correlation(double coefficient, int num_rx);

struct ChannelConfig {
  ChannelScenario scenario = ChannelScenario::kIidRayleigh;
  int num_users = 4;
  int num_rx = 4;
  // scenario 2 only:
  double correlation = 0.8;
  double shadow_spread_db = 3.0;
  double path_loss_min = 0.7;
  double path_loss_max = 1.0;
};

struct ChannelRealization {
  Eigen::MatrixXcd C;          // N_R x K
  std::vector<double> gains;   // alpha_k * beta_k (all ones for scenario 1)
  double noise_var = 0.0;      // attached by the caller
};

// Block-fading channel generator; one realization per codeword block.
// Scenario 2 draws, per user: path loss U[min,max], one shadowing normal,
// then the N_R fast-fading entries, and sets c_k = alpha_k beta_k R^{1/2} h_k.
class ChannelModel {
 public:
  explicit ChannelModel(const ChannelConfig& config);

  ChannelRealization realize(Rng& rng) const;

  const ChannelConfig& config() const { return config_; }
  const CorrelationModel& correlation() const { return corr_; }

 private:
  ChannelConfig config_;
  CorrelationModel corr_;  // identity for scenario 1
};

// r = C x + n with circularly symmetric noise of per-entry variance noise_var.
Eigen::VectorXcd apply_channel(const Eigen::MatrixXcd& C, const Eigen::VectorXcd& x,
                               double noise_var, Rng& rng);

}  // namespace mulink
