#include "mulink/channel.hpp"

#include <cmath>
#include <stdexcept>

namespace mulink {

Eigen::MatrixXcd iid_rayleigh(int num_users, int num_rx, Rng& rng) {
  if (num_users < 1 || num_rx < 1)
    throw std::invalid_argument("iid_rayleigh: dimensions must be positive");
  Eigen::MatrixXcd C(num_rx, num_users);
  for (int k = 0; k < num_users; ++k)
    for (int i = 0; i < num_rx; ++i) C(i, k) = rng.complex_normal();
  return C;
}

LargeScaleParams large_scale(const std::vector<double>& path_loss,
                             double shadow_spread_db, Rng& rng) {
  LargeScaleParams p;
  p.path_loss = path_loss;
  p.alpha.reserve(path_loss.size());
  p.beta.reserve(path_loss.size());
  for (double lp : path_loss) {
    if (lp < 0.0) throw std::invalid_argument("large_scale: negative path loss");
    p.alpha.push_back(std::sqrt(lp));
    p.beta.push_back(std::pow(10.0, shadow_spread_db * rng.normal() / 10.0));
  }
  return p;
}

CorrelationModel build_rx_correlation(double coefficient, int num_rx) {
  if (num_rx < 1) throw std::invalid_argument("build_rx_correlation: num_rx must be >= 1");
  if (std::abs(coefficient) >= 1.0)
    throw std::invalid_argument("build_rx_correlation: |coefficient| must be < 1");
  CorrelationModel m;
  m.coefficient = coefficient;
  m.rxx.resize(num_rx, num_rx);
  for (int i = 0; i < num_rx; ++i)
    for (int j = 0; j < num_rx; ++j)
      m.rxx(i, j) = std::pow(coefficient, (i - j) * (i - j));

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(m.rxx);
  if (es.info() != Eigen::Success)
    throw std::runtime_error("build_rx_correlation: eigendecomposition failed");
  Eigen::VectorXd ev = es.eigenvalues();
  double clamp_mass = 0.0;
  for (int i = 0; i < num_rx; ++i) {
    if (ev(i) < 0.0) {
      clamp_mass += -ev(i);
      ev(i) = 0.0;
    }
  }
  m.clamped = clamp_mass > 1e-8;
  m.root = es.eigenvectors() * ev.cwiseSqrt().asDiagonal() *
           es.eigenvectors().transpose();
  return m;
}

ChannelModel::ChannelModel(const ChannelConfig& config) : config_(config) {
  if (config.num_users < 1 || config.num_rx < 1)
    throw std::invalid_argument("channel: dimensions must be positive");
  if (config.scenario == ChannelScenario::kCorrelatedLargeScale)
    corr_ = build_rx_correlation(config.correlation, config.num_rx);
  else
    corr_ = build_rx_correlation(0.0, config.num_rx);  // identity
}

ChannelRealization ChannelModel::realize(Rng& rng) const {
  ChannelRealization ch;
  ch.gains.assign(static_cast<std::size_t>(config_.num_users), 1.0);
  if (config_.scenario == ChannelScenario::kIidRayleigh) {
    ch.C = iid_rayleigh(config_.num_users, config_.num_rx, rng);
    return ch;
  }

  std::vector<double> path_loss(static_cast<std::size_t>(config_.num_users));
  for (auto& lp : path_loss) lp = rng.uniform(config_.path_loss_min, config_.path_loss_max);
  const LargeScaleParams ls = large_scale(path_loss, config_.shadow_spread_db, rng);

  const Eigen::MatrixXcd h0 = iid_rayleigh(config_.num_users, config_.num_rx, rng);
  ch.C.resize(config_.num_rx, config_.num_users);
  for (int k = 0; k < config_.num_users; ++k) {
    const double g = ls.alpha[static_cast<std::size_t>(k)] * ls.beta[static_cast<std::size_t>(k)];
    ch.gains[static_cast<std::size_t>(k)] = g;
    ch.C.col(k) = g * (corr_.root * h0.col(k));
  }
  return ch;
}

Eigen::VectorXcd apply_channel(const Eigen::MatrixXcd& C, const Eigen::VectorXcd& x,
                               double noise_var, Rng& rng) {
  if (C.cols() != x.size()) throw std::invalid_argument("apply_channel: dimension mismatch");
  if (noise_var < 0.0) throw std::invalid_argument("apply_channel: negative noise variance");
  Eigen::VectorXcd r = C * x;
  const double s = std::sqrt(noise_var);
  for (int i = 0; i < r.size(); ++i) r(i) += s * rng.complex_normal();
  return r;
}

}  // namespace mulink
