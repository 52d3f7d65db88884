#include "mulink/exit_chart.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "mulink/constellation.hpp"
#include "mulink/detector.hpp"

namespace mulink {

namespace {

double log1pexp(double x) { return x > 0.0 ? x + std::log1p(std::exp(-x)) : std::log1p(std::exp(x)); }

// J(sigma) = 1 - E[log2(1 + e^-L)], L ~ N(sigma^2/2, sigma^2), by Simpson
// quadrature over +-12 standard deviations.
double j_by_quadrature(double sigma) {
  if (sigma <= 0.0) return 0.0;
  const double mean = 0.5 * sigma * sigma;
  const int steps = 4000;  // even
  const double lo = mean - 12.0 * sigma;
  const double hi = mean + 12.0 * sigma;
  const double h = (hi - lo) / steps;
  auto f = [&](double l) {
    const double t = (l - mean) / sigma;
    const double pdf = std::exp(-0.5 * t * t) / (sigma * std::sqrt(2.0 * M_PI));
    return pdf * log1pexp(-l);
  };
  double acc = f(lo) + f(hi);
  for (int i = 1; i < steps; ++i) acc += f(lo + i * h) * (i % 2 ? 4.0 : 2.0);
  const double integral = acc * h / 3.0;
  return std::clamp(1.0 - integral / std::log(2.0), 0.0, 1.0);
}

struct JTable {
  std::vector<double> sigma, mi;
  JTable() {
    // dense near zero where the curve is steep
    for (double s = 0.0; s <= 10.0 + 1e-12; s += 0.005) {
      sigma.push_back(s);
      mi.push_back(j_by_quadrature(s));
    }
    // monotone by construction up to quadrature noise; enforce exactly
    for (std::size_t i = 1; i < mi.size(); ++i) mi[i] = std::max(mi[i], mi[i - 1]);
  }
};

const JTable& j_table() {
  static const JTable table;
  return table;
}

}  // namespace

double j_function(double sigma) {
  if (sigma < 0.0) throw std::invalid_argument("j_function: sigma must be >= 0");
  const auto& t = j_table();
  if (sigma >= t.sigma.back()) return t.mi.back();
  const auto it = std::upper_bound(t.sigma.begin(), t.sigma.end(), sigma);
  const std::size_t hi = static_cast<std::size_t>(it - t.sigma.begin());
  const std::size_t lo = hi - 1;
  const double w = (sigma - t.sigma[lo]) / (t.sigma[hi] - t.sigma[lo]);
  return t.mi[lo] + w * (t.mi[hi] - t.mi[lo]);
}

double j_inverse(double mutual_information) {
  if (mutual_information < 0.0 || mutual_information > 1.0)
    throw std::invalid_argument("j_inverse: argument outside [0,1]");
  const double target = std::min(mutual_information, 1.0 - 1e-6);
  const auto& t = j_table();
  if (target <= t.mi.front()) return 0.0;
  if (target >= t.mi.back()) return t.sigma.back();
  const auto it = std::upper_bound(t.mi.begin(), t.mi.end(), target);
  const std::size_t hi = static_cast<std::size_t>(it - t.mi.begin());
  const std::size_t lo = hi - 1;
  if (t.mi[hi] <= t.mi[lo]) return t.sigma[lo];
  const double w = (target - t.mi[lo]) / (t.mi[hi] - t.mi[lo]);
  return t.sigma[lo] + w * (t.sigma[hi] - t.sigma[lo]);
}

namespace {

// extrinsic mutual information estimate: 1 - mean log2(1 + e^{-s L})
class MiAccumulator {
 public:
  void add(double llr, int bit) {
    const double s = bit ? -1.0 : 1.0;
    sum_ += log1pexp(-s * llr) / std::log(2.0);
    ++count_;
  }
  long long count() const { return count_; }
  double value() const {
    if (count_ == 0) return 0.0;
    return std::clamp(1.0 - sum_ / static_cast<double>(count_), 0.0, 1.0);
  }

 private:
  double sum_ = 0.0;
  long long count_ = 0;
};

}  // namespace

ExitCurve exit_decoder_curve(const ParityCheckMatrix& H, const GeneratorMatrix& G,
                             const ReweightingVector& rho, int inner_iters,
                             std::span<const double> ia_grid, int min_bits,
                             std::uint64_t seed) {
  ExitCurve curve;
  RbpDecoder dec(H, rho);
  std::vector<std::uint8_t> msg(static_cast<std::size_t>(G.message_length()));
  std::vector<double> llr(static_cast<std::size_t>(H.num_vars()));

  for (std::size_t gi = 0; gi < ia_grid.size(); ++gi) {
    const double ia = ia_grid[gi];
    if (ia < 0.0 || ia > 1.0)
      throw std::invalid_argument("exit_decoder_curve: I_A outside [0,1]");
    const double sigma_a = j_inverse(ia);
    MiAccumulator acc;
    Rng rng(mix_seed(seed, {0xdecULL, gi}));
    while (acc.count() < min_bits) {
      for (auto& b : msg) b = rng.bit() ? 1 : 0;
      const std::vector<std::uint8_t> cw = G.encode(msg);
      for (std::size_t j = 0; j < llr.size(); ++j) {
        const double s = cw[j] ? -1.0 : 1.0;
        llr[j] = 0.5 * sigma_a * sigma_a * s + sigma_a * rng.normal();
      }
      const DecodeResult res = dec.decode(llr, inner_iters);
      for (std::size_t j = 0; j < llr.size(); ++j) acc.add(res.extrinsic[j], cw[j]);
    }
    curve.i_a.push_back(ia);
    curve.i_e.push_back(acc.value());
  }
  return curve;
}

ExitCurve exit_detector_curve(const DetectorExitConfig& config, double ebn0_db,
                              std::span<const double> ia_grid, int min_bits,
                              std::uint64_t seed) {
  const Constellation& mod = qpsk_anti_gray();
  const int bps = mod.bits_per_symbol;
  const int users = config.num_users;
  // SNR definition: 10 log10(K sigma_x^2 / sigma_n^2); Eb/N0 converts through
  // SNR = Eb/N0 + 10 log10(rate * log2 C)
  const double snr_db =
      ebn0_db + 10.0 * std::log10(config.code_rate * bps);
  const double noise_var = users * std::pow(10.0, -snr_db / 10.0);

  ExitCurve curve;
  for (std::size_t gi = 0; gi < ia_grid.size(); ++gi) {
    const double ia = ia_grid[gi];
    if (ia < 0.0 || ia > 1.0)
      throw std::invalid_argument("exit_detector_curve: I_A outside [0,1]");
    const double sigma_a = j_inverse(ia);
    MiAccumulator acc;
    Rng rng(mix_seed(seed, {0xde7ULL, gi}));
    std::vector<std::vector<double>> priors(static_cast<std::size_t>(users),
                                            std::vector<double>(static_cast<std::size_t>(bps)));
    std::vector<std::uint8_t> bits(static_cast<std::size_t>(users * bps));
    while (acc.count() < min_bits) {
      for (auto& b : bits) b = rng.bit() ? 1 : 0;
      Eigen::VectorXcd x(users);
      for (int k = 0; k < users; ++k) {
        std::uint32_t label = 0;
        for (int j = 0; j < bps; ++j)
          label = (label << 1) | bits[static_cast<std::size_t>(k * bps + j)];
        x(k) = mod.points[label];
        for (int j = 0; j < bps; ++j) {
          const double s = bits[static_cast<std::size_t>(k * bps + j)] ? -1.0 : 1.0;
          priors[static_cast<std::size_t>(k)][static_cast<std::size_t>(j)] =
              0.5 * sigma_a * sigma_a * s + sigma_a * rng.normal();
        }
      }
      const Eigen::MatrixXcd C = iid_rayleigh(users, config.num_rx, rng);
      const Eigen::VectorXcd r = apply_channel(C, x, noise_var, rng);
      const auto ext = detect_extrinsic(mod, r, C, priors, noise_var);
      for (int k = 0; k < users; ++k)
        for (int j = 0; j < bps; ++j)
          acc.add(ext[static_cast<std::size_t>(k)][static_cast<std::size_t>(j)],
                  bits[static_cast<std::size_t>(k * bps + j)]);
    }
    curve.i_a.push_back(ia);
    curve.i_e.push_back(acc.value());
  }
  return curve;
}

}  // namespace mulink
