#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <string>
#include <vector>

#include "mulink/channel.hpp"
#include "mulink/constellation.hpp"
#include "mulink/decoder.hpp"
#include "mulink/generator_matrix.hpp"
#include "mulink/parity_check_matrix.hpp"

namespace mulink {

// Experiment description; mirrors the flat key=value configuration file.
struct IddConfig {
  // system
  int num_users = 4;
  int num_rx = 4;
  int scenario = 1;  // 1: iid Rayleigh, 2: path loss + shadowing + rx correlation
  double correlation = 0.8;
  double shadow_db = 3.0;
  double path_loss_min = 0.7;
  double path_loss_max = 1.0;
  // code
  int code_n = 1000;
  int code_m = 500;
  int code_dv = 3;
  std::uint64_t code_seed = 0;
  std::string alist_path;  // load instead of constructing when set
  // decoder variant and rho source
  std::string decoder = "bp";  // bp | urw | ckar | ekar | file
  std::string rho_file;        // used when decoder = file
  double alpha = 0.85;
  int ekar_dmax = 0;  // 0: choose the depth whose subgraph count is closest to 20
  // operating points (dB)
  std::vector<double> snr_db;
  bool snr_is_ebn0 = false;
  // iteration budgets
  int inner_iters = 30;
  int outer_iters = 3;
  bool warm_start = false;
  // Monte Carlo budget
  long long max_frames = 1000;
  long long stop_at_frame_errors = 300;
  int frame_batch = 32;  // early-stop decisions happen on batch boundaries
  std::uint64_t seed = 1;
  int threads = 0;  // 0: MULINK_THREADS env or hardware concurrency
  // outputs
  std::string out_csv;
  std::string out_json;

  void validate() const;
};

// sigma_n^2 from the SNR definition 10 log10(K sigma_x^2 / sigma_n^2).
double snr_to_noise_variance(double snr_db, int num_users, double symbol_energy = 1.0);

// SNR_dB = EbN0_dB + 10 log10(rate * log2 C).
double ebn0_to_snr_db(double ebn0_db, double code_rate, int bits_per_symbol);

// One detector/decoder exchange over a received block (one channel use per
// symbol index, all users in parallel). Detector priors start at zero;
// each outer iteration runs the detector with the decoders' extrinsic output
// as priors and then one decoding pass per user. Stops early once every
// user's syndrome is zero; trailing outer slots repeat the settled output.
struct IddBlockResult {
  std::vector<std::vector<std::vector<std::uint8_t>>> hard_bits;  // [outer][user][bit]
  std::vector<std::uint8_t> all_converged;                        // per outer
  std::vector<double> mean_inner_iters;                           // per outer
  int outer_used = 0;
};

IddBlockResult run_idd_block(const ParityCheckMatrix& H, const Constellation& mod,
                             const ReweightingVector& rho,
                             const std::vector<Eigen::VectorXcd>& received,
                             const Eigen::MatrixXcd& C, double noise_var,
                             int inner_iters, int outer_iters,
                             bool warm_start = false);

struct SimPoint {
  double snr_db = 0.0;
  double ebn0_db = 0.0;
  long long frames = 0;
  long long frame_errors = 0;
  long long bits = 0;
  long long bit_errors = 0;
  double ber = 0.0;
  double fer = 0.0;
  double mean_inner_iters = 0.0;
  double mean_outer_iters = 0.0;
};

struct SimResult {
  std::vector<SimPoint> points;
  std::string config_hash;
  double wall_seconds = 0.0;
};

// Per-outer-iteration error accounting of one SNR point, for paired decoder
// comparisons: identical seeds produce identical frames, channels and noise
// regardless of the decoder variant under test.
struct PointDetail {
  long long frames = 0;
  long long bits = 0;                      // info bits counted per outer slot
  std::vector<long long> bit_errors;       // [outer]
  std::vector<long long> frame_errors;     // [outer]
  std::vector<std::uint8_t> frame_error_flags;  // final outer, per frame
  double mean_inner_iters = 0.0;
  double mean_outer_iters = 0.0;
};

class IddSimulator {
 public:
  IddSimulator(ParityCheckMatrix H, GeneratorMatrix G, ReweightingVector rho,
               IddConfig config);

  // full sweep over config.snr_db with early stop at stop_at_frame_errors
  SimResult run() const;

  PointDetail run_point(double snr_db, int snr_index, long long max_frames,
                        long long stop_at_frame_errors) const;

  const ParityCheckMatrix& matrix() const { return H_; }
  const GeneratorMatrix& generator() const { return G_; }
  const IddConfig& config() const { return config_; }

 private:
  ParityCheckMatrix H_;
  GeneratorMatrix G_;
  ReweightingVector rho_;
  IddConfig config_;
  ChannelModel channel_;
};

// Resolves the rho vector for a decoder variant name (bp/urw/ckar/ekar/file)
// against a given code. May run the EKAR pipeline, which is expensive.
ReweightingVector resolve_reweighting(const std::string& decoder,
                                      const ParityCheckMatrix& H,
                                      const GeneratorMatrix& G,
                                      const IddConfig& config);

// Convenience driver: build or load the code, resolve rho, run the sweep.
SimResult monte_carlo(const IddConfig& config);

int resolve_threads(int configured);

}  // namespace mulink
