#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "mulink/channel.hpp"
#include "mulink/decoder.hpp"
#include "mulink/generator_matrix.hpp"
#include "mulink/parity_check_matrix.hpp"

namespace mulink {

// Mutual information between a uniform bit and its LLR under the
// Gaussian-consistent model L ~ N(+-sigma^2/2, sigma^2). Evaluated by
// quadrature on first use and interpolated monotonically afterwards.
double j_function(double sigma);

// Inverse of j_function; the argument is clamped to [0, 1 - 1e-6].
double j_inverse(double mutual_information);

struct ExitCurve {
  std::vector<double> i_a;
  std::vector<double> i_e;
};

// Decoder transfer curve: a-priori LLRs are synthesized from the
// Gaussian-consistent model for random codewords, the decoder runs its inner
// iterations, and the extrinsic mutual information is measured as
// 1 - E[log2(1 + exp(-s L))] over at least min_bits bits.
ExitCurve exit_decoder_curve(const ParityCheckMatrix& H, const GeneratorMatrix& G,
                             const ReweightingVector& rho, int inner_iters,
                             std::span<const double> ia_grid, int min_bits,
                             std::uint64_t seed);

// Detector transfer curve at one Eb/N0 for the QPSK multiuser uplink; the
// channel is redrawn every channel use.
struct DetectorExitConfig {
  int num_users = 4;
  int num_rx = 4;
  double code_rate = 0.5;
};
ExitCurve exit_detector_curve(const DetectorExitConfig& config, double ebn0_db,
                              std::span<const double> ia_grid, int min_bits,
                              std::uint64_t seed);

}  // namespace mulink
