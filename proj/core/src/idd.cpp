#include "mulink/idd.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <stdexcept>
#include <thread>

#include "mulink/alist.hpp"
#include "mulink/detector.hpp"
#include "mulink/fap.hpp"
#include "mulink/graph_analysis.hpp"
#include "mulink/peg.hpp"
#include "mulink/rng.hpp"
#include "mulink/sim_io.hpp"

namespace mulink {

void IddConfig::validate() const {
  if (num_users < 1 || num_rx < 1) throw ConfigError("config: users and rx antennas must be >= 1");
  if (num_rx < num_users) throw ConfigError("config: N_R >= K required");
  if (scenario != 1 && scenario != 2) throw ConfigError("config: scenario must be 1 or 2");
  if (inner_iters < 1 || outer_iters < 1) throw ConfigError("config: iteration counts must be >= 1");
  if (snr_db.empty()) throw ConfigError("config: at least one SNR point required");
  if (max_frames < 1) throw ConfigError("config: max_frames must be >= 1");
  if (frame_batch < 1) throw ConfigError("config: frame_batch must be >= 1");
  if (decoder != "bp" && decoder != "urw" && decoder != "ckar" && decoder != "ekar" &&
      decoder != "file")
    throw ConfigError("config: decoder must be bp|urw|ckar|ekar|file");
  if (decoder == "file" && rho_file.empty())
    throw ConfigError("config: decoder=file requires rho_file");
}

double snr_to_noise_variance(double snr_db, int num_users, double symbol_energy) {
  return num_users * symbol_energy * std::pow(10.0, -snr_db / 10.0);
}

double ebn0_to_snr_db(double ebn0_db, double code_rate, int bits_per_symbol) {
  return ebn0_db + 10.0 * std::log10(code_rate * bits_per_symbol);
}

IddBlockResult run_idd_block(const ParityCheckMatrix& H, const Constellation& mod,
                             const ReweightingVector& rho,
                             const std::vector<Eigen::VectorXcd>& received,
                             const Eigen::MatrixXcd& C, double noise_var,
                             int inner_iters, int outer_iters, bool warm_start) {
  const int users = static_cast<int>(C.cols());
  const int n = H.num_vars();
  const int bps = mod.bits_per_symbol;
  const int uses = n / bps;
  if (static_cast<int>(received.size()) != uses)
    throw std::invalid_argument("run_idd_block: received block length != N / bits_per_symbol");

  IddBlockResult out;
  out.hard_bits.resize(static_cast<std::size_t>(outer_iters));
  out.all_converged.assign(static_cast<std::size_t>(outer_iters), 0);
  out.mean_inner_iters.assign(static_cast<std::size_t>(outer_iters), 0.0);

  std::vector<RbpDecoder> decoders;
  decoders.reserve(static_cast<std::size_t>(users));
  for (int k = 0; k < users; ++k) decoders.emplace_back(H, rho);

  // decoder extrinsic output, the detector's priors; zero before the first pass
  std::vector<std::vector<double>> l2p(static_cast<std::size_t>(users),
                                       std::vector<double>(static_cast<std::size_t>(n), 0.0));
  std::vector<std::vector<double>> l1 = l2p;
  std::vector<std::vector<double>> use_priors(static_cast<std::size_t>(users),
                                              std::vector<double>(static_cast<std::size_t>(bps)));

  for (int outer = 0; outer < outer_iters; ++outer) {
    for (int t = 0; t < uses; ++t) {
      for (int k = 0; k < users; ++k)
        for (int j = 0; j < bps; ++j)
          use_priors[static_cast<std::size_t>(k)][static_cast<std::size_t>(j)] =
              l2p[static_cast<std::size_t>(k)][static_cast<std::size_t>(t * bps + j)];
      const auto ext = detect_extrinsic(mod, received[static_cast<std::size_t>(t)], C,
                                        use_priors, noise_var);
      for (int k = 0; k < users; ++k)
        for (int j = 0; j < bps; ++j)
          l1[static_cast<std::size_t>(k)][static_cast<std::size_t>(t * bps + j)] =
              ext[static_cast<std::size_t>(k)][static_cast<std::size_t>(j)];
    }

    bool all_ok = true;
    double iter_sum = 0.0;
    auto& hard = out.hard_bits[static_cast<std::size_t>(outer)];
    hard.resize(static_cast<std::size_t>(users));
    DecodeOptions opt;
    opt.warm_start = warm_start && outer > 0;
    for (int k = 0; k < users; ++k) {
      const DecodeResult res =
          decoders[static_cast<std::size_t>(k)].decode(l1[static_cast<std::size_t>(k)],
                                                       inner_iters, opt);
      hard[static_cast<std::size_t>(k)] = res.hard_bits;
      l2p[static_cast<std::size_t>(k)] = res.extrinsic;
      iter_sum += res.iterations_used;
      all_ok = all_ok && res.converged;
    }
    out.mean_inner_iters[static_cast<std::size_t>(outer)] = iter_sum / users;
    out.all_converged[static_cast<std::size_t>(outer)] = all_ok ? 1 : 0;
    out.outer_used = outer + 1;

    if (all_ok) {
      for (int rest = outer + 1; rest < outer_iters; ++rest) {
        out.hard_bits[static_cast<std::size_t>(rest)] = hard;
        out.all_converged[static_cast<std::size_t>(rest)] = 1;
        out.mean_inner_iters[static_cast<std::size_t>(rest)] =
            out.mean_inner_iters[static_cast<std::size_t>(outer)];
      }
      break;
    }
  }
  return out;
}

IddSimulator::IddSimulator(ParityCheckMatrix H, GeneratorMatrix G,
                           ReweightingVector rho, IddConfig config)
    : H_(std::move(H)), G_(std::move(G)), rho_(std::move(rho)),
      config_(std::move(config)),
      channel_([&] {
        ChannelConfig cc;
        cc.scenario = config_.scenario == 2 ? ChannelScenario::kCorrelatedLargeScale
                                            : ChannelScenario::kIidRayleigh;
        cc.num_users = config_.num_users;
        cc.num_rx = config_.num_rx;
        cc.correlation = config_.correlation;
        cc.shadow_spread_db = config_.shadow_db;
        cc.path_loss_min = config_.path_loss_min;
        cc.path_loss_max = config_.path_loss_max;
        return ChannelModel(cc);
      }()) {
  config_.validate();
  if (H_.num_vars() % qpsk_anti_gray().bits_per_symbol != 0)
    throw ConfigError("config: block length must be divisible by bits per symbol");
}

namespace {

struct FrameOutcome {
  std::vector<long long> bit_errors;    // per outer
  std::vector<std::uint8_t> frame_err;  // per outer
  double mean_inner = 0.0;
  int outer_used = 0;
};

}  // namespace

PointDetail IddSimulator::run_point(double snr_db, int snr_index,
                                    long long max_frames,
                                    long long stop_at_frame_errors) const {
  const Constellation& mod = qpsk_anti_gray();
  const int users = config_.num_users;
  const int n = H_.num_vars();
  const int k_info = G_.message_length();
  const int bps = mod.bits_per_symbol;
  const int uses = n / bps;
  const double noise_var = snr_to_noise_variance(snr_db, users);
  const int outer = config_.outer_iters;

  PointDetail detail;
  detail.bit_errors.assign(static_cast<std::size_t>(outer), 0);
  detail.frame_errors.assign(static_cast<std::size_t>(outer), 0);

  const int threads = resolve_threads(config_.threads);
  double outer_sum = 0.0, inner_sum = 0.0;

  auto run_frame = [&](long long frame) {
    FrameOutcome fo;
    Rng msg_rng(mix_seed(config_.seed, {0x1157ULL, static_cast<std::uint64_t>(snr_index),
                                        static_cast<std::uint64_t>(frame), 0}));
    Rng chan_rng(mix_seed(config_.seed, {0x1157ULL, static_cast<std::uint64_t>(snr_index),
                                         static_cast<std::uint64_t>(frame), 1}));
    Rng noise_rng(mix_seed(config_.seed, {0x1157ULL, static_cast<std::uint64_t>(snr_index),
                                          static_cast<std::uint64_t>(frame), 2}));

    std::vector<std::vector<std::uint8_t>> msgs(static_cast<std::size_t>(users));
    std::vector<std::vector<std::uint8_t>> codewords(static_cast<std::size_t>(users));
    std::vector<std::vector<std::complex<double>>> symbols(static_cast<std::size_t>(users));
    for (int k = 0; k < users; ++k) {
      auto& m = msgs[static_cast<std::size_t>(k)];
      m.resize(static_cast<std::size_t>(k_info));
      for (auto& b : m) b = msg_rng.bit() ? 1 : 0;
      codewords[static_cast<std::size_t>(k)] = G_.encode(m);
      symbols[static_cast<std::size_t>(k)] = modulate(mod, codewords[static_cast<std::size_t>(k)]);
    }

    const ChannelRealization ch = channel_.realize(chan_rng);
    std::vector<Eigen::VectorXcd> received(static_cast<std::size_t>(uses));
    Eigen::VectorXcd x(users);
    for (int t = 0; t < uses; ++t) {
      for (int k = 0; k < users; ++k) x(k) = symbols[static_cast<std::size_t>(k)][static_cast<std::size_t>(t)];
      received[static_cast<std::size_t>(t)] = apply_channel(ch.C, x, noise_var, noise_rng);
    }

    const IddBlockResult block =
        run_idd_block(H_, mod, rho_, received, ch.C, noise_var, config_.inner_iters,
                      outer, config_.warm_start);

    fo.bit_errors.assign(static_cast<std::size_t>(outer), 0);
    fo.frame_err.assign(static_cast<std::size_t>(outer), 0);
    for (int o = 0; o < outer; ++o) {
      for (int k = 0; k < users; ++k) {
        const auto& hard = block.hard_bits[static_cast<std::size_t>(o)][static_cast<std::size_t>(k)];
        const auto decoded_msg = G_.extract_message(hard);
        for (int b = 0; b < k_info; ++b)
          fo.bit_errors[static_cast<std::size_t>(o)] +=
              decoded_msg[static_cast<std::size_t>(b)] !=
              msgs[static_cast<std::size_t>(k)][static_cast<std::size_t>(b)];
        if (hard != codewords[static_cast<std::size_t>(k)])
          fo.frame_err[static_cast<std::size_t>(o)] = 1;
      }
    }
    double mi = 0.0;
    for (int o = 0; o < block.outer_used; ++o)
      mi += block.mean_inner_iters[static_cast<std::size_t>(o)];
    fo.mean_inner = mi / block.outer_used;
    fo.outer_used = block.outer_used;
    return fo;
  };

  long long frame = 0;
  while (frame < max_frames &&
         detail.frame_errors[static_cast<std::size_t>(outer - 1)] < stop_at_frame_errors) {
    const long long batch =
        std::min<long long>(config_.frame_batch, max_frames - frame);
    std::vector<FrameOutcome> outcomes(static_cast<std::size_t>(batch));
    if (threads <= 1) {
      for (long long b = 0; b < batch; ++b) outcomes[static_cast<std::size_t>(b)] = run_frame(frame + b);
    } else {
      std::atomic<long long> next{0};
      auto worker = [&] {
        for (;;) {
          const long long b = next.fetch_add(1);
          if (b >= batch) return;
          outcomes[static_cast<std::size_t>(b)] = run_frame(frame + b);
        }
      };
      std::vector<std::thread> pool;
      const int count = static_cast<int>(std::min<long long>(threads, batch));
      pool.reserve(static_cast<std::size_t>(count));
      for (int t = 0; t < count; ++t) pool.emplace_back(worker);
      for (auto& th : pool) th.join();
    }
    for (const auto& fo : outcomes) {
      for (int o = 0; o < outer; ++o) {
        detail.bit_errors[static_cast<std::size_t>(o)] += fo.bit_errors[static_cast<std::size_t>(o)];
        detail.frame_errors[static_cast<std::size_t>(o)] += fo.frame_err[static_cast<std::size_t>(o)];
      }
      detail.frame_error_flags.push_back(fo.frame_err[static_cast<std::size_t>(outer - 1)]);
      inner_sum += fo.mean_inner;
      outer_sum += fo.outer_used;
    }
    frame += batch;
  }

  detail.frames = frame;
  detail.bits = frame * static_cast<long long>(users) * k_info;
  detail.mean_inner_iters = frame > 0 ? inner_sum / static_cast<double>(frame) : 0.0;
  detail.mean_outer_iters = frame > 0 ? outer_sum / static_cast<double>(frame) : 0.0;
  return detail;
}

SimResult IddSimulator::run() const {
  const auto start = std::chrono::steady_clock::now();
  SimResult result;
  result.config_hash = config_hash(config_);
  const double rate = static_cast<double>(G_.message_length()) / H_.num_vars();
  const int bps = qpsk_anti_gray().bits_per_symbol;

  for (std::size_t s = 0; s < config_.snr_db.size(); ++s) {
    const double point_db = config_.snr_db[s];
    const double snr_db = config_.snr_is_ebn0 ? ebn0_to_snr_db(point_db, rate, bps) : point_db;
    const double ebn0_db = config_.snr_is_ebn0
                               ? point_db
                               : snr_db - 10.0 * std::log10(rate * bps);
    const PointDetail d = run_point(snr_db, static_cast<int>(s), config_.max_frames,
                                    config_.stop_at_frame_errors);
    SimPoint p;
    p.snr_db = snr_db;
    p.ebn0_db = ebn0_db;
    p.frames = d.frames;
    p.bits = d.bits;
    p.bit_errors = d.bit_errors.back();
    p.frame_errors = d.frame_errors.back();
    p.ber = d.bits > 0 ? static_cast<double>(p.bit_errors) / static_cast<double>(d.bits) : 0.0;
    p.fer = d.frames > 0 ? static_cast<double>(p.frame_errors) / static_cast<double>(d.frames) : 0.0;
    p.mean_inner_iters = d.mean_inner_iters;
    p.mean_outer_iters = d.mean_outer_iters;
    result.points.push_back(p);
  }
  result.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return result;
}

ReweightingVector resolve_reweighting(const std::string& decoder,
                                      const ParityCheckMatrix& H,
                                      const GeneratorMatrix& G,
                                      const IddConfig& config) {
  if (decoder == "bp") return ReweightingVector::ones(H.num_checks());
  if (decoder == "file") return load_rho_json(config.rho_file);

  const DegreeDistribution dd = DegreeDistribution::of(H);
  const double nbar = average_connectivity(dd, H.num_checks(), H.num_vars());
  if (decoder == "urw")
    return ReweightingVector::uniform(H.num_checks(), uniform_fap(config.alpha, nbar));
  if (decoder == "ckar") {
    CkarConfig ck;
    ck.alpha = config.alpha;
    return ckar_assign(count_short_cycles(H, 1), nbar, ck);
  }
  if (decoder == "ekar") {
    const int dmax = config.ekar_dmax > 0 ? config.ekar_dmax
                                          : choose_expansion_depth(H, 20);
    const auto subgraphs = expand_subgraphs(H, dmax);
    EkarConfig ek;
    ek.init_rho = std::min(uniform_fap(config.alpha, nbar), 1.0);
    ek.seed = config.seed;
    const auto results = ekar_optimize(subgraphs, ek, resolve_threads(config.threads));
    std::vector<ReweightingVector> candidates;
    candidates.reserve(results.size());
    for (std::size_t t = 0; t < results.size(); ++t)
      candidates.push_back(lift_to_global(subgraphs[t], results[t].rho, H.num_checks()));
    FapEvalConfig ev;
    ev.seed = config.seed;
    return select_best_fap(H, G, candidates, ev);
  }
  throw ConfigError("unknown decoder variant: " + decoder);
}

SimResult monte_carlo(const IddConfig& config) {
  config.validate();
  ParityCheckMatrix H = config.alist_path.empty()
                            ? peg_construct(config.code_n, config.code_m,
                                            config.code_dv, config.code_seed)
                            : load_alist(config.alist_path);
  GeneratorMatrix G = GeneratorMatrix::from_parity_check(H);
  ReweightingVector rho = resolve_reweighting(config.decoder, H, G, config);
  IddSimulator sim(std::move(H), std::move(G), std::move(rho), config);
  return sim.run();
}

int resolve_threads(int configured) {
  if (configured > 0) return configured;
  if (const char* env = std::getenv("MULINK_THREADS")) {
    const int v = std::atoi(env);
    if (v > 0) return v;
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw > 0 ? static_cast<int>(hw) : 1;
}

}  // namespace mulink
