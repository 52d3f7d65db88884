// Command line front end: code construction, Tanner-graph analysis, FAP
// optimization, link simulation and EXIT chart generation.

#include <CLI11.hpp>

#include <fstream>
#include <iostream>

#include "mulink/alist.hpp"
#include "mulink/exit_chart.hpp"
#include "mulink/fap.hpp"
#include "mulink/graph_analysis.hpp"
#include "mulink/idd.hpp"
#include "mulink/peg.hpp"
#include "mulink/sim_io.hpp"

namespace {

using namespace mulink;

std::ostream& open_or_stdout(const std::string& path, std::ofstream& file) {
  if (path.empty()) return std::cout;
  file.open(path);
  if (!file) throw std::runtime_error("cannot open " + path + " for writing");
  return file;
}

ParityCheckMatrix load_or_build(const std::string& alist, int n, int m, int dv,
                                std::uint64_t seed) {
  if (!alist.empty()) return load_alist(alist);
  return peg_construct(n, m, dv, seed);
}

int run_build_code(const std::string& out, int n, int m, int dv, std::uint64_t seed) {
  const ParityCheckMatrix H = peg_construct(n, m, dv, seed);
  save_alist(H, out);
  std::cout << "wrote " << out << ": N=" << H.num_vars() << " M=" << H.num_checks()
            << " girth=" << girth(H) << " code_hash=" << code_hash(H) << '\n';
  return 0;
}

int run_analyze(const std::string& alist, bool cycles, bool expand, int dmax,
                const std::string& out) {
  const ParityCheckMatrix H = load_alist(alist);
  std::ofstream file;
  std::ostream& os = open_or_stdout(out, file);
  if (!cycles && !expand)
    throw ConfigError("analyze: pass --cycles and/or --expand");
  if (cycles) write_census_json(os, count_short_cycles(H, 3));
  if (expand) {
    const int depth = dmax > 0 ? dmax : choose_expansion_depth(H, 20);
    write_subgraphs_json(os, expand_subgraphs(H, depth));
  }
  return 0;
}

int run_optimize_faps(const std::string& alist, const std::string& method,
                      double alpha, int dmax, std::uint64_t seed,
                      const std::string& out) {
  const ParityCheckMatrix H = load_alist(alist);
  const GeneratorMatrix G = GeneratorMatrix::from_parity_check(H);
  IddConfig cfg;
  cfg.alpha = alpha;
  cfg.ekar_dmax = dmax;
  cfg.seed = seed;
  const ReweightingVector rho = resolve_reweighting(method, H, G, cfg);
  save_rho_json(out, rho,
                {{"method", method},
                 {"alpha", std::to_string(alpha)},
                 {"dmax", std::to_string(dmax)},
                 {"seed", std::to_string(seed)},
                 {"code_hash", code_hash(H)}});
  std::cout << "wrote " << out << " (" << method << ", M=" << H.num_checks() << ")\n";
  return 0;
}

int run_simulate(const std::string& config_path, const std::string& out_csv,
                 const std::string& out_json) {
  IddConfig cfg = idd_config_from_kv(parse_kv_file(config_path));
  if (!out_csv.empty()) cfg.out_csv = out_csv;
  if (!out_json.empty()) cfg.out_json = out_json;
  cfg.validate();

  const SimResult result = monte_carlo(cfg);
  {
    std::ofstream file;
    std::ostream& os = cfg.out_csv.empty() ? std::cout : file;
    if (!cfg.out_csv.empty()) {
      file.open(cfg.out_csv);
      if (!file) throw std::runtime_error("cannot open " + cfg.out_csv);
    }
    write_sim_csv(os, result);
  }
  if (!cfg.out_json.empty()) {
    std::ofstream jf(cfg.out_json);
    if (!jf) throw std::runtime_error("cannot open " + cfg.out_json);
    write_sim_json(jf, result, cfg);
  }
  return 0;
}

int run_exit_chart(const std::string& component, double ebn0, const std::string& alist,
                   int n, int m, int dv, const std::string& method,
                   const std::string& rho_file, int inner, int users, int rx,
                   double grid_step, int min_bits, std::uint64_t seed,
                   const std::string& out) {
  std::vector<double> grid;
  for (double ia = 0.0; ia <= 1.0 + 1e-9; ia += grid_step) grid.push_back(std::min(ia, 1.0));

  ExitCurve curve;
  if (component == "decoder") {
    const ParityCheckMatrix H = load_or_build(alist, n, m, dv, 0);
    const GeneratorMatrix G = GeneratorMatrix::from_parity_check(H);
    ReweightingVector rho = ReweightingVector::ones(H.num_checks());
    if (!rho_file.empty()) {
      rho = load_rho_json(rho_file);
    } else if (method != "bp") {
      IddConfig cfg;
      rho = resolve_reweighting(method, H, G, cfg);
    }
    curve = exit_decoder_curve(H, G, rho, inner, grid, min_bits, seed);
  } else if (component == "detector") {
    DetectorExitConfig cfg;
    cfg.num_users = users;
    cfg.num_rx = rx;
    curve = exit_detector_curve(cfg, ebn0, grid, min_bits, seed);
  } else {
    throw ConfigError("exit-chart: component must be decoder or detector");
  }

  std::ofstream file;
  std::ostream& os = open_or_stdout(out, file);
  write_exit_csv(os, curve);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"LDPC-coded multiuser MIMO uplink simulator with reweighted BP decoding"};
  app.require_subcommand(1);

  // build-code
  auto* build = app.add_subcommand("build-code", "Construct a PEG code and write it as alist");
  int n = 1000, m = 500, dv = 3;
  std::uint64_t seed = 0;
  std::string out;
  build->add_option("--n", n, "variable nodes (block length)");
  build->add_option("--m", m, "check nodes");
  build->add_option("--dv", dv, "variable degree");
  build->add_option("--seed", seed, "construction seed (recorded; build is deterministic)");
  build->add_option("--out", out, "output alist path")->required();

  // analyze
  auto* analyze = app.add_subcommand("analyze", "Cycle census and subgraph expansion");
  std::string alist;
  bool cycles = false, expand = false;
  int dmax = 0;
  std::string analyze_out;
  analyze->add_option("--alist", alist, "code to analyze")->required();
  analyze->add_flag("--cycles", cycles, "count short cycles per check node");
  analyze->add_flag("--expand", expand, "expand into subgraphs");
  analyze->add_option("--dmax", dmax, "expansion depth (0: depth whose subgraph count is closest to 20)");
  analyze->add_option("--out", analyze_out, "output JSON path (default stdout)");

  // optimize-faps
  auto* opt = app.add_subcommand("optimize-faps", "Produce a reweighting vector");
  std::string method = "ckar", opt_alist, opt_out = "rho.json";
  double alpha = 0.85;
  int opt_dmax = 0;
  std::uint64_t opt_seed = 1;
  opt->add_option("--alist", opt_alist, "code to optimize for")->required();
  opt->add_option("--method", method, "ckar | ekar | urw")
      ->check(CLI::IsMember({"ckar", "ekar", "urw"}));
  opt->add_option("--alpha", alpha, "uniform FAP parameter in (0,1)");
  opt->add_option("--dmax", opt_dmax, "EKAR expansion depth (0: auto)");
  opt->add_option("--seed", opt_seed, "EKAR surrogate / scoring seed");
  opt->add_option("--out", opt_out, "output rho JSON path");

  // simulate
  auto* sim = app.add_subcommand("simulate", "Monte Carlo BER/FER sweep");
  std::string config_path, sim_csv, sim_json;
  sim->add_option("--config", config_path, "key=value configuration file")->required();
  sim->add_option("--out-csv", sim_csv, "override out_csv");
  sim->add_option("--out-json", sim_json, "override out_json");

  // exit-chart
  auto* exit_cmd = app.add_subcommand("exit-chart", "Extrinsic information transfer data");
  std::string component = "decoder", ex_alist, ex_method = "bp", ex_rho, ex_out;
  double ebn0 = 4.0, grid_step = 0.1;
  int ex_n = 1000, ex_m = 500, ex_dv = 3, inner = 30, ex_users = 4, ex_rx = 4;
  int min_bits = 100000;
  std::uint64_t ex_seed = 1;
  exit_cmd->add_option("--component", component, "decoder | detector")->required();
  exit_cmd->add_option("--ebn0", ebn0, "Eb/N0 in dB (detector curve)");
  exit_cmd->add_option("--alist", ex_alist, "code (decoder curve); built if omitted");
  exit_cmd->add_option("--n", ex_n, "code length when building");
  exit_cmd->add_option("--m", ex_m, "check count when building");
  exit_cmd->add_option("--dv", ex_dv, "variable degree when building");
  exit_cmd->add_option("--method", ex_method, "bp | urw | ckar | ekar");
  exit_cmd->add_option("--rho-file", ex_rho, "reweighting vector JSON");
  exit_cmd->add_option("--inner", inner, "decoder iterations");
  exit_cmd->add_option("--users", ex_users, "users (detector curve)");
  exit_cmd->add_option("--rx", ex_rx, "receive antennas (detector curve)");
  exit_cmd->add_option("--grid-step", grid_step, "I_A grid step");
  exit_cmd->add_option("--min-bits", min_bits, "bits per grid point");
  exit_cmd->add_option("--seed", ex_seed, "measurement seed");
  exit_cmd->add_option("--out", ex_out, "output CSV path (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 2;
  }

  try {
    if (build->parsed()) return run_build_code(out, n, m, dv, seed);
    if (analyze->parsed()) return run_analyze(alist, cycles, expand, dmax, analyze_out);
    if (opt->parsed())
      return run_optimize_faps(opt_alist, method, alpha, opt_dmax, opt_seed, opt_out);
    if (sim->parsed()) return run_simulate(config_path, sim_csv, sim_json);
    if (exit_cmd->parsed())
      return run_exit_chart(component, ebn0, ex_alist, ex_n, ex_m, ex_dv, ex_method,
                            ex_rho, inner, ex_users, ex_rx, grid_step, min_bits,
                            ex_seed, ex_out);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 3;
  }
  return 0;
}
