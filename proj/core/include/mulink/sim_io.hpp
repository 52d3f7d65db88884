#pragma once

#include <filesystem>
#include <iosfwd>
#include <map>
#include <stdexcept>
#include <string>

#include "mulink/decoder.hpp"
#include "mulink/exit_chart.hpp"
#include "mulink/graph_analysis.hpp"
#include "mulink/idd.hpp"

namespace mulink {

// Configuration problems map to CLI exit code 2; other failures to 3.
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Flat key = value file; blank lines and # comments ignored.
std::map<std::string, std::string> parse_kv_file(const std::filesystem::path& path);

// Applies file keys onto a default-constructed config. Unknown keys and
// unparsable values raise ConfigError.
IddConfig idd_config_from_kv(const std::map<std::string, std::string>& kv);

// FNV-1a hash of the canonical config serialization, as fixed-width hex.
std::string config_hash(const IddConfig& config);
std::string canonical_config_string(const IddConfig& config);

// FNV-1a hash of the alist serialization of H; identifies a code in
// provenance metadata.
std::string code_hash(const ParityCheckMatrix& H);

// CSV with header snr_db,ber,fer,bits,frames,mean_inner_iters,mean_outer_iters
void write_sim_csv(std::ostream& out, const SimResult& result);

// Full provenance record.
void write_sim_json(std::ostream& out, const SimResult& result, const IddConfig& config);

// Two columns: i_a,i_e.
void write_exit_csv(std::ostream& out, const ExitCurve& curve);

// Reweighting vectors persist as JSON with provenance metadata.
void save_rho_json(const std::filesystem::path& path, const ReweightingVector& rho,
                   const std::map<std::string, std::string>& metadata);
ReweightingVector load_rho_json(const std::filesystem::path& path);

// Analysis products.
void write_census_json(std::ostream& out, const CycleCensus& census);
void write_subgraphs_json(std::ostream& out, const std::vector<Subgraph>& subgraphs);

}  // namespace mulink
