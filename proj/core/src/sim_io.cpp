#include "mulink/sim_io.hpp"

#include <json.hpp>

#include <cinttypes>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "mulink/alist.hpp"

namespace mulink {

std::map<std::string, std::string> parse_kv_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file: " + path.string());
  std::map<std::string, std::string> kv;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    const auto strip = [](std::string s) {
      const auto b = s.find_first_not_of(" \t\r\n");
      if (b == std::string::npos) return std::string();
      const auto e = s.find_last_not_of(" \t\r\n");
      return s.substr(b, e - b + 1);
    };
    if (strip(line).empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError(path.string() + ":" + std::to_string(lineno) + ": expected key = value");
    const std::string key = strip(line.substr(0, eq));
    const std::string value = strip(line.substr(eq + 1));
    if (key.empty()) throw ConfigError(path.string() + ":" + std::to_string(lineno) + ": empty key");
    kv[key] = value;
  }
  return kv;
}

namespace {

double parse_double(const std::string& key, const std::string& v) {
  try {
    std::size_t pos = 0;
    const double d = std::stod(v, &pos);
    if (pos != v.size()) throw std::invalid_argument(v);
    return d;
  } catch (const std::exception&) {
    throw ConfigError("config: bad numeric value for " + key + ": '" + v + "'");
  }
}

long long parse_int(const std::string& key, const std::string& v) {
  try {
    std::size_t pos = 0;
    const long long i = std::stoll(v, &pos);
    if (pos != v.size()) throw std::invalid_argument(v);
    return i;
  } catch (const std::exception&) {
    throw ConfigError("config: bad integer value for " + key + ": '" + v + "'");
  }
}

bool parse_bool(const std::string& key, const std::string& v) {
  if (v == "1" || v == "true" || v == "yes" || v == "on") return true;
  if (v == "0" || v == "false" || v == "no" || v == "off") return false;
  throw ConfigError("config: bad boolean value for " + key + ": '" + v + "'");
}

std::vector<double> parse_double_list(const std::string& key, const std::string& v) {
  std::vector<double> out;
  std::string item;
  std::stringstream ss(v);
  while (std::getline(ss, item, ',')) out.push_back(parse_double(key, item));
  if (out.empty()) throw ConfigError("config: empty list for " + key);
  return out;
}

}  // namespace

IddConfig idd_config_from_kv(const std::map<std::string, std::string>& kv) {
  IddConfig c;
  for (const auto& [key, value] : kv) {
    if (key == "users") c.num_users = static_cast<int>(parse_int(key, value));
    else if (key == "rx_antennas") c.num_rx = static_cast<int>(parse_int(key, value));
    else if (key == "scenario") c.scenario = static_cast<int>(parse_int(key, value));
    else if (key == "correlation") c.correlation = parse_double(key, value);
    else if (key == "shadow_db") c.shadow_db = parse_double(key, value);
    else if (key == "path_loss_min") c.path_loss_min = parse_double(key, value);
    else if (key == "path_loss_max") c.path_loss_max = parse_double(key, value);
    else if (key == "code_n") c.code_n = static_cast<int>(parse_int(key, value));
    else if (key == "code_m") c.code_m = static_cast<int>(parse_int(key, value));
    else if (key == "code_dv") c.code_dv = static_cast<int>(parse_int(key, value));
    else if (key == "code_seed") c.code_seed = static_cast<std::uint64_t>(parse_int(key, value));
    else if (key == "alist") c.alist_path = value;
    else if (key == "decoder") c.decoder = value;
    else if (key == "rho_file") c.rho_file = value;
    else if (key == "alpha") c.alpha = parse_double(key, value);
    else if (key == "ekar_dmax") c.ekar_dmax = static_cast<int>(parse_int(key, value));
    else if (key == "snr_db") { c.snr_db = parse_double_list(key, value); c.snr_is_ebn0 = false; }
    else if (key == "ebn0_db") { c.snr_db = parse_double_list(key, value); c.snr_is_ebn0 = true; }
    else if (key == "inner_iters") c.inner_iters = static_cast<int>(parse_int(key, value));
    else if (key == "outer_iters") c.outer_iters = static_cast<int>(parse_int(key, value));
    else if (key == "warm_start") c.warm_start = parse_bool(key, value);
    else if (key == "max_frames") c.max_frames = parse_int(key, value);
    else if (key == "stop_at_frame_errors") c.stop_at_frame_errors = parse_int(key, value);
    else if (key == "frame_batch") c.frame_batch = static_cast<int>(parse_int(key, value));
    else if (key == "seed") c.seed = static_cast<std::uint64_t>(parse_int(key, value));
    else if (key == "threads") c.threads = static_cast<int>(parse_int(key, value));
    else if (key == "out_csv") c.out_csv = value;
    else if (key == "out_json") c.out_json = value;
    else throw ConfigError("config: unknown key '" + key + "'");
  }
  return c;
}

std::string canonical_config_string(const IddConfig& c) {
  std::ostringstream os;
  os << "users=" << c.num_users << ";rx=" << c.num_rx << ";scenario=" << c.scenario
     << ";corr=" << c.correlation << ";shadow=" << c.shadow_db
     << ";lp=" << c.path_loss_min << ',' << c.path_loss_max
     << ";code=" << c.code_n << ',' << c.code_m << ',' << c.code_dv << ',' << c.code_seed
     << ";alist=" << c.alist_path << ";decoder=" << c.decoder << ";rho=" << c.rho_file
     << ";alpha=" << c.alpha << ";dmax=" << c.ekar_dmax << ";snr=";
  for (double s : c.snr_db) os << s << ',';
  os << ";ebn0=" << c.snr_is_ebn0 << ";inner=" << c.inner_iters
     << ";outer=" << c.outer_iters << ";warm=" << c.warm_start
     << ";frames=" << c.max_frames << ";stop=" << c.stop_at_frame_errors
     << ";batch=" << c.frame_batch << ";seed=" << c.seed;
  return os.str();
}

namespace {

std::string fnv1a_hex(const std::string& s) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char ch : s) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016" PRIx64, h);
  return buf;
}

}  // namespace

std::string config_hash(const IddConfig& c) {
  return fnv1a_hex(canonical_config_string(c));
}

std::string code_hash(const ParityCheckMatrix& H) {
  std::ostringstream os;
  save_alist(H, os);
  return fnv1a_hex(os.str());
}

void write_sim_csv(std::ostream& out, const SimResult& result) {
  out << "snr_db,ber,fer,bits,frames,mean_inner_iters,mean_outer_iters\n";
  char line[256];
  for (const auto& p : result.points) {
    std::snprintf(line, sizeof line, "%.6g,%.10e,%.10e,%lld,%lld,%.6f,%.6f\n",
                  p.snr_db, p.ber, p.fer, p.bits, p.frames, p.mean_inner_iters,
                  p.mean_outer_iters);
    out << line;
  }
}

void write_sim_json(std::ostream& out, const SimResult& result, const IddConfig& c) {
  nlohmann::ordered_json j;
  j["config"] = {
      {"users", c.num_users}, {"rx_antennas", c.num_rx}, {"scenario", c.scenario},
      {"correlation", c.correlation}, {"shadow_db", c.shadow_db},
      {"path_loss_min", c.path_loss_min}, {"path_loss_max", c.path_loss_max},
      {"code_n", c.code_n}, {"code_m", c.code_m}, {"code_dv", c.code_dv},
      {"code_seed", c.code_seed}, {"alist", c.alist_path}, {"decoder", c.decoder},
      {"rho_file", c.rho_file}, {"alpha", c.alpha}, {"ekar_dmax", c.ekar_dmax},
      {"points_db", c.snr_db}, {"points_are_ebn0", c.snr_is_ebn0},
      {"inner_iters", c.inner_iters}, {"outer_iters", c.outer_iters},
      {"warm_start", c.warm_start}, {"max_frames", c.max_frames},
      {"stop_at_frame_errors", c.stop_at_frame_errors}, {"frame_batch", c.frame_batch},
      {"seed", c.seed},
  };
  j["config_hash"] = result.config_hash;
  j["snr_definition"] = "10*log10(K*sigma_x^2/sigma_n^2), N_t read as K";
  j["ber_definition"] = "information-bit errors aggregated over all users";
  j["wall_seconds"] = result.wall_seconds;
  j["points"] = nlohmann::ordered_json::array();
  for (const auto& p : result.points) {
    j["points"].push_back({
        {"snr_db", p.snr_db}, {"ebn0_db", p.ebn0_db}, {"frames", p.frames},
        {"frame_errors", p.frame_errors}, {"bits", p.bits}, {"bit_errors", p.bit_errors},
        {"ber", p.ber}, {"fer", p.fer}, {"mean_inner_iters", p.mean_inner_iters},
        {"mean_outer_iters", p.mean_outer_iters},
    });
  }
  out << j.dump(2) << '\n';
}

void write_exit_csv(std::ostream& out, const ExitCurve& curve) {
  out << "i_a,i_e\n";
  char line[64];
  for (std::size_t i = 0; i < curve.i_a.size(); ++i) {
    std::snprintf(line, sizeof line, "%.6f,%.6f\n", curve.i_a[i], curve.i_e[i]);
    out << line;
  }
}

void save_rho_json(const std::filesystem::path& path, const ReweightingVector& rho,
                   const std::map<std::string, std::string>& metadata) {
  nlohmann::ordered_json j;
  for (const auto& [k, v] : metadata) j["meta"][k] = v;
  j["rho"] = rho.rho;
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
  out << j.dump(2) << '\n';
  if (!out) throw std::runtime_error("write failed: " + path.string());
}

ReweightingVector load_rho_json(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open rho file: " + path.string());
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw std::runtime_error("bad rho file " + path.string() + ": " + e.what());
  }
  if (!j.contains("rho") || !j["rho"].is_array())
    throw std::runtime_error("rho file " + path.string() + " lacks a rho array");
  ReweightingVector rv;
  rv.rho = j["rho"].get<std::vector<double>>();
  rv.validate();
  return rv;
}

namespace {

nlohmann::ordered_json girth_json(int g) {
  if (g == kInfiniteGirth) return nullptr;
  return g;
}

}  // namespace

void write_census_json(std::ostream& out, const CycleCensus& census) {
  nlohmann::ordered_json j;
  j["girth"] = girth_json(census.girth);
  j["mu_g"] = census.mu_g;
  j["lengths"] = nlohmann::ordered_json::array();
  for (std::size_t k = 0; k < census.lengths.size(); ++k) {
    j["lengths"].push_back({
        {"cycle_length", girth_json(census.lengths[k])},
        {"total", census.total[k]},
        {"per_check", census.per_check[k]},
    });
  }
  out << j.dump(2) << '\n';
}

void write_subgraphs_json(std::ostream& out, const std::vector<Subgraph>& subgraphs) {
  nlohmann::ordered_json j;
  j["count"] = subgraphs.size();
  j["subgraphs"] = nlohmann::ordered_json::array();
  for (const auto& s : subgraphs) {
    nlohmann::ordered_json e;
    e["id"] = s.id;
    e["local_girth"] = girth_json(s.local_girth);
    e["check_nodes"] = s.check_nodes;
    e["var_nodes"] = s.var_nodes;
    auto edges = nlohmann::ordered_json::array();
    for (const auto& [c, v] : s.edges) edges.push_back({c, v});
    e["edges"] = std::move(edges);
    j["subgraphs"].push_back(std::move(e));
  }
  out << j.dump(2) << '\n';
}

}  // namespace mulink
