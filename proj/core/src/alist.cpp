#include "mulink/alist.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>

namespace mulink {

namespace {

long read_int(std::istream& in, const char* what) {
  long v;
  if (!(in >> v)) throw std::runtime_error(std::string("alist: missing or malformed ") + what);
  return v;
}

}  // namespace

ParityCheckMatrix load_alist(std::istream& in) {
  const long n = read_int(in, "N in header");
  const long m = read_int(in, "M in header");
  if (n < 1 || m < 1) throw std::runtime_error("alist: header dimensions must be positive");

  const long max_dv = read_int(in, "max variable degree");
  const long max_dc = read_int(in, "max check degree");
  if (max_dv < 1 || max_dc < 1) throw std::runtime_error("alist: max degrees must be positive");

  std::vector<long> var_deg(static_cast<std::size_t>(n));
  for (auto& d : var_deg) {
    d = read_int(in, "variable degree");
    if (d < 1 || d > max_dv) throw std::runtime_error("alist: variable degree out of range");
  }
  std::vector<long> chk_deg(static_cast<std::size_t>(m));
  for (auto& d : chk_deg) {
    d = read_int(in, "check degree");
    if (d < 1 || d > max_dc) throw std::runtime_error("alist: check degree out of range");
  }

  // variable lists: check indices, 1-based, zero padded
  std::vector<std::vector<int>> var_lists(static_cast<std::size_t>(n));
  for (long j = 0; j < n; ++j) {
    auto& lst = var_lists[static_cast<std::size_t>(j)];
    for (long k = 0; k < max_dv; ++k) {
      const long idx = read_int(in, "variable adjacency entry");
      if (k < var_deg[static_cast<std::size_t>(j)]) {
        if (idx < 1 || idx > m) throw std::runtime_error("alist: check index out of range");
        lst.push_back(static_cast<int>(idx - 1));
      } else if (idx != 0) {
        throw std::runtime_error("alist: expected zero padding in variable list");
      }
    }
  }

  // check lists
  std::vector<std::vector<int>> chk_lists(static_cast<std::size_t>(m));
  for (long i = 0; i < m; ++i) {
    auto& lst = chk_lists[static_cast<std::size_t>(i)];
    for (long k = 0; k < max_dc; ++k) {
      const long idx = read_int(in, "check adjacency entry");
      if (k < chk_deg[static_cast<std::size_t>(i)]) {
        if (idx < 1 || idx > n) throw std::runtime_error("alist: variable index out of range");
        lst.push_back(static_cast<int>(idx - 1));
      } else if (idx != 0) {
        throw std::runtime_error("alist: expected zero padding in check list");
      }
    }
  }

  ParityCheckMatrix H(static_cast<int>(m), static_cast<int>(n), std::move(chk_lists));

  // the two adjacency blocks must describe the same matrix
  for (long j = 0; j < n; ++j) {
    auto sorted = var_lists[static_cast<std::size_t>(j)];
    std::sort(sorted.begin(), sorted.end());
    if (sorted != H.var_neighbors(static_cast<int>(j)))
      throw std::runtime_error("alist: variable and check adjacency lists are inconsistent");
  }
  return H;
}

ParityCheckMatrix load_alist(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("alist: cannot open " + path.string());
  return load_alist(in);
}

void save_alist(const ParityCheckMatrix& H, std::ostream& out) {
  const int n = H.num_vars();
  const int m = H.num_checks();
  const int max_dv = H.max_var_degree();
  const int max_dc = H.max_check_degree();

  out << n << ' ' << m << '\n';
  out << max_dv << ' ' << max_dc << '\n';
  for (int j = 0; j < n; ++j) out << H.var_degree(j) << (j + 1 < n ? ' ' : '\n');
  for (int i = 0; i < m; ++i) out << H.check_degree(i) << (i + 1 < m ? ' ' : '\n');

  for (int j = 0; j < n; ++j) {
    const auto& lst = H.var_neighbors(j);
    for (int k = 0; k < max_dv; ++k) {
      const int v = k < static_cast<int>(lst.size()) ? lst[static_cast<std::size_t>(k)] + 1 : 0;
      out << v << (k + 1 < max_dv ? ' ' : '\n');
    }
  }
  for (int i = 0; i < m; ++i) {
    const auto& lst = H.check_neighbors(i);
    for (int k = 0; k < max_dc; ++k) {
      const int v = k < static_cast<int>(lst.size()) ? lst[static_cast<std::size_t>(k)] + 1 : 0;
      out << v << (k + 1 < max_dc ? ' ' : '\n');
    }
  }
}

void save_alist(const ParityCheckMatrix& H, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("alist: cannot open " + path.string() + " for writing");
  save_alist(H, out);
  if (!out) throw std::runtime_error("alist: write failed for " + path.string());
}

}  // namespace mulink
