#pragma once

#include <filesystem>
#include <iosfwd>

#include "mulink/parity_check_matrix.hpp"

namespace mulink {

// Text alist format:
//   line 1: N M
//   line 2: max variable degree, max check degree
//   line 3: the N variable degrees
//   line 4: the M check degrees
//   then N lines of 1-based check indices per variable, zero-padded to the
//   max variable degree, then M lines of 1-based variable indices per check,
//   zero-padded to the max check degree.
// save followed by load reproduces the matrix bit-exactly.

ParityCheckMatrix load_alist(std::istream& in);
ParityCheckMatrix load_alist(const std::filesystem::path& path);

void save_alist(const ParityCheckMatrix& H, std::ostream& out);
void save_alist(const ParityCheckMatrix& H, const std::filesystem::path& path);

}  // namespace mulink
