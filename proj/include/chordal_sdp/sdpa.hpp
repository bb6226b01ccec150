#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "chordal_sdp/problem.hpp"

namespace chordal_sdp {

// One "matno blkno i j value" line of a sparse SDPA file. Indices are
// 1-based as in the file and normalized so that i <= j.
struct SdpaEntry {
  int matno = 0;
  int block = 0;
  int i = 0;
  int j = 0;
  double value = 0.0;

  friend bool operator==(const SdpaEntry&, const SdpaEntry&) = default;
};

// Sparse SDPA data:  min c^T x  s.t.  sum_j x_j F_j - F_0 psd.
struct SdpaFile {
  int m = 0;
  std::vector<int> block_sizes;  // negative = diagonal block
  std::vector<double> c;
  std::vector<SdpaEntry> entries;

  int num_blocks() const noexcept { return static_cast<int>(block_sizes.size()); }
};

// Throws ParseError carrying the offending line number, with codes
// kParseError, kIndexOutOfBlock or kDuplicateEntry.
SdpaFile parse_sdpa(std::istream& in);
SdpaFile parse_sdpa(std::string_view text);
SdpaFile read_sdpa(const std::filesystem::path& path);

// Canonical form: header, then entries sorted by (matno, block, i, j), values
// in shortest round-trip decimal notation.
void write_sdpa(std::ostream& out, const SdpaFile& file);
std::string format_sdpa(const SdpaFile& file);

// Maps SDPA data onto the standard dual form max <b,y> s.t. sum y_j A_j + Z = C
// with A_j = -F_j, C = -F_0 and b = -c; blocks are concatenated along the
// diagonal into a single cone. The reported <b,y> is the negated SDPA
// objective.
SdpData to_sdp_data(const SdpaFile& file);

// Inverse mapping; uses data.block_sizes (or one block of size n).
SdpaFile to_sdpa(const SdpData& data);

// Shortest decimal representation that parses back to the same double.
std::string format_double(double value);

}  // namespace chordal_sdp
