#include "chordal_sdp/sdpa.hpp"

#include <algorithm>
#include <charconv>
#include <cstdlib>
#include <fstream>
#include <istream>
#include <ostream>
#include <set>
#include <sstream>
#include <tuple>

#include "chordal_sdp/error.hpp"

namespace chordal_sdp {

namespace {

bool is_separator(char ch) {
  return ch == ' ' || ch == '\t' || ch == '\r' || ch == ',' || ch == '{' || ch == '}' ||
         ch == '(' || ch == ')';
}

std::vector<std::string_view> tokenize(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && is_separator(line[i])) ++i;
    const std::size_t start = i;
    while (i < line.size() && !is_separator(line[i])) ++i;
    if (i > start) out.push_back(line.substr(start, i - start));
  }
  return out;
}

bool parse_int(std::string_view tok, int& out) {
  if (!tok.empty() && tok.front() == '+') tok.remove_prefix(1);
  const auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), out);
  return ec == std::errc() && ptr == tok.data() + tok.size();
}

bool parse_double(std::string_view tok, double& out) {
  if (!tok.empty() && tok.front() == '+') tok.remove_prefix(1);
  const auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), out);
  return ec == std::errc() && ptr == tok.data() + tok.size();
}

// Reads the input line by line, tracking line numbers and skipping the
// leading comment block.
class LineReader {
 public:
  explicit LineReader(std::istream& in) : in_(in) {}

  bool next(std::string& line) {
    while (std::getline(in_, line)) {
      ++number_;
      if (tokenize(line).empty()) continue;
      return true;
    }
    return false;
  }

  int number() const noexcept { return number_; }

 private:
  std::istream& in_;
  int number_ = 0;
};

[[noreturn]] void fail(int line, const std::string& what, ErrorCode code = ErrorCode::kParseError) {
  throw ParseError(code, line, what);
}

bool is_comment(std::string_view line) {
  const auto pos = line.find_first_not_of(" \t");
  return pos != std::string_view::npos && (line[pos] == '"' || line[pos] == '*');
}

// Collects `count` numeric tokens that may span several lines; trailing
// tokens on the last line are ignored.
template <typename T, typename Parse>
std::vector<T> read_values(LineReader& reader, std::string& line, std::size_t count,
                           const char* what, Parse parse) {
  std::vector<T> values;
  values.reserve(count);
  while (values.size() < count) {
    if (!reader.next(line)) fail(reader.number(), std::string("unexpected end of input in ") + what);
    for (auto tok : tokenize(line)) {
      if (values.size() == count) break;
      T v{};
      if (!parse(tok, v)) {
        fail(reader.number(), std::string("invalid number '") + std::string(tok) + "' in " + what);
      }
      values.push_back(v);
    }
  }
  return values;
}

int read_leading_int(LineReader& reader, std::string& line, const char* what) {
  if (!reader.next(line)) fail(reader.number(), std::string("missing ") + what);
  const auto toks = tokenize(line);
  int v = 0;
  if (!parse_int(toks.front(), v)) fail(reader.number(), std::string("invalid ") + what);
  return v;
}

}  // namespace

SdpaFile parse_sdpa(std::istream& in) {
  LineReader reader(in);
  std::string line;
  SdpaFile file;

  // Comment lines may only precede the header.
  do {
    if (!reader.next(line)) fail(reader.number(), "empty input");
  } while (is_comment(line));
  {
    const auto toks = tokenize(line);
    if (!parse_int(toks.front(), file.m) || file.m < 0) {
      fail(reader.number(), "invalid number of constraints");
    }
  }
  const int nblocks = read_leading_int(reader, line, "number of blocks");
  if (nblocks < 1) fail(reader.number(), "number of blocks must be positive");

  file.block_sizes = read_values<int>(reader, line, static_cast<std::size_t>(nblocks),
                                      "block sizes", parse_int);
  for (int s : file.block_sizes) {
    if (s == 0) fail(reader.number(), "block size must be nonzero");
  }
  file.c = read_values<double>(reader, line, static_cast<std::size_t>(file.m),
                               "objective vector", parse_double);

  std::set<std::tuple<int, int, int, int>> seen;
  while (reader.next(line)) {
    const int at = reader.number();
    const auto toks = tokenize(line);
    if (toks.size() < 5) fail(at, "entry line needs 5 fields: matno blkno i j value");
    SdpaEntry e;
    if (!parse_int(toks[0], e.matno) || !parse_int(toks[1], e.block) ||
        !parse_int(toks[2], e.i) || !parse_int(toks[3], e.j) ||
        !parse_double(toks[4], e.value)) {
      fail(at, "malformed entry line");
    }
    if (e.matno < 0 || e.matno > file.m) {
      fail(at, "matrix number " + std::to_string(e.matno) + " outside 0.." + std::to_string(file.m));
    }
    if (e.block < 1 || e.block > nblocks) {
      fail(at, "block number " + std::to_string(e.block) + " outside 1.." + std::to_string(nblocks),
           ErrorCode::kIndexOutOfBlock);
    }
    const int size = file.block_sizes[e.block - 1];
    const int side = std::abs(size);
    if (e.i < 1 || e.i > side || e.j < 1 || e.j > side) {
      fail(at, "index (" + std::to_string(e.i) + "," + std::to_string(e.j) + ") outside block " +
                   std::to_string(e.block) + " of size " + std::to_string(side),
           ErrorCode::kIndexOutOfBlock);
    }
    if (size < 0 && e.i != e.j) {
      fail(at, "off-diagonal entry in diagonal block " + std::to_string(e.block),
           ErrorCode::kIndexOutOfBlock);
    }
    if (e.i > e.j) std::swap(e.i, e.j);
    if (!seen.emplace(e.matno, e.block, e.i, e.j).second) {
      fail(at, "duplicate entry for matrix " + std::to_string(e.matno) + " block " +
                   std::to_string(e.block) + " (" + std::to_string(e.i) + "," +
                   std::to_string(e.j) + ")",
           ErrorCode::kDuplicateEntry);
    }
    file.entries.push_back(e);
  }
  return file;
}

SdpaFile parse_sdpa(std::string_view text) {
  std::istringstream in{std::string(text)};
  return parse_sdpa(in);
}

SdpaFile read_sdpa(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw Error(ErrorCode::kInvalidArgument, "cannot open '" + path.string() + "'");
  }
  return parse_sdpa(in);
}

std::string format_double(double value) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), value);
  return std::string(buf, ptr);
}

void write_sdpa(std::ostream& out, const SdpaFile& file) {
  out << file.m << '\n' << file.num_blocks() << '\n';
  for (std::size_t k = 0; k < file.block_sizes.size(); ++k) {
    out << (k ? " " : "") << file.block_sizes[k];
  }
  out << '\n';
  for (std::size_t k = 0; k < file.c.size(); ++k) {
    out << (k ? " " : "") << format_double(file.c[k]);
  }
  out << '\n';

  std::vector<SdpaEntry> sorted = file.entries;
  std::sort(sorted.begin(), sorted.end(), [](const SdpaEntry& a, const SdpaEntry& b) {
    return std::tie(a.matno, a.block, a.i, a.j) < std::tie(b.matno, b.block, b.i, b.j);
  });
  for (const auto& e : sorted) {
    out << e.matno << ' ' << e.block << ' ' << e.i << ' ' << e.j << ' ' << format_double(e.value)
        << '\n';
  }
}

std::string format_sdpa(const SdpaFile& file) {
  std::ostringstream out;
  write_sdpa(out, file);
  return out.str();
}

SdpData to_sdp_data(const SdpaFile& file) {
  std::vector<int> offsets(1, 0);
  for (int s : file.block_sizes) offsets.push_back(offsets.back() + std::abs(s));
  const int n = offsets.back();

  std::vector<std::vector<Eigen::Triplet<double>>> triplets(static_cast<std::size_t>(file.m) + 1);
  for (const auto& e : file.entries) {
    const int off = offsets[e.block - 1];
    const int r = off + e.i - 1;
    const int c = off + e.j - 1;
    auto& t = triplets[e.matno];
    t.emplace_back(r, c, -e.value);
    if (r != c) t.emplace_back(c, r, -e.value);
  }

  SdpData data;
  data.n = n;
  data.block_sizes = file.block_sizes;
  data.C.resize(n, n);
  data.C.setFromTriplets(triplets[0].begin(), triplets[0].end());
  data.A.resize(static_cast<std::size_t>(file.m));
  data.b.resize(file.m);
  for (int j = 0; j < file.m; ++j) {
    data.A[j].resize(n, n);
    data.A[j].setFromTriplets(triplets[j + 1].begin(), triplets[j + 1].end());
    data.b[j] = -file.c[j];
  }
  return data;
}

SdpaFile to_sdpa(const SdpData& data) {
  SdpaFile file;
  file.m = data.m();
  file.block_sizes = data.block_sizes.empty() ? std::vector<int>{data.n} : data.block_sizes;
  file.c.resize(static_cast<std::size_t>(data.m()));
  for (int j = 0; j < data.m(); ++j) file.c[j] = -data.b[j];

  std::vector<int> offsets(1, 0);
  for (int s : file.block_sizes) offsets.push_back(offsets.back() + std::abs(s));
  if (offsets.back() != data.n) {
    throw Error(ErrorCode::kInvalidArgument, "block sizes do not add up to n");
  }

  auto emit = [&](int matno, const SparseMatrix& M) {
    for (int col = 0; col < M.outerSize(); ++col) {
      for (SparseMatrix::InnerIterator it(M, col); it; ++it) {
        const int r = static_cast<int>(it.row());
        if (r > col) continue;
        const auto blk = std::upper_bound(offsets.begin(), offsets.end(), col) - offsets.begin();
        const int off = offsets[blk - 1];
        if (r < off) {
          throw Error(ErrorCode::kIndexOutOfBlock,
                      "entry (" + std::to_string(r) + "," + std::to_string(col) +
                          ") crosses a block boundary");
        }
        file.entries.push_back(
            {matno, static_cast<int>(blk), r - off + 1, col - off + 1, -it.value()});
      }
    }
  };
  emit(0, data.C);
  for (int j = 0; j < data.m(); ++j) emit(j + 1, data.A[j]);
  return file;
}

}  // namespace chordal_sdp
