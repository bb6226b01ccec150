#include <gtest/gtest.h>

#include <json.hpp>
#include <random>
#include <sstream>

#include "chordal_sdp/admm.hpp"
#include "chordal_sdp/block_arrow.hpp"
#include "chordal_sdp/error.hpp"
#include "chordal_sdp/result_io.hpp"
#include "chordal_sdp/sdpa.hpp"
#include "oracles.hpp"

using namespace chordal_sdp;

namespace {

template <typename Fn>
void expect_parse_error(Fn&& fn, ErrorCode code, int line) {
  try {
    fn();
    FAIL() << "expected a parse error";
  } catch (const ParseError& e) {
    EXPECT_EQ(e.code(), code) << e.what();
    EXPECT_EQ(e.line(), line) << e.what();
  }
}

const char* kMinimal = "1\n1\n2\n10.0\n0 1 1 1 1.0\n0 1 2 2 2.0\n1 1 1 1 1.0\n";

}  // namespace

TEST(ParseSdpa, MinimalFile) {
  const auto f = parse_sdpa(kMinimal);
  EXPECT_EQ(f.m, 1);
  EXPECT_EQ(f.block_sizes, std::vector<int>{2});
  ASSERT_EQ(f.entries.size(), 3u);
  const auto d = to_sdp_data(f);
  EXPECT_EQ(d.n, 2);
  EXPECT_EQ(Matrix(d.C), Matrix(Eigen::Vector2d(-1.0, -2.0).asDiagonal()));
  EXPECT_EQ(Matrix(d.A[0]), Matrix(Eigen::Vector2d(-1.0, 0.0).asDiagonal()));
  EXPECT_EQ(d.b[0], -10.0);
}

TEST(ParseSdpa, CommentsPunctuationAndDiagonalBlocks) {
  const char* text =
      "\"a comment\n"
      "* another one\n"
      "2 =mdim\n"
      "2 =nblocks\n"
      "{2, -3}\n"
      "1.0\n"
      "  -2e0\n"
      "0 1 1 2 0.5\n"
      "1 2 3 3 1\n"
      "2 1 2 1 4\n";
  const auto f = parse_sdpa(text);
  EXPECT_EQ(f.block_sizes, (std::vector<int>{2, -3}));
  EXPECT_EQ(f.c, (std::vector<double>{1.0, -2.0}));
  // lower-triangle input is normalized to i <= j
  EXPECT_EQ(f.entries[2], (SdpaEntry{2, 1, 1, 2, 4.0}));
  const auto d = to_sdp_data(f);
  EXPECT_EQ(d.n, 5);
  EXPECT_EQ(d.A[0].coeff(4, 4), -1.0);
  EXPECT_EQ(d.C.coeff(1, 0), -0.5);
  EXPECT_EQ(d.C.coeff(0, 1), -0.5);
}

TEST(ParseSdpa, Errors) {
  expect_parse_error([] { parse_sdpa("1\n1\n2\n1.0\n0 1 1 3 1.0\n"); },
                     ErrorCode::kIndexOutOfBlock, 5);
  expect_parse_error([] { parse_sdpa("1\n1\n2\n1.0\n0 2 1 1 1.0\n"); },
                     ErrorCode::kIndexOutOfBlock, 5);
  expect_parse_error([] { parse_sdpa("1\n1\n-2\n1.0\n0 1 1 2 1.0\n"); },
                     ErrorCode::kIndexOutOfBlock, 5);
  expect_parse_error([] { parse_sdpa("1\n1\n2\n1.0\n0 1 1 2 1.0\n\n0 1 2 1 3.0\n"); },
                     ErrorCode::kDuplicateEntry, 7);
  expect_parse_error([] { parse_sdpa("1\n1\n2\n1.0\n0 1 1 x 1.0\n"); }, ErrorCode::kParseError, 5);
  expect_parse_error([] { parse_sdpa("1\n1\n2\n1.0\n0 1 1\n"); }, ErrorCode::kParseError, 5);
  expect_parse_error([] { parse_sdpa("1\n1\n2\n1.0\n3 1 1 1 1.0\n"); }, ErrorCode::kParseError, 5);
  expect_parse_error([] { parse_sdpa("2\n1\n2\n1.0\n"); }, ErrorCode::kParseError, 4);
  expect_parse_error([] { parse_sdpa(""); }, ErrorCode::kParseError, 0);
  EXPECT_THROW(read_sdpa("/nonexistent/file.dat-s"), Error);
}

TEST(WriteSdpa, CanonicalRoundTrip) {
  std::mt19937_64 rng(12);
  std::uniform_real_distribution<double> u(-1e3, 1e3);
  SdpaFile f;
  f.m = 7;
  f.block_sizes = {6, -4, 3};
  for (int j = 0; j < f.m; ++j) f.c.push_back(u(rng));
  for (int matno = 0; matno <= f.m; ++matno) {
    for (int blk = 1; blk <= 3; ++blk) {
      const int s = f.block_sizes[blk - 1];
      for (int j = 1; j <= std::abs(s); ++j) {
        for (int i = 1; i <= j; ++i) {
          if (s < 0 && i != j) continue;
          if (rng() % 3 == 0) f.entries.push_back({matno, blk, i, j, u(rng) / 7.0});
        }
      }
    }
  }
  std::shuffle(f.entries.begin(), f.entries.end(), rng);
  const std::string text = format_sdpa(f);
  const auto g = parse_sdpa(text);
  const std::string again = format_sdpa(to_sdpa(to_sdp_data(g)));
  EXPECT_EQ(text, again);
  EXPECT_EQ(format_double(0.1), "0.1");
  EXPECT_EQ(format_double(-1e-300), "-1e-300");
}

TEST(BlockArrow, PatternAndCliques) {
  BlockArrowSpec spec{2, 2, 1, 3, 1};
  EXPECT_EQ(spec.n(), 5);
  const auto g = block_arrow_graph(spec);
  EXPECT_TRUE(oracle::brute_force_chordal(g));
  EXPECT_EQ(oracle::brute_force_maximal_cliques(g),
            (std::vector<std::vector<int>>{{0, 1, 4}, {2, 3, 4}}));
  EXPECT_EQ(BlockArrowSpec({40, 10, 20, 1, 0}).n(), 420);
  EXPECT_THROW(block_arrow_graph({0, 1, 1, 1, 0}), Error);
}

TEST(BlockArrow, ChordalForSmallSpecs) {
  for (int l = 1; l <= 3; ++l) {
    for (int d = 1; d <= 3; ++d) {
      for (int h = 1; h <= 2; ++h) {
        const auto g = block_arrow_graph({l, d, h, 1, 0});
        EXPECT_TRUE(is_chordal(g).chordal);
        if (g.size() <= 12) EXPECT_TRUE(oracle::brute_force_chordal(g));
      }
    }
  }
}

TEST(BlockArrow, Deterministic) {
  const BlockArrowSpec spec{3, 3, 2, 6, 7};
  const auto a = generate_block_arrow(spec);
  const auto b = generate_block_arrow(spec);
  EXPECT_EQ(format_sdpa(to_sdpa(a)), format_sdpa(to_sdpa(b)));
  const auto pa = SdpProblem::from_data(a);
  const auto pb = SdpProblem::from_data(b);
  EXPECT_EQ(pa.c, pb.c);
  EXPECT_EQ(pa.b, pb.b);
  EXPECT_EQ(Matrix(pa.A), Matrix(pb.A));
  auto other = spec;
  other.seed = 8;
  EXPECT_NE(format_sdpa(to_sdpa(generate_block_arrow(other))), format_sdpa(to_sdpa(a)));
}

TEST(BlockArrow, PlantedFeasiblePoints) {
  const BlockArrowSpec spec{3, 2, 2, 5, 3};
  const auto d = generate_block_arrow(spec);
  for (int i = 0; i < d.m(); ++i) EXPECT_NEAR(d.b[i], Matrix(d.A[i]).trace(), 1e-14);
}

TEST(WriteResult, JsonAndCsv) {
  Vector b(1);
  b << 2.0;
  SdpData data;
  data.n = 1;
  data.C = Matrix::Ones(1, 1).sparseView();
  data.A = {Matrix::Ones(1, 1).sparseView()};
  data.b = b;
  SolverConfig cfg;
  cfg.record_trace = true;
  const auto r = solve_dual(prepare(SdpProblem::from_data(data)), cfg);

  const auto j = nlohmann::json::parse(format_result(r, ResultFormat::kJson));
  EXPECT_EQ(j["status"], "solved");
  EXPECT_EQ(j["form"], "dual");
  EXPECT_EQ(j["objective"], 2.0);
  EXPECT_EQ(j["iterations"], r.iterations);
  EXPECT_EQ(j["cliques"]["p"], 1);
  EXPECT_EQ(j["cliques"]["max_size"], 1);
  EXPECT_TRUE(j["timings"].contains("setup_s"));

  const std::string csv = format_result(r, ResultFormat::kCsv);
  std::istringstream in(csv);
  std::string line;
  std::getline(in, line);
  EXPECT_EQ(line, kTraceCsvHeader);
  int rows = 0;
  while (std::getline(in, line)) ++rows;
  EXPECT_EQ(rows, r.iterations);
  EXPECT_EQ(format_result(r, ResultFormat::kCsv), csv);
}
