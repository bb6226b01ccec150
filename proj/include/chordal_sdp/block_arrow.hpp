#pragma once

#include <cstdint>

#include "chordal_sdp/graph.hpp"
#include "chordal_sdp/problem.hpp"

namespace chordal_sdp {

// l diagonal d x d blocks plus an h-wide arrow head along the last rows and
// columns; n = l*d + h.
struct BlockArrowSpec {
  int blocks = 1;       // l
  int block_size = 1;   // d
  int arrow = 1;        // h
  int constraints = 1;  // m
  std::uint64_t seed = 0;

  int n() const noexcept { return blocks * block_size + arrow; }

  // Throws Error(kInvalidArgument) unless l, d, h, m >= 1.
  void validate() const;
};

SparsityGraph block_arrow_graph(const BlockArrowSpec& spec);

// Random instance on the block-arrow pattern with a planted strictly feasible
// pair: X0 = I gives b = A(I), and C = sum_i y0_i A_i + sum_k E_k^T W_k E_k with
// W_k = G_k G_k^T + 0.1 I. Data entries are uniform on [-1,1] before
// symmetrization. Bit-identical output for a fixed spec.
SdpData generate_block_arrow(const BlockArrowSpec& spec);

}  // namespace chordal_sdp
