#pragma once

// Vector kernels used in the ADMM inner loops. Every kernel has a scalar
// reference implementation; SIMD variants live in their own translation
// units, built with ISA-specific flags, and are picked at runtime from the
// CPU feature bits. This header must stay free of inline code so the SIMD
// translation units cannot leak ISA-specific instantiations into the rest of
// the build.

#include <cstddef>
#include <cstdint>

namespace chordal_sdp::simd {

enum class Isa { kScalar, kAvx2 };

const char* to_string(Isa isa);

struct KernelTable {
  Isa isa;
  // sum a[i]*b[i]
  double (*dot)(const double* a, const double* b, std::size_t n);
  // sum (a[i]-b[i])^2
  double (*squared_distance)(const double* a, const double* b, std::size_t n);
  // y[i] += alpha*x[i]
  void (*axpy)(double alpha, const double* x, double* y, std::size_t n);
  // dst[i] = src[idx[i]]
  void (*gather)(const double* src, const std::int32_t* idx, double* dst, std::size_t n);
  // dst[idx[i]] += src[i]; idx must not repeat within one call
  void (*scatter_add)(const double* src, const std::int32_t* idx, double* dst, std::size_t n);
  // lam[i] += rho*(a[i]-b[i])
  void (*multiplier_step)(double rho, const double* a, const double* b, double* lam,
                          std::size_t n);
  // out[i] = a[i]*b[i]
  void (*hadamard)(const double* a, const double* b, double* out, std::size_t n);
  // out[i] = a[i] - alpha*b[i]
  void (*sub_scaled)(const double* a, double alpha, const double* b, double* out,
                     std::size_t n);
};

const KernelTable& scalar_kernels();

// nullptr when the variant was not compiled in or the CPU lacks the ISA.
const KernelTable* avx2_kernels();

// Best available table. CHORDAL_SDP_SIMD=scalar in the environment forces the
// reference kernels.
const KernelTable& active_kernels();

// Overrides the runtime choice (tests and benchmarking). Returns false and
// leaves the selection unchanged when the ISA is unavailable.
bool select_kernels(Isa isa);

}  // namespace chordal_sdp::simd
