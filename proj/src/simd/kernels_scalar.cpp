#include "chordal_sdp/simd/kernels.hpp"

namespace chordal_sdp::simd {

namespace {

double dot(const double* a, const double* b, std::size_t n) {
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) s += a[i] * b[i];
  return s;
}

double squared_distance(const double* a, const double* b, std::size_t n) {
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double d = a[i] - b[i];
    s += d * d;
  }
  return s;
}

void axpy(double alpha, const double* x, double* y, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) y[i] += alpha * x[i];
}

void gather(const double* src, const std::int32_t* idx, double* dst, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) dst[i] = src[idx[i]];
}

void scatter_add(const double* src, const std::int32_t* idx, double* dst, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) dst[idx[i]] += src[i];
}

void multiplier_step(double rho, const double* a, const double* b, double* lam,
                     std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) lam[i] += rho * (a[i] - b[i]);
}

void hadamard(const double* a, const double* b, double* out, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) out[i] = a[i] * b[i];
}

void sub_scaled(const double* a, double alpha, const double* b, double* out, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) out[i] = a[i] - alpha * b[i];
}

}  // namespace

const KernelTable& scalar_kernels() {
  static constexpr KernelTable table{Isa::kScalar, dot,         squared_distance,
                                     axpy,         gather,      scatter_add,
                                     multiplier_step, hadamard, sub_scaled};
  return table;
}

}  // namespace chordal_sdp::simd
