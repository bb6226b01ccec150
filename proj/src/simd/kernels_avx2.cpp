// Built with -mavx2 -mfma. Only reached through the table returned by
// avx2_table(), after dispatch.cpp has checked the CPU feature bits.

#include <immintrin.h>

#include "chordal_sdp/simd/kernels.hpp"

namespace chordal_sdp::simd {

namespace {

inline double hsum(__m256d v) {
  const __m128d lo = _mm256_castpd256_pd128(v);
  const __m128d hi = _mm256_extractf128_pd(v, 1);
  const __m128d s = _mm_add_pd(lo, hi);
  return _mm_cvtsd_f64(_mm_add_sd(s, _mm_unpackhi_pd(s, s)));
}

double dot(const double* a, const double* b, std::size_t n) {
  __m256d acc0 = _mm256_setzero_pd();
  __m256d acc1 = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 8 <= n; i += 8) {
    acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i), acc0);
    acc1 = _mm256_fmadd_pd(_mm256_loadu_pd(a + i + 4), _mm256_loadu_pd(b + i + 4), acc1);
  }
  for (; i + 4 <= n; i += 4) {
    acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i), acc0);
  }
  double s = hsum(_mm256_add_pd(acc0, acc1));
  for (; i < n; ++i) s += a[i] * b[i];
  return s;
}

double squared_distance(const double* a, const double* b, std::size_t n) {
  __m256d acc0 = _mm256_setzero_pd();
  __m256d acc1 = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 8 <= n; i += 8) {
    const __m256d d0 = _mm256_sub_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i));
    const __m256d d1 = _mm256_sub_pd(_mm256_loadu_pd(a + i + 4), _mm256_loadu_pd(b + i + 4));
    acc0 = _mm256_fmadd_pd(d0, d0, acc0);
    acc1 = _mm256_fmadd_pd(d1, d1, acc1);
  }
  for (; i + 4 <= n; i += 4) {
    const __m256d d0 = _mm256_sub_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i));
    acc0 = _mm256_fmadd_pd(d0, d0, acc0);
  }
  double s = hsum(_mm256_add_pd(acc0, acc1));
  for (; i < n; ++i) {
    const double d = a[i] - b[i];
    s += d * d;
  }
  return s;
}

void axpy(double alpha, const double* x, double* y, std::size_t n) {
  const __m256d va = _mm256_set1_pd(alpha);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    _mm256_storeu_pd(y + i, _mm256_fmadd_pd(va, _mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i)));
  }
  for (; i < n; ++i) y[i] += alpha * x[i];
}

void gather(const double* src, const std::int32_t* idx, double* dst, std::size_t n) {
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m128i vi = _mm_loadu_si128(reinterpret_cast<const __m128i*>(idx + i));
    _mm256_storeu_pd(dst + i, _mm256_i32gather_pd(src, vi, 8));
  }
  for (; i < n; ++i) dst[i] = src[idx[i]];
}

// AVX2 has no scatter instruction; unrolled scalar stores.
void scatter_add(const double* src, const std::int32_t* idx, double* dst, std::size_t n) {
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    dst[idx[i]] += src[i];
    dst[idx[i + 1]] += src[i + 1];
    dst[idx[i + 2]] += src[i + 2];
    dst[idx[i + 3]] += src[i + 3];
  }
  for (; i < n; ++i) dst[idx[i]] += src[i];
}

void multiplier_step(double rho, const double* a, const double* b, double* lam,
                     std::size_t n) {
  const __m256d vr = _mm256_set1_pd(rho);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d d = _mm256_sub_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i));
    _mm256_storeu_pd(lam + i, _mm256_fmadd_pd(vr, d, _mm256_loadu_pd(lam + i)));
  }
  for (; i < n; ++i) lam[i] += rho * (a[i] - b[i]);
}

void hadamard(const double* a, const double* b, double* out, std::size_t n) {
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    _mm256_storeu_pd(out + i, _mm256_mul_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i)));
  }
  for (; i < n; ++i) out[i] = a[i] * b[i];
}

void sub_scaled(const double* a, double alpha, const double* b, double* out, std::size_t n) {
  const __m256d va = _mm256_set1_pd(alpha);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    _mm256_storeu_pd(out + i,
                     _mm256_fnmadd_pd(va, _mm256_loadu_pd(b + i), _mm256_loadu_pd(a + i)));
  }
  for (; i < n; ++i) out[i] = a[i] - alpha * b[i];
}

}  // namespace

namespace detail {

const KernelTable& avx2_table() {
  static constexpr KernelTable table{Isa::kAvx2, dot,         squared_distance,
                                     axpy,       gather,      scatter_add,
                                     multiplier_step, hadamard, sub_scaled};
  return table;
}

}  // namespace detail

}  // namespace chordal_sdp::simd
