#include <atomic>
#include <cstdlib>
#include <cstring>

#include "chordal_sdp/simd/kernels.hpp"

namespace chordal_sdp::simd {

#if defined(CHORDAL_SDP_HAVE_AVX2)
namespace detail {
const KernelTable& avx2_table();
}
#endif

namespace {

bool cpu_has_avx2() {
#if defined(CHORDAL_SDP_HAVE_AVX2) && (defined(__GNUC__) || defined(__clang__)) && \
    (defined(__x86_64__) || defined(__i386__))
  __builtin_cpu_init();
  return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
  return false;
#endif
}

const KernelTable* initial_choice() {
  const char* env = std::getenv("CHORDAL_SDP_SIMD");
  if (env != nullptr && std::strcmp(env, "scalar") == 0) return &scalar_kernels();
  if (const KernelTable* t = avx2_kernels()) return t;
  return &scalar_kernels();
}

std::atomic<const KernelTable*>& current() {
  static std::atomic<const KernelTable*> table{initial_choice()};
  return table;
}

}  // namespace

const char* to_string(Isa isa) {
  switch (isa) {
    case Isa::kScalar: return "scalar";
    case Isa::kAvx2: return "avx2";
  }
  return "unknown";
}

const KernelTable* avx2_kernels() {
#if defined(CHORDAL_SDP_HAVE_AVX2)
  static const bool supported = cpu_has_avx2();
  return supported ? &detail::avx2_table() : nullptr;
#else
  return nullptr;
#endif
}

const KernelTable& active_kernels() { return *current().load(std::memory_order_acquire); }

bool select_kernels(Isa isa) {
  const KernelTable* t = isa == Isa::kScalar ? &scalar_kernels() : avx2_kernels();
  if (t == nullptr) return false;
  current().store(t, std::memory_order_release);
  return true;
}

}  // namespace chordal_sdp::simd
