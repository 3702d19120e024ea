#include <cstdlib>
#include <cstring>

#include "afdm/simd.hpp"

namespace afdm::simd {

const KernelTable* avx2_table_impl();

const KernelTable* avx2() {
#if defined(__x86_64__) || defined(_M_X64)
  if (__builtin_cpu_supports("avx2")) return avx2_table_impl();
#endif
  return nullptr;
}

namespace {

const KernelTable* select() {
  const char* force = std::getenv("AFDM_SIMD");
  if (force != nullptr) {
    if (std::strcmp(force, "scalar") == 0) return &scalar();
    if (std::strcmp(force, "avx2") == 0 && avx2() != nullptr) return avx2();
  }
  if (const KernelTable* t = avx2()) return t;
  return &scalar();
}

}  // namespace

const KernelTable& active() {
  static const KernelTable* chosen = select();
  return *chosen;
}

}  // namespace afdm::simd
