// AVX2 variants of the complex inner-loop kernels. This translation unit is
// only compiled on x86-64 (see src/CMakeLists.txt) and is only entered after
// a runtime CPUID check in simd_dispatch.cpp.

#include "afdm/simd.hpp"

#if defined(__x86_64__) || defined(_M_X64)

#include <immintrin.h>

#include <algorithm>
#include <bit>

namespace afdm::simd {
namespace {

// Two packed complex<double> per __m256d lane pair: [re0, im0, re1, im1].

inline __m256d cmul2(__m256d a, __m256d b) {
  __m256d b_re = _mm256_movedup_pd(b);
  __m256d b_im = _mm256_permute_pd(b, 0xF);
  __m256d a_sw = _mm256_permute_pd(a, 0x5);
  return _mm256_addsub_pd(_mm256_mul_pd(a, b_re), _mm256_mul_pd(a_sw, b_im));
}

inline __m256d cmul_conj2(__m256d a, __m256d b) {
  __m256d b_re = _mm256_movedup_pd(b);
  __m256d b_im = _mm256_permute_pd(b, 0xF);
  __m256d a_sw = _mm256_permute_pd(a, 0x5);
  __m256d t2 = _mm256_mul_pd(a_sw, b_im);
  return _mm256_addsub_pd(_mm256_mul_pd(a, b_re),
                          _mm256_sub_pd(_mm256_setzero_pd(), t2));
}

void cmul_avx2(const cplx* a, const cplx* b, cplx* out, std::size_t n) {
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    __m256d va = _mm256_loadu_pd(reinterpret_cast<const double*>(a + i));
    __m256d vb = _mm256_loadu_pd(reinterpret_cast<const double*>(b + i));
    _mm256_storeu_pd(reinterpret_cast<double*>(out + i), cmul2(va, vb));
  }
  for (; i < n; ++i) out[i] = a[i] * b[i];
}

void cmul_conj_avx2(const cplx* a, const cplx* b, cplx* out, std::size_t n) {
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    __m256d va = _mm256_loadu_pd(reinterpret_cast<const double*>(a + i));
    __m256d vb = _mm256_loadu_pd(reinterpret_cast<const double*>(b + i));
    _mm256_storeu_pd(reinterpret_cast<double*>(out + i), cmul_conj2(va, vb));
  }
  for (; i < n; ++i) out[i] = a[i] * std::conj(b[i]);
}

void cscale_avx2(cplx* a, cplx s, std::size_t n) {
  __m256d vs = _mm256_setr_pd(s.real(), s.imag(), s.real(), s.imag());
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    __m256d va = _mm256_loadu_pd(reinterpret_cast<const double*>(a + i));
    _mm256_storeu_pd(reinterpret_cast<double*>(a + i), cmul2(va, vs));
  }
  for (; i < n; ++i) a[i] *= s;
}

void caxpy_avx2(cplx s, const cplx* x, cplx* y, std::size_t n) {
  __m256d vs = _mm256_setr_pd(s.real(), s.imag(), s.real(), s.imag());
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    __m256d vx = _mm256_loadu_pd(reinterpret_cast<const double*>(x + i));
    __m256d vy = _mm256_loadu_pd(reinterpret_cast<const double*>(y + i));
    _mm256_storeu_pd(reinterpret_cast<double*>(y + i),
                     _mm256_add_pd(vy, cmul2(vx, vs)));
  }
  for (; i < n; ++i) y[i] += s * x[i];
}

void rmul_avx2(const double* w, const cplx* a, cplx* out, std::size_t n) {
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    __m256d vw = _mm256_setr_pd(w[i], w[i], w[i + 1], w[i + 1]);
    __m256d va = _mm256_loadu_pd(reinterpret_cast<const double*>(a + i));
    _mm256_storeu_pd(reinterpret_cast<double*>(out + i), _mm256_mul_pd(vw, va));
  }
  for (; i < n; ++i) out[i] = w[i] * a[i];
}

double abs2_sum_avx2(const cplx* a, std::size_t n) {
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    __m256d va = _mm256_loadu_pd(reinterpret_cast<const double*>(a + i));
    acc = _mm256_add_pd(acc, _mm256_mul_pd(va, va));
  }
  alignas(32) double lanes[4];
  _mm256_store_pd(lanes, acc);
  double out = lanes[0] + lanes[1] + lanes[2] + lanes[3];
  for (; i < n; ++i)
    out += a[i].real() * a[i].real() + a[i].imag() * a[i].imag();
  return out;
}

double abs2_max_avx2(const cplx* a, std::size_t n) {
  double best = 0.0;
  std::size_t i = 0;
  __m128d vbest = _mm_setzero_pd();
  for (; i + 2 <= n; i += 2) {
    __m256d va = _mm256_loadu_pd(reinterpret_cast<const double*>(a + i));
    __m256d sq = _mm256_mul_pd(va, va);
    // |z|^2 = re^2 + im^2 for each of the two packed values
    __m256d sw = _mm256_permute_pd(sq, 0x5);
    __m256d sums = _mm256_add_pd(sq, sw);  // [s0, s0, s1, s1]
    __m128d lo = _mm256_castpd256_pd128(sums);
    __m128d hi = _mm256_extractf128_pd(sums, 1);
    vbest = _mm_max_pd(vbest, _mm_max_pd(lo, hi));
  }
  alignas(16) double lanes[2];
  _mm_store_pd(lanes, vbest);
  best = std::max(lanes[0], lanes[1]);
  for (; i < n; ++i) {
    double v = a[i].real() * a[i].real() + a[i].imag() * a[i].imag();
    best = std::max(best, v);
  }
  return best;
}

std::uint64_t xor_popcount_plain(const std::uint64_t* a, const std::uint64_t* b,
                                 std::size_t nwords) {
  std::uint64_t acc = 0;
  for (std::size_t i = 0; i < nwords; ++i)
    acc += static_cast<std::uint64_t>(std::popcount(a[i] ^ b[i]));
  return acc;
}

}  // namespace

const KernelTable* avx2_table_impl() {
  static const KernelTable table{
      "avx2",        cmul_avx2,     cmul_conj_avx2, cscale_avx2,
      caxpy_avx2,    rmul_avx2,     abs2_sum_avx2,  abs2_max_avx2,
      xor_popcount_plain,
  };
  return &table;
}

}  // namespace afdm::simd

#else

namespace afdm::simd {
const KernelTable* avx2_table_impl() { return nullptr; }
}  // namespace afdm::simd

#endif
