#pragma once

#include <complex>
#include <cstddef>
#include <cstdint>

namespace afdm::simd {

using cplx = std::complex<double>;

// Table of the data-parallel inner-loop kernels. `scalar()` is the reference
// implementation; `active()` returns the variant selected at load time from
// CPU capabilities. Selection can be forced with AFDM_SIMD=scalar|avx2.
struct KernelTable {
  const char* name;

  // out[i] = a[i] * b[i]
  void (*cmul)(const cplx* a, const cplx* b, cplx* out, std::size_t n);
  // out[i] = a[i] * conj(b[i])
  void (*cmul_conj)(const cplx* a, const cplx* b, cplx* out, std::size_t n);
  // a[i] *= s
  void (*cscale)(cplx* a, cplx s, std::size_t n);
  // y[i] += s * x[i]
  void (*caxpy)(cplx s, const cplx* x, cplx* y, std::size_t n);
  // out[i] = w[i] * a[i], real taps
  void (*rmul)(const double* w, const cplx* a, cplx* out, std::size_t n);
  // sum_i |a[i]|^2
  double (*abs2_sum)(const cplx* a, std::size_t n);
  // max_i |a[i]|^2
  double (*abs2_max)(const cplx* a, std::size_t n);
  // popcount(a[i] ^ b[i]) summed over words
  std::uint64_t (*xor_popcount)(const std::uint64_t* a, const std::uint64_t* b,
                                std::size_t nwords);
};

const KernelTable& scalar();
const KernelTable& active();

// nullptr when the binary lacks the variant or the CPU does not support it.
const KernelTable* avx2();

}  // namespace afdm::simd
