#include "afdm/simd.hpp"

#include <algorithm>
#include <bit>

namespace afdm::simd {
namespace {

void cmul_scalar(const cplx* a, const cplx* b, cplx* out, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) out[i] = a[i] * b[i];
}

void cmul_conj_scalar(const cplx* a, const cplx* b, cplx* out, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) out[i] = a[i] * std::conj(b[i]);
}

void cscale_scalar(cplx* a, cplx s, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) a[i] *= s;
}

void caxpy_scalar(cplx s, const cplx* x, cplx* y, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) y[i] += s * x[i];
}

void rmul_scalar(const double* w, const cplx* a, cplx* out, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) out[i] = w[i] * a[i];
}

double abs2_sum_scalar(const cplx* a, std::size_t n) {
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i)
    acc += a[i].real() * a[i].real() + a[i].imag() * a[i].imag();
  return acc;
}

double abs2_max_scalar(const cplx* a, std::size_t n) {
  double best = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    double v = a[i].real() * a[i].real() + a[i].imag() * a[i].imag();
    best = std::max(best, v);
  }
  return best;
}

std::uint64_t xor_popcount_scalar(const std::uint64_t* a, const std::uint64_t* b,
                                  std::size_t nwords) {
  std::uint64_t acc = 0;
  for (std::size_t i = 0; i < nwords; ++i)
    acc += static_cast<std::uint64_t>(std::popcount(a[i] ^ b[i]));
  return acc;
}

}  // namespace

const KernelTable& scalar() {
  static const KernelTable table{
      "scalar",          cmul_scalar,     cmul_conj_scalar, cscale_scalar,
      caxpy_scalar,      rmul_scalar,     abs2_sum_scalar,  abs2_max_scalar,
      xor_popcount_scalar,
  };
  return table;
}

}  // namespace afdm::simd
