#pragma once

#include <memory>
#include <vector>

#include "afdm/common.hpp"

namespace afdm {

// Complex FFT of a fixed length. Power-of-two lengths run in place through an
// iterative radix-2 pipeline; other lengths go through Bluestein's chirp-z
// reduction onto a power-of-two convolver (correct, not tuned).
//
// Transforms are unnormalized:
//   forward:  X[k] = sum_n x[n] e^{-j 2 pi n k / N}
//   inverse:  x[n] = sum_k X[k] e^{+j 2 pi n k / N}
class Fft {
 public:
  explicit Fft(std::size_t n);

  std::size_t size() const { return n_; }

  void forward(cplx* data) const { transform(data, /*inverse=*/false); }
  void inverse(cplx* data) const { transform(data, /*inverse=*/true); }

 private:
  void transform(cplx* data, bool inverse) const;
  void radix2(cplx* data, bool inverse) const;
  void bluestein(cplx* data, bool inverse) const;

  std::size_t n_ = 0;
  bool pow2_ = false;
  std::vector<cplx> twiddle_;          // e^{-j 2 pi k / N}, k < N/2 (pow2 only)
  std::vector<std::uint32_t> bitrev_;  // pow2 only

  // Bluestein state
  std::unique_ptr<Fft> conv_;
  std::vector<cplx> chirp_;      // e^{-j pi k^2 / n}
  std::vector<cplx> filter_ft_;  // forward FFT of the wrapped chirp filter
};

}  // namespace afdm
