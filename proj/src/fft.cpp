#include "afdm/fft.hpp"

#include <bit>

namespace afdm {
namespace {

// Phase of e^{-j pi k^2 / n} with the quadratic exponent reduced mod 2n to
// keep the argument small; k^2 overflows double precision long before int64.
cplx quad_chirp(std::uint64_t k, std::uint64_t n) {
  std::uint64_t ksq = (k % (2 * n)) * (k % (2 * n)) % (2 * n);
  return std::polar(1.0, -kPi * static_cast<double>(ksq) / static_cast<double>(n));
}

}  // namespace

Fft::Fft(std::size_t n) : n_(n) {
  if (n < 1) throw DimensionError("Fft: size must be >= 1");
  pow2_ = std::has_single_bit(n);
  if (pow2_) {
    twiddle_.resize(n / 2);
    for (std::size_t k = 0; k < n / 2; ++k)
      twiddle_[k] = std::polar(1.0, -kTwoPi * static_cast<double>(k) / static_cast<double>(n));
    bitrev_.resize(n);
    unsigned bits = static_cast<unsigned>(std::countr_zero(n));
    for (std::size_t i = 0; i < n; ++i) {
      std::uint32_t r = 0;
      for (unsigned b = 0; b < bits; ++b)
        r |= ((i >> b) & 1u) << (bits - 1 - b);
      bitrev_[i] = r;
    }
  } else {
    std::size_t m = std::bit_ceil(2 * n - 1);
    conv_ = std::make_unique<Fft>(m);
    chirp_.resize(n);
    for (std::size_t k = 0; k < n; ++k) chirp_[k] = quad_chirp(k, n);
    std::vector<cplx> filt(m, cplx{0.0, 0.0});
    filt[0] = std::conj(chirp_[0]);
    for (std::size_t k = 1; k < n; ++k) {
      filt[k] = std::conj(chirp_[k]);
      filt[m - k] = std::conj(chirp_[k]);
    }
    conv_->forward(filt.data());
    filter_ft_ = std::move(filt);
  }
}

void Fft::transform(cplx* data, bool inverse) const {
  if (n_ == 1) return;
  if (pow2_)
    radix2(data, inverse);
  else
    bluestein(data, inverse);
}

void Fft::radix2(cplx* data, bool inverse) const {
  const std::size_t n = n_;
  for (std::size_t i = 0; i < n; ++i) {
    std::uint32_t j = bitrev_[i];
    if (i < j) std::swap(data[i], data[j]);
  }
  for (std::size_t len = 2; len <= n; len <<= 1) {
    const std::size_t half = len >> 1;
    const std::size_t step = n / len;
    for (std::size_t base = 0; base < n; base += len) {
      for (std::size_t k = 0; k < half; ++k) {
        cplx w = twiddle_[k * step];
        if (inverse) w = std::conj(w);
        cplx t = data[base + k + half] * w;
        cplx u = data[base + k];
        data[base + k] = u + t;
        data[base + k + half] = u - t;
      }
    }
  }
}

void Fft::bluestein(cplx* data, bool inverse) const {
  const std::size_t n = n_;
  const std::size_t m = conv_->size();
  std::vector<cplx> work(m, cplx{0.0, 0.0});
  for (std::size_t k = 0; k < n; ++k) {
    cplx c = inverse ? std::conj(chirp_[k]) : chirp_[k];
    work[k] = data[k] * c;
  }
  conv_->forward(work.data());
  if (inverse) {
    for (std::size_t k = 0; k < m; ++k) work[k] *= std::conj(filter_ft_[k]);
  } else {
    for (std::size_t k = 0; k < m; ++k) work[k] *= filter_ft_[k];
  }
  conv_->inverse(work.data());
  const double scale = 1.0 / static_cast<double>(m);
  for (std::size_t k = 0; k < n; ++k) {
    cplx c = inverse ? std::conj(chirp_[k]) : chirp_[k];
    data[k] = work[k] * c * scale;
  }
}

}  // namespace afdm
