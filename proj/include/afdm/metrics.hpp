#pragma once

#include <span>
#include <string>
#include <vector>

#include "afdm/common.hpp"

namespace afdm {

enum class WaveformCost { kOfdm, kAfdm, kOtfs, kZakOtfs };

struct CostModel {
  WaveformCost waveform = WaveformCost::kOfdm;
  std::size_t n = 0;
  std::size_t k = 0, l = 0;  // delay-Doppler grid, OTFS variants only (N = K*L)
};

// Per-block modulator/demodulator cost in FLOPs:
//   OFDM      5 N log2 N + 2 N
//   AFDM      5 N log2 N + 12 N
//   OTFS      5 N log2 N + 5 N log2 L + 2 N
//   Zak-OTFS  10 N log2 N + 5 N log2 L + 6 N
double flops(const CostModel& m);

// Relative AFDM-over-OFDM overhead, 12 / (5 log2 N) form (the +2N term of the
// OFDM cost dropped) and the exact ratio.
double afdm_overhead_approx(std::size_t n);
double afdm_overhead_exact(std::size_t n);

// Index-modulation bits per block:
//   K * floor(log2(C(N_IM, m_IM))) + K * m_IM * log2(M)
double im_rate(std::size_t k_im, std::size_t n_im, std::size_t m_im, unsigned m_ary);

struct BerAccumulator {
  std::uint64_t bit_errors = 0;
  std::uint64_t bits_total = 0;
  std::uint64_t frame_errors = 0;
  std::uint64_t frames_total = 0;

  double ber() const {
    return bits_total == 0 ? 0.0
                           : static_cast<double>(bit_errors) / static_cast<double>(bits_total);
  }
  double fer() const {
    return frames_total == 0
               ? 0.0
               : static_cast<double>(frame_errors) / static_cast<double>(frames_total);
  }
  void merge(const BerAccumulator& o) {
    bit_errors += o.bit_errors;
    bits_total += o.bits_total;
    frame_errors += o.frame_errors;
    frames_total += o.frames_total;
  }
};

void ber_update(BerAccumulator& acc, std::span<const std::uint8_t> tx_bits,
                std::span<const std::uint8_t> rx_bits);

// Gray-indexed symbol streams: bit errors are popcounts of XORed indices.
void ber_update_symbols(BerAccumulator& acc, std::span<const unsigned> tx,
                        std::span<const unsigned> rx, unsigned bits_per_symbol);

// Fraction of samples strictly above level.
double ccdf(std::span<const double> samples, double level);

// Level at which the empirical CCDF crosses p (linear interpolation on the
// sorted samples).
double ccdf_level(std::vector<double> samples, double p);

}  // namespace afdm
