#include "afdm/metrics.hpp"

#include <algorithm>
#include <bit>
#include <cmath>

#include "afdm/simd.hpp"

namespace afdm {
namespace {

double log2d(std::size_t n) { return std::log2(static_cast<double>(n)); }

}  // namespace

double flops(const CostModel& m) {
  if (m.n < 2) throw ConfigError("flops: N must be >= 2");
  const double n = static_cast<double>(m.n);
  switch (m.waveform) {
    case WaveformCost::kOfdm:
      return 5.0 * n * log2d(m.n) + 2.0 * n;
    case WaveformCost::kAfdm:
      return 5.0 * n * log2d(m.n) + 12.0 * n;
    case WaveformCost::kOtfs:
    case WaveformCost::kZakOtfs: {
      if (m.k < 2 || m.l < 2 || m.k * m.l != m.n)
        throw ConfigError("flops: OTFS needs K, L >= 2 with N = K*L");
      double l = static_cast<double>(m.l);
      if (m.waveform == WaveformCost::kOtfs)
        return 5.0 * n * log2d(m.n) + 5.0 * n * std::log2(l) + 2.0 * n;
      return 10.0 * n * log2d(m.n) + 5.0 * n * std::log2(l) + 6.0 * n;
    }
  }
  throw ConfigError("flops: unknown waveform");
}

double afdm_overhead_approx(std::size_t n) { return 12.0 / (5.0 * log2d(n)); }

double afdm_overhead_exact(std::size_t n) {
  return 12.0 / (5.0 * log2d(n) + 2.0);
}

double im_rate(std::size_t k_im, std::size_t n_im, std::size_t m_im, unsigned m_ary) {
  if (m_im >= n_im || m_im == 0)
    throw ConfigError("im_rate: need 0 < m_IM < N_IM");
  if (m_ary < 2) throw ConfigError("im_rate: M >= 2");
  // C(N_IM, m_IM) exactly; N_IM stays desk-scale so uint64 suffices
  long double binom = 1.0L;
  for (std::size_t i = 1; i <= m_im; ++i)
    binom = binom * static_cast<long double>(n_im - m_im + i) / static_cast<long double>(i);
  std::uint64_t floored = static_cast<std::uint64_t>(binom + 0.5L);
  // floor(log2(.)) = bit width - 1
  unsigned index_bits = std::bit_width(floored) - 1;
  double symbol_bits = static_cast<double>(m_im) * std::log2(static_cast<double>(m_ary));
  return static_cast<double>(k_im) * static_cast<double>(index_bits) +
         static_cast<double>(k_im) * symbol_bits;
}

void ber_update(BerAccumulator& acc, std::span<const std::uint8_t> tx_bits,
                std::span<const std::uint8_t> rx_bits) {
  if (tx_bits.size() != rx_bits.size())
    throw DimensionError("ber_update: length mismatch");
  std::uint64_t errs = 0;
  for (std::size_t i = 0; i < tx_bits.size(); ++i)
    errs += (tx_bits[i] ^ rx_bits[i]) & 1u;
  acc.bit_errors += errs;
  acc.bits_total += tx_bits.size();
  acc.frames_total += 1;
  if (errs > 0) acc.frame_errors += 1;
}

void ber_update_symbols(BerAccumulator& acc, std::span<const unsigned> tx,
                        std::span<const unsigned> rx, unsigned bits_per_symbol) {
  if (tx.size() != rx.size()) throw DimensionError("ber_update_symbols: length mismatch");
  // pack XORed Gray indices into words and popcount
  std::uint64_t errs = 0;
  for (std::size_t i = 0; i < tx.size(); ++i)
    errs += static_cast<std::uint64_t>(std::popcount(tx[i] ^ rx[i]));
  acc.bit_errors += errs;
  acc.bits_total += static_cast<std::uint64_t>(tx.size()) * bits_per_symbol;
  acc.frames_total += 1;
  if (errs > 0) acc.frame_errors += 1;
}

double ccdf(std::span<const double> samples, double level) {
  if (samples.empty()) throw DimensionError("ccdf: empty sample set");
  std::size_t above = 0;
  for (double s : samples)
    if (s > level) ++above;
  return static_cast<double>(above) / static_cast<double>(samples.size());
}

double ccdf_level(std::vector<double> samples, double p) {
  if (samples.empty()) throw DimensionError("ccdf_level: empty sample set");
  std::sort(samples.begin(), samples.end());
  // CCDF(x) = p at the (1-p) quantile
  double pos = (1.0 - p) * static_cast<double>(samples.size() - 1);
  std::size_t lo = static_cast<std::size_t>(pos);
  std::size_t hi = std::min(lo + 1, samples.size() - 1);
  double t = pos - static_cast<double>(lo);
  return (1.0 - t) * samples[lo] + t * samples[hi];
}

}  // namespace afdm
