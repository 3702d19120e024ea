#pragma once

#include <span>
#include <string>
#include <vector>

#include "afdm/common.hpp"

namespace afdm {

// Gray-mapped unit-average-energy constellations. QPSK points are
// (+-1 +- j)/sqrt(2); square M-QAM uses per-axis Gray coding on the PAM
// levels {+-1, +-3, ...} scaled to unit average symbol energy. The symbol
// index IS the Gray-coded bit pattern, so bit errors between two index
// streams are popcounts of XORed indices.
class Constellation {
 public:
  static Constellation qpsk() { return Constellation(4); }
  static Constellation qam(unsigned m) { return Constellation(m); }

  unsigned order() const { return m_; }
  unsigned bits_per_symbol() const { return bits_; }
  const std::vector<cplx>& points() const { return points_; }
  cplx point(unsigned idx) const { return points_[idx]; }

  // Nearest constellation point; exact ties go to the lower index.
  unsigned slice(cplx v) const {
    unsigned best = 0;
    double best_d = std::norm(v - points_[0]);
    for (unsigned i = 1; i < m_; ++i) {
      double d = std::norm(v - points_[i]);
      if (d < best_d) {
        best_d = d;
        best = i;
      }
    }
    return best;
  }

  void map_bits(std::span<const std::uint8_t> bits, std::span<cplx> out) const {
    if (bits.size() != out.size() * bits_)
      throw DimensionError("Constellation::map_bits: length mismatch");
    for (std::size_t s = 0; s < out.size(); ++s) {
      unsigned idx = 0;
      for (unsigned b = 0; b < bits_; ++b)
        idx = (idx << 1) | (bits[s * bits_ + b] & 1u);
      out[s] = points_[idx];
    }
  }

  std::vector<std::uint8_t> bits_of(unsigned idx) const {
    std::vector<std::uint8_t> bits(bits_);
    for (unsigned b = 0; b < bits_; ++b)
      bits[b] = (idx >> (bits_ - 1 - b)) & 1u;
    return bits;
  }

 private:
  explicit Constellation(unsigned m) : m_(m) {
    if (m < 2 || (m & (m - 1)) != 0)
      throw ConfigError("Constellation: order must be a power of two >= 2");
    bits_ = 0;
    for (unsigned v = m; v > 1; v >>= 1) ++bits_;
    if (bits_ % 2 != 0)
      throw ConfigError("Constellation: only square constellations supported");
    unsigned side = 1u << (bits_ / 2);
    // mean PAM energy per axis: (side^2 - 1) / 3
    double axis_energy = (static_cast<double>(side) * side - 1.0) / 3.0;
    double scale = 1.0 / std::sqrt(2.0 * axis_energy);
    points_.resize(m);
    for (unsigned idx = 0; idx < m; ++idx) {
      unsigned gi = idx >> (bits_ / 2);
      unsigned gq = idx & (side - 1);
      points_[idx] = {pam_level(gi, side) * scale, pam_level(gq, side) * scale};
    }
  }

  // Gray field -> PAM amplitude. Decoding the Gray code to its rank makes
  // axis-adjacent points differ in exactly one index bit.
  static double pam_level(unsigned gray, unsigned side) {
    unsigned rank = 0;
    for (unsigned g = gray; g > 0; g >>= 1) rank ^= g;
    return 2.0 * static_cast<double>(rank) - (static_cast<double>(side) - 1.0);
  }

  unsigned m_;
  unsigned bits_;
  std::vector<cplx> points_;
};

}  // namespace afdm
