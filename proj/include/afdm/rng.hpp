#pragma once

#include <cstdint>
#include <string>

#include "afdm/common.hpp"

namespace afdm {

// SplitMix64 stream. Chosen over <random> engines+distributions because the
// Monte-Carlo harness derives one stream per (frame, purpose) from a master
// seed, and the outputs must be identical across schedules and platforms;
// std::normal_distribution is implementation-defined.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next_u64() {
    std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ull);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
  }

  // Uniform in [0, 1).
  double uniform() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }

  // Standard normal via Box-Muller (explicit formula, deterministic).
  double gaussian() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    double u1 = 0.0;
    do {
      u1 = uniform();
    } while (u1 <= 0.0);
    double u2 = uniform();
    double r = std::sqrt(-2.0 * std::log(u1));
    double a = kTwoPi * u2;
    spare_ = r * std::sin(a);
    have_spare_ = true;
    return r * std::cos(a);
  }

  // CN(0, var): E|z|^2 = var.
  cplx cgaussian(double var) {
    double s = std::sqrt(var * 0.5);
    double re = gaussian();
    double im = gaussian();
    return {s * re, s * im};
  }

 private:
  std::uint64_t state_;
  bool have_spare_ = false;
  double spare_ = 0.0;
};

// Hash-combines seed material through SplitMix64 steps. Used to derive
// per-frame, per-purpose streams from (master_seed, snr index, frame index),
// independent of worker scheduling.
inline std::uint64_t derive_seed(std::uint64_t a, std::uint64_t b) {
  Rng r(a ^ (b + 0x9E3779B97F4A7C15ull + (a << 6) + (a >> 2)));
  return r.next_u64();
}

inline std::uint64_t derive_seed(std::uint64_t a, std::uint64_t b, std::uint64_t c) {
  return derive_seed(derive_seed(a, b), c);
}

inline std::uint64_t derive_seed(std::uint64_t a, std::uint64_t b, std::uint64_t c,
                                 std::uint64_t d) {
  return derive_seed(derive_seed(a, b, c), d);
}

// FNV-1a, for folding scenario identifiers into seed material.
inline std::uint64_t fnv1a(const std::string& s) {
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

}  // namespace afdm
