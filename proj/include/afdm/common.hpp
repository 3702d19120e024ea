#pragma once

#include <cmath>
#include <complex>
#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <vector>

namespace afdm {

using cplx = std::complex<double>;
using CVec = std::vector<cplx>;

inline constexpr double kPi = 3.141592653589793238462643383279502884;
inline constexpr double kTwoPi = 2.0 * kPi;

// Tolerance for the integrality predicates on chirp parameters
// (2*N*lambda1 in Z, 1/(2*lambda1) in Z, ...).
inline constexpr double kIntegralityTol = 1e-9;

// All chirp/Doppler phasors in the codebase are expressed in "turns" and
// routed through this one function, so the exp(-j*2*pi*...) sign convention
// of the DAFT diagonals and of the Doppler matrix V lives in a single place.
inline cplx unit_phasor(double turns) {
  return std::polar(1.0, -kTwoPi * turns);
}

inline bool is_near_integer(double x, double tol = kIntegralityTol) {
  return std::abs(x - std::round(x)) < tol;
}

inline std::int64_t mod_n(std::int64_t v, std::int64_t n) {
  std::int64_t r = v % n;
  return r < 0 ? r + n : r;
}

// Maps a cyclic offset to its centered representative in (-n/2, n/2].
inline std::int64_t centered_offset(std::int64_t v, std::int64_t n) {
  std::int64_t r = mod_n(v, n);
  return r > n / 2 ? r - n : r;
}

struct ConfigError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

struct DimensionError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

struct SingularMatrixError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace afdm
