#pragma once

#include <Eigen/Dense>
#include <optional>
#include <span>
#include <vector>

#include "afdm/common.hpp"

namespace afdm {

struct Path {
  cplx gain;
  double delay = 0.0;    // normalized, samples
  double doppler = 0.0;  // normalized, cycles per block
};

struct PathSet {
  std::vector<Path> paths;
  double ell_max = 0.0;
  double f_max = 0.0;

  void validate() const;
  bool all_integer() const;
  std::size_t size() const { return paths.size(); }
};

enum class PulseShape { kSinc, kRaisedCosine, kRectangular };

// Effective discrete-time pulse kernel g(.), truncated to [-B, B].
struct PulseKernel {
  PulseShape shape = PulseShape::kSinc;
  double rolloff = 0.0;  // raised cosine only, in [0, 1]
  int half_width = 8;

  double eval(double t) const;

  static PulseKernel sinc(int b = 8) { return {PulseShape::kSinc, 0.0, b}; }
  static PulseKernel raised_cosine(double alpha, int b = 8) {
    return {PulseShape::kRaisedCosine, alpha, b};
  }
  static PulseKernel rectangular() { return {PulseShape::kRectangular, 0.0, 1}; }
};

enum class PrefixPhase { kZero, kAfdmCpp };

// Applies phi_cp to the real-valued argument as printed, or to its floor;
// the formula leaves the fractional-delay case open.
enum class CppPhaseArg { kRealValued, kIntegerPart };

struct PrefixSpec {
  std::size_t length = 0;
  PrefixPhase phase = PrefixPhase::kZero;
  double lambda1 = 0.0;  // used by kAfdmCpp
  CppPhaseArg phase_arg = CppPhaseArg::kRealValued;

  // phi_cp(arg) in turns: lambda1 * (N^2 + 2 N arg) for the AFDM CPP, 0 for CP.
  double phase_turns(double arg, std::size_t n) const;

  static PrefixSpec cp(std::size_t length) { return {length, PrefixPhase::kZero, 0.0}; }
  static PrefixSpec cpp(std::size_t length, double lambda1,
                        CppPhaseArg pa = CppPhaseArg::kRealValued) {
    return {length, PrefixPhase::kAfdmCpp, lambda1, pa};
  }
};

enum class ChannelStructure { kIdidSparse, kFdfdBanded, kDense };

struct ChannelOperator {
  Eigen::MatrixXcd matrix;
  ChannelStructure structure = ChannelStructure::kDense;
};

struct ArrayGeometry {
  int n_tx = 1;
  int n_rx = 1;
  double d_tx = 0.5;      // meters
  double d_rx = 0.5;      // meters
  double lambda_c = 1.0;  // carrier wavelength, meters
  std::vector<double> aod;  // radians, one per path
  std::vector<double> aoa;

  void validate(std::size_t n_paths) const;
};

// Diagonal of V^f: e^{-j 2 pi f k / N}.
CVec doppler_diag(std::size_t n, double f);

// Classic IDID per-path operator Phi_p * V^f * Pi^ell (one nonzero per row).
Eigen::MatrixXcd per_path_idid(std::size_t n, std::int64_t ell, double f,
                               const PrefixSpec& prefix);

// Toeplitz interpolated-delay matrix [G]_{n,m} = g(n - m - ell).
Eigen::MatrixXcd frac_delay_matrix(std::size_t n, double ell, const PulseKernel& k);

// Prefix wrap component [Phi]_{n,m} = g(n - m - ell + N) e^{j 2 pi phi_cp(n-m-ell)}.
Eigen::MatrixXcd frac_prefix_matrix(std::size_t n, double ell, const PulseKernel& k,
                                    const PrefixSpec& prefix);

// Psi(ell) = G(ell) + Phi(ell): the chirp-periodically circulant delay operator.
Eigen::MatrixXcd psi_matrix(std::size_t n, double ell, const PulseKernel& k,
                            const PrefixSpec& prefix);

// H = sum_p h_p V^{f_p} Psi(ell_p). Dispatches to the classic IDID form when
// every delay and Doppler is integral. With circulant_approx, fractional
// delays are rebuilt from the virtual integer-tap expansion instead of the
// exact Toeplitz-plus-wrap operator.
ChannelOperator composite_channel(std::size_t n, const PathSet& ps,
                                  const PulseKernel& k, const PrefixSpec& prefix,
                                  bool circulant_approx = false);

// Rewrites each fractional-delay path as (2B+1) integer-delay virtual paths
// with gains h_p g(q - frac(ell_p)); integer delays collapse to one tap.
PathSet virtual_idid_expansion(const PathSet& ps, const PulseKernel& k);

// Outer product of array response vectors for one path.
Eigen::MatrixXcd spatial_signature(const ArrayGeometry& g, double aod, double aoa);

// Block MIMO operator (N_r N x N_t N): block (r,t) = sum_p h_p [Theta_p]_{r,t}
// V^{f_p} Psi(ell_p).
Eigen::MatrixXcd mimo_channel(const ArrayGeometry& g, std::size_t n,
                              const PathSet& ps, const PulseKernel& k,
                              const PrefixSpec& prefix);

// O(P N) application of an integer-delay path set (classic IDID operator),
// for the Monte-Carlo hot path. out[n] = sum_p h_p Phi_p[n] V^f[n] in[(n-ell)_N].
void apply_idid_paths(std::span<const Path> paths, const PrefixSpec& prefix,
                      std::span<const cplx> in, std::span<cplx> out);

// Largest centered cyclic offset whose column energy exceeds rel_tol * max.
int band_halfwidth(const Eigen::MatrixXcd& m, double rel_tol = 1e-12);

}  // namespace afdm
