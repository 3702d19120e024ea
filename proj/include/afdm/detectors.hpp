#pragma once

#include <Eigen/Dense>
#include <span>
#include <vector>

#include "afdm/constellation.hpp"
#include "afdm/pilots.hpp"

namespace afdm {

struct DetectorConfig {
  int band_j = -1;           // LDL: half-bandwidth of the kept channel band; -1 = measure
  int max_iter = 50;         // MRC / MP iteration cap
  double tol = 1e-6;         // MRC stopping tolerance
  double damping = 0.6;      // MP Delta in (0, 1]
  double gamma = 0.01;       // MP convergence threshold
  double patience_eps = 0.2; // MP eta backslide tolerance

  void validate() const;
};

struct DetectionResult {
  CVec soft;
  std::vector<unsigned> hard;   // constellation indices
  int iterations = 1;
  bool converged = true;
  double residual_norm = 0.0;   // ||y - Xi soft||
  std::uint64_t flops = 0;      // recorded by the LDL path
  bool dense_fallback = false;  // LDL pivot breakdown
};

// Column-major nonzero structure of a sparse effective channel.
struct SparseChannel {
  std::size_t n = 0;
  // cols[b] = list of (row a, value)
  std::vector<std::vector<std::pair<std::size_t, cplx>>> cols;

  static SparseChannel from_dense(const Eigen::MatrixXcd& xi, double rel_tol = 1e-12);
  // Nonzeros from the closed-form coefficient formula; requires integer
  // delays/Dopplers (virtual paths included) and integral 2N*lambda1.
  static SparseChannel from_afdm_paths(std::size_t n, const ChirpParams& cp,
                                       std::span<const Path> paths);
  Eigen::MatrixXcd dense() const;
};

DetectionResult detect_zf(const Eigen::MatrixXcd& xi, std::span<const cplx> y,
                          const Constellation& c);

DetectionResult detect_mmse(const Eigen::MatrixXcd& xi, std::span<const cplx> y,
                            double noise_var, const Constellation& c);

// Banded-LDL MMSE. Truncates the channel to cyclic offsets within band_j of
// the main diagonal (band_j < 0 measures the band profile), then solves the
// regularized normal system exactly through a bordered banded LDL^H
// factorization in O(J^2 N). Equals detect_mmse on the truncated channel.
DetectionResult detect_ldl_mmse(const Eigen::MatrixXcd& xi, std::span<const cplx> y,
                                double noise_var, const Constellation& c,
                                int band_j = -1);

DetectionResult detect_ldl_mmse(const SparseChannel& xi, std::span<const cplx> y,
                                double noise_var, const Constellation& c,
                                int band_j = -1);

DetectionResult detect_mrc(const SparseChannel& xi, std::span<const cplx> y,
                           double noise_var, const Constellation& c,
                           const DetectorConfig& cfg = {});

DetectionResult detect_mp(const SparseChannel& xi, std::span<const cplx> y,
                          double noise_var, const Constellation& c,
                          const DetectorConfig& cfg = {});

// Exhaustive joint-ML search; enforces M^N <= 1e7.
DetectionResult detect_map_oracle(const Eigen::MatrixXcd& xi, std::span<const cplx> y,
                                  double noise_var, const Constellation& c);

// Final MP beliefs, one row per symbol (for posterior comparisons).
Eigen::MatrixXd mp_beliefs(const SparseChannel& xi, std::span<const cplx> y,
                           double noise_var, const Constellation& c,
                           const DetectorConfig& cfg = {});

}  // namespace afdm
