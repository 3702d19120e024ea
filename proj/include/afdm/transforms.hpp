#pragma once

#include <Eigen/Dense>
#include <span>

#include "afdm/common.hpp"
#include "afdm/fft.hpp"

namespace afdm {

// Chirp rates of the DAFT basis, both dimensionless per-sample^2. Written
// (lambda1, lambda2) or (c1, c2) depending on the source; they are the same
// pair. guard_xi is the Doppler guard margin entering the lambda1 bound.
struct ChirpParams {
  double lambda1 = 0.0;
  double lambda2 = 0.0;
  int guard_xi = 0;

  // lambda1 >= (2(round(f_max) + xi) + 1) / (2N)
  bool satisfies_orthogonality(double f_max, std::size_t n) const;

  // Smallest admissible lambda1 for the given Doppler bound and guard.
  static double min_lambda1(double f_max, int guard_xi, std::size_t n);

  bool is_zero() const { return lambda1 == 0.0 && lambda2 == 0.0; }

  // 2*N*lambda1 as an integer when it is one (within tolerance).
  bool integer_stride(std::size_t n, std::int64_t* out = nullptr) const;
};

enum class TransformKind { kDft, kDaft };
enum class Direction { kForward, kInverse };

// Dense forward DAFT matrix: Lambda_{l2} * F_n * Lambda_{l1} with the unitary
// (1/sqrt(n)) DFT and Lambda_l[k,k] = e^{-j 2 pi l k^2}.
Eigen::MatrixXcd daft_matrix(std::size_t n, const ChirpParams& cp);

inline Eigen::MatrixXcd dft_matrix(std::size_t n) { return daft_matrix(n, {}); }

// Fast evaluation path: chirp multiply, FFT, chirp multiply. Immutable after
// construction and safe to share across threads; apply() is reentrant and
// allocation-free for power-of-two sizes.
class TransformPlan {
 public:
  TransformPlan(std::size_t n, TransformKind kind, ChirpParams cp = {});

  std::size_t size() const { return n_; }
  TransformKind kind() const { return kind_; }
  const ChirpParams& chirp() const { return cp_; }

  void apply(Direction dir, std::span<const cplx> in, std::span<cplx> out) const;

  CVec apply(Direction dir, std::span<const cplx> in) const {
    CVec out(n_);
    apply(dir, in, out);
    return out;
  }

  CVec forward(std::span<const cplx> in) const { return apply(Direction::kForward, in); }
  CVec inverse(std::span<const cplx> in) const { return apply(Direction::kInverse, in); }

 private:
  std::size_t n_;
  TransformKind kind_;
  ChirpParams cp_;
  Fft fft_;
  double scale_;
  // Empty when the corresponding lambda is exactly zero, so the DFT special
  // case shares the code path bit for bit.
  CVec chirp1_, chirp1_conj_, chirp2_, chirp2_conj_;
};

}  // namespace afdm
