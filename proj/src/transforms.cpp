#include "afdm/transforms.hpp"

#include <cmath>

#include "afdm/simd.hpp"

namespace afdm {
namespace {

// e^{-j 2 pi lambda k^2} with the exponent reduced before the trig call:
// lambda * k^2 needs its fractional part only, and k^2 loses integer
// precision in double beyond k ~ 2^26.
cplx chirp_entry(double lambda, std::uint64_t k) {
  constexpr std::uint64_t kBig = 1u << 25;
  double turns;
  if (k < kBig) {
    double t = lambda * static_cast<double>(k) * static_cast<double>(k);
    turns = t - std::floor(t);
  } else {
    long double t = static_cast<long double>(lambda) * k * k;
    turns = static_cast<double>(t - std::floor(t));
  }
  return unit_phasor(turns);
}

}  // namespace

bool ChirpParams::satisfies_orthogonality(double f_max, std::size_t n) const {
  return lambda1 >= min_lambda1(f_max, guard_xi, n) - 1e-15;
}

double ChirpParams::min_lambda1(double f_max, int guard_xi, std::size_t n) {
  double fi = std::round(f_max);
  return (2.0 * (fi + guard_xi) + 1.0) / (2.0 * static_cast<double>(n));
}

bool ChirpParams::integer_stride(std::size_t n, std::int64_t* out) const {
  double q = 2.0 * static_cast<double>(n) * lambda1;
  if (!is_near_integer(q)) return false;
  if (out != nullptr) *out = static_cast<std::int64_t>(std::llround(q));
  return true;
}

Eigen::MatrixXcd daft_matrix(std::size_t n, const ChirpParams& cp) {
  if (n < 2) throw DimensionError("daft_matrix: n must be >= 2");
  Eigen::MatrixXcd m(n, n);
  const double inv_sqrt_n = 1.0 / std::sqrt(static_cast<double>(n));
  CVec l1(n), l2(n);
  for (std::size_t k = 0; k < n; ++k) {
    l1[k] = chirp_entry(cp.lambda1, k);
    l2[k] = chirp_entry(cp.lambda2, k);
  }
  for (std::size_t r = 0; r < n; ++r) {
    for (std::size_t c = 0; c < n; ++c) {
      double turns = static_cast<double>(r) * static_cast<double>(c) / static_cast<double>(n);
      m(r, c) = l2[r] * unit_phasor(turns - std::floor(turns)) * inv_sqrt_n * l1[c];
    }
  }
  return m;
}

TransformPlan::TransformPlan(std::size_t n, TransformKind kind, ChirpParams cp)
    : n_(n), kind_(kind), cp_(cp), fft_(n) {
  if (n < 2) throw DimensionError("TransformPlan: n must be >= 2");
  if (kind_ == TransformKind::kDft) cp_ = {};
  scale_ = 1.0 / std::sqrt(static_cast<double>(n));
  if (cp_.lambda1 != 0.0) {
    chirp1_.resize(n);
    chirp1_conj_.resize(n);
    for (std::size_t k = 0; k < n; ++k) {
      chirp1_[k] = chirp_entry(cp_.lambda1, k);
      chirp1_conj_[k] = std::conj(chirp1_[k]);
    }
  }
  if (cp_.lambda2 != 0.0) {
    chirp2_.resize(n);
    chirp2_conj_.resize(n);
    for (std::size_t k = 0; k < n; ++k) {
      chirp2_[k] = chirp_entry(cp_.lambda2, k);
      chirp2_conj_[k] = std::conj(chirp2_[k]);
    }
  }
}

void TransformPlan::apply(Direction dir, std::span<const cplx> in,
                          std::span<cplx> out) const {
  if (in.size() != n_ || out.size() != n_)
    throw DimensionError("TransformPlan::apply: length mismatch");
  const auto& k = simd::active();
  if (dir == Direction::kForward) {
    // out = Lambda2 * F * Lambda1 * in
    if (!chirp1_.empty())
      k.cmul(in.data(), chirp1_.data(), out.data(), n_);
    else
      std::copy(in.begin(), in.end(), out.begin());
    fft_.forward(out.data());
    k.cscale(out.data(), cplx{scale_, 0.0}, n_);
    if (!chirp2_.empty()) k.cmul(out.data(), chirp2_.data(), out.data(), n_);
  } else {
    // out = Lambda1^H * F^H * Lambda2^H * in
    if (!chirp2_conj_.empty())
      k.cmul(in.data(), chirp2_conj_.data(), out.data(), n_);
    else
      std::copy(in.begin(), in.end(), out.begin());
    fft_.inverse(out.data());
    k.cscale(out.data(), cplx{scale_, 0.0}, n_);
    if (!chirp1_conj_.empty())
      k.cmul(out.data(), chirp1_conj_.data(), out.data(), n_);
  }
}

}  // namespace afdm
