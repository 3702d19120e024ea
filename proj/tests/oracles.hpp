// Test-only reference implementations, independent of the library's
// computation paths.
#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <complex>
#include <vector>

#include "afdm/channel.hpp"
#include "afdm/common.hpp"
#include "afdm/constellation.hpp"

namespace oracle {

using afdm::cplx;
using afdm::CVec;

// Elementwise DAFT construction: exp(-j 2 pi (l2 m^2 + m k / n + l1 k^2)) / sqrt(n).
inline Eigen::MatrixXcd daft_elementwise(std::size_t n, double l1, double l2) {
  Eigen::MatrixXcd a(n, n);
  for (std::size_t m = 0; m < n; ++m)
    for (std::size_t k = 0; k < n; ++k) {
      double phase = l2 * static_cast<double>(m) * static_cast<double>(m) +
                     static_cast<double>(m) * static_cast<double>(k) / static_cast<double>(n) +
                     l1 * static_cast<double>(k) * static_cast<double>(k);
      a(m, k) = std::polar(1.0 / std::sqrt(static_cast<double>(n)),
                           -2.0 * afdm::kPi * phase);
    }
  return a;
}

// Brute-force per-sample doubly dispersive channel with explicit prefix
// insertion and removal: the transmitter prepends phase-rotated tail samples,
// the per-sample model r[n] = sum_p h_p e^{-j 2 pi f_p n / N} s_ext[n - ell_p]
// runs on the extended sequence, and the first N_cp received samples are
// discarded.
inline CVec sample_domain_received(const CVec& s,
                                   const std::vector<afdm::Path>& paths,
                                   const afdm::PrefixSpec& prefix) {
  const std::size_t n = s.size();
  const std::size_t ncp = prefix.length;
  std::vector<cplx> ext(n + ncp);
  for (std::size_t i = 0; i < ncp; ++i) {
    double np = static_cast<double>(i) - static_cast<double>(ncp);
    ext[i] = s[n - ncp + i] *
             std::polar(1.0, 2.0 * afdm::kPi * prefix.phase_turns(np, n));
  }
  for (std::size_t i = 0; i < n; ++i) ext[ncp + i] = s[i];

  CVec r(n, cplx{0.0, 0.0});
  for (const auto& p : paths) {
    auto ell = static_cast<std::int64_t>(std::llround(p.delay));
    for (std::size_t m = 0; m < n; ++m) {
      std::int64_t src = static_cast<std::int64_t>(ncp + m) - ell;
      if (src < 0) continue;  // beyond the prefix: channel memory exceeded
      double turns = p.doppler * static_cast<double>(m) / static_cast<double>(n);
      r[m] += p.gain * std::polar(1.0, -2.0 * afdm::kPi * turns) * ext[src];
    }
  }
  return r;
}

// Exhaustive symbol-wise posterior marginals p(x_b = a_j | y) for complex
// Gaussian noise of variance sigma2.
inline Eigen::MatrixXd map_posterior_marginals(const Eigen::MatrixXcd& xi,
                                               const CVec& y, double sigma2,
                                               const afdm::Constellation& c) {
  const std::size_t n = static_cast<std::size_t>(xi.rows());
  const unsigned m = c.order();
  const auto& pts = c.points();
  std::vector<unsigned> idx(n, 0);
  Eigen::VectorXcd x = Eigen::VectorXcd::Constant(n, pts[0]);
  Eigen::Map<const Eigen::VectorXcd> yv(y.data(), y.size());

  std::uint64_t count = 1;
  for (std::size_t i = 0; i < n; ++i) count *= m;
  std::vector<double> loglik(count);
  double maxll = -1e300;
  for (std::uint64_t it = 0;; ++it) {
    double ll = -(yv - xi * x).squaredNorm() / sigma2;
    loglik[it] = ll;
    maxll = std::max(maxll, ll);
    if (it + 1 == count) break;
    for (std::size_t p = 0;; ++p) {
      idx[p] = (idx[p] + 1) % m;
      x(p) = pts[idx[p]];
      if (idx[p] != 0) break;
    }
  }
  Eigen::MatrixXd marg = Eigen::MatrixXd::Zero(n, m);
  std::fill(idx.begin(), idx.end(), 0u);
  for (std::uint64_t it = 0;; ++it) {
    double w = std::exp(loglik[it] - maxll);
    for (std::size_t b = 0; b < n; ++b) marg(b, idx[b]) += w;
    if (it + 1 == count) break;
    for (std::size_t p = 0;; ++p) {
      idx[p] = (idx[p] + 1) % m;
      if (idx[p] != 0) break;
    }
  }
  for (std::size_t b = 0; b < n; ++b) marg.row(b) /= marg.row(b).sum();
  return marg;
}

inline double q_function(double x) { return 0.5 * std::erfc(x / std::sqrt(2.0)); }

}  // namespace oracle
