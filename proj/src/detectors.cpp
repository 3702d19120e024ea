#include "afdm/detectors.hpp"

#include <Eigen/QR>
#include <algorithm>
#include <cmath>
#include <limits>
#include <memory>

namespace afdm {
namespace {

std::vector<unsigned> slice_all(const CVec& soft, const Constellation& c) {
  std::vector<unsigned> hard(soft.size());
  for (std::size_t i = 0; i < soft.size(); ++i) hard[i] = c.slice(soft[i]);
  return hard;
}

double residual(const Eigen::MatrixXcd& xi, std::span<const cplx> y, const CVec& x) {
  Eigen::Map<const Eigen::VectorXcd> xv(x.data(), x.size());
  Eigen::Map<const Eigen::VectorXcd> yv(y.data(), y.size());
  return (yv - xi * xv).norm();
}

double sparse_residual(const SparseChannel& xi, std::span<const cplx> y, const CVec& x) {
  CVec r(y.begin(), y.end());
  for (std::size_t b = 0; b < xi.n; ++b)
    for (const auto& [a, v] : xi.cols[b]) r[a] -= v * x[b];
  double acc = 0.0;
  for (const auto& v : r) acc += std::norm(v);
  return std::sqrt(acc);
}

}  // namespace

void DetectorConfig::validate() const {
  if (damping <= 0.0 || damping > 1.0) throw ConfigError("DetectorConfig: damping in (0,1]");
  if (gamma <= 0.0) throw ConfigError("DetectorConfig: gamma > 0");
  if (max_iter < 1) throw ConfigError("DetectorConfig: max_iter >= 1");
}

SparseChannel SparseChannel::from_dense(const Eigen::MatrixXcd& xi, double rel_tol) {
  SparseChannel s;
  s.n = static_cast<std::size_t>(xi.rows());
  s.cols.resize(s.n);
  double maxabs = 0.0;
  for (Eigen::Index r = 0; r < xi.rows(); ++r)
    for (Eigen::Index c = 0; c < xi.cols(); ++c)
      maxabs = std::max(maxabs, std::abs(xi(r, c)));
  for (Eigen::Index c = 0; c < xi.cols(); ++c)
    for (Eigen::Index r = 0; r < xi.rows(); ++r)
      if (std::abs(xi(r, c)) > rel_tol * maxabs)
        s.cols[static_cast<std::size_t>(c)].push_back(
            {static_cast<std::size_t>(r), xi(r, c)});
  return s;
}

SparseChannel SparseChannel::from_afdm_paths(std::size_t n, const ChirpParams& cp,
                                             std::span<const Path> paths) {
  SparseChannel s;
  s.n = n;
  s.cols.resize(n);
  for (const auto& p : paths) {
    if (!is_near_integer(p.delay) || !is_near_integer(p.doppler))
      throw ConfigError("SparseChannel: integer taps required (expand fractional paths first)");
    std::int64_t ell = static_cast<std::int64_t>(std::llround(p.delay));
    std::int64_t f = static_cast<std::int64_t>(std::llround(p.doppler));
    std::int64_t loc = path_loc(n, cp, ell, f);
    for (std::size_t a = 0; a < n; ++a) {
      std::size_t b = static_cast<std::size_t>(
          mod_n(static_cast<std::int64_t>(a) + loc, static_cast<std::int64_t>(n)));
      s.cols[b].push_back({a, p.gain * afdm_path_coefficient(n, cp, ell, p.doppler, a, b)});
    }
  }
  // merge entries from coincident locs
  for (auto& col : s.cols) {
    std::sort(col.begin(), col.end(),
              [](const auto& x, const auto& y) { return x.first < y.first; });
    std::vector<std::pair<std::size_t, cplx>> merged;
    for (const auto& e : col) {
      if (!merged.empty() && merged.back().first == e.first)
        merged.back().second += e.second;
      else
        merged.push_back(e);
    }
    col = std::move(merged);
  }
  return s;
}

Eigen::MatrixXcd SparseChannel::dense() const {
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(n, n);
  for (std::size_t c = 0; c < n; ++c)
    for (const auto& [r, v] : cols[c]) m(r, c) += v;
  return m;
}

DetectionResult detect_zf(const Eigen::MatrixXcd& xi, std::span<const cplx> y,
                          const Constellation& c) {
  const Eigen::Index n = xi.rows();
  Eigen::Map<const Eigen::VectorXcd> yv(y.data(), y.size());
  Eigen::ColPivHouseholderQR<Eigen::MatrixXcd> qr(xi);
  if (qr.rank() < n) throw SingularMatrixError("detect_zf: rank-deficient channel");
  Eigen::VectorXcd x = qr.solve(yv);
  DetectionResult res;
  res.soft.assign(x.data(), x.data() + n);
  res.hard = slice_all(res.soft, c);
  res.residual_norm = residual(xi, y, res.soft);
  return res;
}

DetectionResult detect_mmse(const Eigen::MatrixXcd& xi, std::span<const cplx> y,
                            double noise_var, const Constellation& c) {
  const Eigen::Index n = xi.rows();
  Eigen::Map<const Eigen::VectorXcd> yv(y.data(), y.size());
  Eigen::MatrixXcd gram = xi.adjoint() * xi;
  gram.diagonal().array() += noise_var;
  Eigen::VectorXcd rhs = xi.adjoint() * yv;
  Eigen::VectorXcd x = gram.ldlt().solve(rhs);
  DetectionResult res;
  res.soft.assign(x.data(), x.data() + n);
  res.hard = slice_all(res.soft, c);
  res.residual_norm = residual(xi, y, res.soft);
  return res;
}

// ---------------------------------------------------------------------------
// Banded LDL^H MMSE
// ---------------------------------------------------------------------------
namespace {

// Hermitian positive-definite solver for a cyclically banded Gamma
// (half-bandwidth w plus wrap-around corners), through the bordered split
//
//   Gamma = [ G11  G1b ]   with G11 ((n-w) x (n-w)) strictly banded and the
//           [ Gb1  Gbb ]   last w indices forming the border.
//
// G11 = L D L^H in band storage; the border is eliminated by its Schur
// complement. Exact solve in O(w^2 n).
class CyclicBandedLdl {
 public:
  template <typename ColFn>
  CyclicBandedLdl(std::size_t n, std::size_t w, ColFn gamma_col) : n_(n), w_(w) {
    k_ = n_ - w_;
    band_.assign((w_ + 1) * k_, cplx{0.0, 0.0});
    d_.assign(k_, 0.0);
    panel_.assign(k_ * w_, cplx{0.0, 0.0});
    sb_.resize(w_, w_);
    CVec col(n_);
    for (std::size_t j = 0; j < k_; ++j) {
      gamma_col(j, col);
      for (std::size_t d = 0; d <= w_ && j + d < k_; ++d) band_[d * k_ + j] = col[j + d];
    }
    // Gamma columns of the border give both the panel (G1b) and Gbb.
    for (std::size_t b = 0; b < w_; ++b) {
      gamma_col(k_ + b, col);
      for (std::size_t j = 0; j < k_; ++j) panel_[b * k_ + j] = col[j];
      for (std::size_t b2 = 0; b2 < w_; ++b2) sb_(b2, b) = col[k_ + b2];
    }
    factor();
  }

  bool ok() const { return ok_; }
  std::uint64_t flops() const { return flops_; }

  // Solves Gamma x = rhs in place.
  void solve(CVec& rhs) {
    // z1 = L^{-1} y1
    forward_banded(rhs.data());
    // u = D^{-1} z1
    for (std::size_t j = 0; j < k_; ++j) {
      rhs[j] /= d_[j];
      flops_ += 2;
    }
    // xb = S^{-1} (yb - P^H u)
    if (w_ > 0) {
      Eigen::VectorXcd tmp(w_);
      for (std::size_t b = 0; b < w_; ++b) {
        cplx acc = rhs[k_ + b];
        for (std::size_t j = 0; j < k_; ++j) acc -= std::conj(panel_[b * k_ + j]) * rhs[j];
        tmp(b) = acc;
      }
      flops_ += 10ull * w_ * k_;
      tmp = sb_ldlt_.solve(tmp);
      flops_ += 4ull * w_ * w_;
      // v = u - D^{-1} P xb
      for (std::size_t j = 0; j < k_; ++j) {
        cplx acc{0.0, 0.0};
        for (std::size_t b = 0; b < w_; ++b) acc += panel_[b * k_ + j] * tmp(b);
        rhs[j] -= acc / d_[j];
      }
      flops_ += 10ull * w_ * k_;
      for (std::size_t b = 0; b < w_; ++b) rhs[k_ + b] = tmp(b);
    }
    // x1 = L^{-H} v
    backward_banded(rhs.data());
  }

 private:
  void forward_banded(cplx* v) {
    for (std::size_t j = 0; j < k_; ++j) {
      cplx zj = v[j];
      for (std::size_t d = 1; d <= w_ && j + d < k_; ++d) {
        v[j + d] -= band_[d * k_ + j] * zj;
        flops_ += 8;
      }
    }
  }

  void backward_banded(cplx* v) {
    for (std::size_t j = k_; j-- > 0;) {
      cplx acc = v[j];
      for (std::size_t d = 1; d <= w_ && j + d < k_; ++d) {
        acc -= std::conj(band_[d * k_ + j]) * v[j + d];
        flops_ += 8;
      }
      v[j] = acc;
    }
  }

  void factor() {
    // banded LDL^H of G11 in place
    for (std::size_t j = 0; j < k_; ++j) {
      double dj = band_[j].real();
      std::size_t lo = j > w_ ? j - w_ : 0;
      for (std::size_t p = lo; p < j; ++p) {
        cplx l = band_[(j - p) * k_ + p];
        dj -= std::norm(l) * d_[p];
        flops_ += 4;
      }
      if (!(dj > 0.0)) {
        ok_ = false;
        return;
      }
      d_[j] = dj;
      for (std::size_t d = 1; d <= w_ && j + d < k_; ++d) {
        cplx v = band_[d * k_ + j];
        std::size_t i = j + d;
        std::size_t lo2 = i > w_ ? i - w_ : 0;
        for (std::size_t p = std::max(lo, lo2); p < j; ++p) {
          v -= band_[(i - p) * k_ + p] * std::conj(band_[(j - p) * k_ + p]) * d_[p];
          flops_ += 10;
        }
        band_[d * k_ + j] = v / dj;
        flops_ += 2;
      }
    }
    // P := L^{-1} G1b, one banded forward solve per border column
    for (std::size_t b = 0; b < w_; ++b) {
      forward_banded(panel_.data() + b * k_);
    }
    // S = Gbb - P^H D^{-1} P
    for (std::size_t b = 0; b < w_; ++b)
      for (std::size_t b2 = 0; b2 < w_; ++b2) {
        cplx acc{0.0, 0.0};
        for (std::size_t j = 0; j < k_; ++j) {
          acc += std::conj(panel_[b2 * k_ + j]) * panel_[b * k_ + j] / d_[j];
          flops_ += 10;
        }
        sb_(b2, b) -= acc;
      }
    if (w_ > 0) {
      sb_ldlt_.compute(sb_);
      if (sb_ldlt_.info() != Eigen::Success || sb_ldlt_.vectorD().real().minCoeff() <= 0.0)
        ok_ = false;
      flops_ += 2ull * w_ * w_ * w_;
    }
  }

  std::size_t n_, w_, k_;
  std::vector<cplx> band_;   // band_[d*k_+j] = G/L entry (j+d, j)
  std::vector<double> d_;
  std::vector<cplx> panel_;  // k_ x w_, column-major: G1b then L^{-1} G1b
  Eigen::MatrixXcd sb_;
  Eigen::LDLT<Eigen::MatrixXcd> sb_ldlt_;
  bool ok_ = true;
  std::uint64_t flops_ = 0;
};

SparseChannel truncate_band(const SparseChannel& xi, int band_j) {
  SparseChannel out;
  out.n = xi.n;
  out.cols.resize(xi.n);
  const std::int64_t n = static_cast<std::int64_t>(xi.n);
  for (std::size_t b = 0; b < xi.n; ++b)
    for (const auto& [a, v] : xi.cols[b]) {
      std::int64_t off =
          centered_offset(static_cast<std::int64_t>(b) - static_cast<std::int64_t>(a), n);
      if (std::llabs(off) <= band_j) out.cols[b].push_back({a, v});
    }
  return out;
}

int measure_band(const SparseChannel& xi) {
  const std::int64_t n = static_cast<std::int64_t>(xi.n);
  double maxabs = 0.0;
  for (const auto& col : xi.cols)
    for (const auto& [r, v] : col) maxabs = std::max(maxabs, std::abs(v));
  int j = 0;
  for (std::size_t b = 0; b < xi.n; ++b)
    for (const auto& [a, v] : xi.cols[b]) {
      if (std::abs(v) <= 1e-12 * maxabs) continue;
      std::int64_t off =
          centered_offset(static_cast<std::int64_t>(b) - static_cast<std::int64_t>(a), n);
      j = std::max<int>(j, static_cast<int>(std::llabs(off)));
    }
  return j;
}

}  // namespace

DetectionResult detect_ldl_mmse(const SparseChannel& xi_in, std::span<const cplx> y,
                                double noise_var, const Constellation& c,
                                int band_j) {
  const std::size_t n = xi_in.n;
  if (band_j < 0) band_j = measure_band(xi_in);
  SparseChannel xi = truncate_band(xi_in, band_j);

  // Row-major view for Gamma = Xi Xi^H + sigma^2 I. Solving Gamma d = y and
  // then x = Xi^H d equals the normal-equation MMSE
  // (Xi^H Xi + s I)^{-1} Xi^H y by the push-through identity.
  std::vector<std::vector<std::pair<std::size_t, cplx>>> rows(n);
  for (std::size_t b = 0; b < n; ++b)
    for (const auto& [a, v] : xi.cols[b]) rows[a].push_back({b, v});

  const std::size_t w =
      std::min<std::size_t>(2 * static_cast<std::size_t>(band_j), n > 0 ? n - 1 : 0);
  DetectionResult res;

  bool use_dense = n - w <= w;
  std::unique_ptr<CyclicBandedLdl> solver;
  if (!use_dense) {
    auto gamma_col = [&](std::size_t j, CVec& col) {
      std::fill(col.begin(), col.end(), cplx{0.0, 0.0});
      for (const auto& [b, vj] : rows[j])
        for (const auto& [a2, vi] : xi.cols[b]) col[a2] += vi * std::conj(vj);
      col[j] += noise_var;
    };
    solver = std::make_unique<CyclicBandedLdl>(n, w, gamma_col);
    if (!solver->ok()) {
      use_dense = true;
      res.dense_fallback = true;
    }
  }

  CVec d(y.begin(), y.end());
  if (use_dense) {
    Eigen::MatrixXcd xd = xi.dense();
    Eigen::MatrixXcd gram = xd * xd.adjoint();
    gram.diagonal().array() += noise_var;
    Eigen::Map<const Eigen::VectorXcd> yv(y.data(), y.size());
    Eigen::VectorXcd dv = gram.ldlt().solve(yv);
    std::copy(dv.data(), dv.data() + n, d.begin());
  } else {
    solver->solve(d);
    res.flops = solver->flops();
  }

  // x = Xi^H d
  res.soft.assign(n, cplx{0.0, 0.0});
  for (std::size_t b = 0; b < n; ++b) {
    cplx acc{0.0, 0.0};
    for (const auto& [a, v] : xi.cols[b]) acc += std::conj(v) * d[a];
    res.soft[b] = acc;
  }
  res.hard = slice_all(res.soft, c);
  res.residual_norm = sparse_residual(xi, y, res.soft);
  return res;
}

DetectionResult detect_ldl_mmse(const Eigen::MatrixXcd& xi, std::span<const cplx> y,
                                double noise_var, const Constellation& c,
                                int band_j) {
  return detect_ldl_mmse(SparseChannel::from_dense(xi), y, noise_var, c, band_j);
}

DetectionResult detect_mrc(const SparseChannel& xi, std::span<const cplx> y,
                           double noise_var, const Constellation& c,
                           const DetectorConfig& cfg) {
  cfg.validate();
  const std::size_t n = xi.n;
  CVec x(n, cplx{0.0, 0.0});
  CVec delta(y.begin(), y.end());
  std::vector<double> d(n, 0.0);
  for (std::size_t b = 0; b < n; ++b)
    for (const auto& [a, v] : xi.cols[b]) d[b] += std::norm(v);

  DetectionResult res;
  res.converged = false;
  int used = cfg.max_iter;
  for (int t = 1; t <= cfg.max_iter; ++t) {
    double change = 0.0;
    for (std::size_t b = 0; b < n; ++b) {
      cplx g = d[b] * x[b];
      for (const auto& [a, v] : xi.cols[b]) g += std::conj(v) * delta[a];
      cplx xb = g / (d[b] + noise_var);
      cplx diff = xb - x[b];
      change += std::norm(diff);
      for (const auto& [a, v] : xi.cols[b]) delta[a] -= v * diff;
      x[b] = xb;
    }
    if (std::sqrt(change) < cfg.tol) {
      res.converged = true;
      used = t;
      break;
    }
  }
  res.iterations = used;
  res.soft = std::move(x);
  res.hard = slice_all(res.soft, c);
  double acc = 0.0;
  for (const auto& v : delta) acc += std::norm(v);
  res.residual_norm = std::sqrt(acc);
  return res;
}

// ---------------------------------------------------------------------------
// Message passing (flooding schedule)
// ---------------------------------------------------------------------------
static Eigen::MatrixXd mp_run(const SparseChannel& xi, std::span<const cplx> y,
                              double noise_var, const Constellation& c,
                              const DetectorConfig& cfg, DetectionResult* out) {
  cfg.validate();
  const std::size_t n = xi.n;
  const unsigned m = c.order();
  const auto& pts = c.points();

  // row adjacency: a -> (b, edge index within cols[b])
  std::vector<std::vector<std::pair<std::size_t, std::size_t>>> rows(n);
  for (std::size_t b = 0; b < n; ++b)
    for (std::size_t e = 0; e < xi.cols[b].size(); ++e)
      rows[xi.cols[b][e].first].push_back({b, e});

  // messages per edge
  std::vector<std::vector<std::vector<double>>> pmf(n);
  std::vector<std::vector<cplx>> mu(n);
  std::vector<std::vector<double>> var(n);
  for (std::size_t b = 0; b < n; ++b) {
    pmf[b].assign(xi.cols[b].size(), std::vector<double>(m, 1.0 / m));
    mu[b].assign(xi.cols[b].size(), cplx{0.0, 0.0});
    var[b].assign(xi.cols[b].size(), noise_var);
  }

  const double var_floor = std::max(1e-12 * noise_var, 1e-30);
  Eigen::MatrixXd beliefs = Eigen::MatrixXd::Constant(n, m, 1.0 / m);
  Eigen::MatrixXd best_beliefs = beliefs;
  double best_eta = -1.0;
  int used = cfg.max_iter;
  bool converged = false;

  for (int t = 1; t <= cfg.max_iter; ++t) {
    // Observation nodes: totals per row, then leave-one-out messages.
    for (std::size_t a = 0; a < n; ++a) {
      cplx mu_tot{0.0, 0.0};
      double var_tot = 0.0;
      for (const auto& [b, e] : rows[a]) {
        const cplx coeff = xi.cols[b][e].second;
        const auto& p = pmf[b][e];
        cplx mean{0.0, 0.0};
        double power = 0.0;
        for (unsigned j = 0; j < m; ++j) {
          mean += p[j] * pts[j];
          power += p[j] * std::norm(pts[j]);
        }
        cplx first = mean * coeff;
        double second = power * std::norm(coeff) - std::norm(first);
        mu_tot += first;
        var_tot += second;
        mu[b][e] = first;  // stash own contribution
        var[b][e] = second;
      }
      for (const auto& [b, e] : rows[a]) {
        cplx own = mu[b][e];
        double own_var = var[b][e];
        mu[b][e] = mu_tot - own;
        var[b][e] = std::max(var_tot - own_var + noise_var, var_floor);
      }
    }

    // Variable nodes: damped PMF updates; beliefs take the full product.
    for (std::size_t b = 0; b < n; ++b) {
      const std::size_t deg = xi.cols[b].size();
      if (deg == 0) continue;
      std::vector<std::vector<double>> logq(deg, std::vector<double>(m));
      for (std::size_t e = 0; e < deg; ++e) {
        const std::size_t a = xi.cols[b][e].first;
        const cplx coeff = xi.cols[b][e].second;
        double dmin = std::numeric_limits<double>::infinity();
        std::vector<double> dist(m);
        for (unsigned j = 0; j < m; ++j) {
          dist[j] = std::norm(y[a] - mu[b][e] - pts[j] * coeff) / var[b][e];
          dmin = std::min(dmin, dist[j]);
        }
        double z = 0.0;
        for (unsigned j = 0; j < m; ++j) z += std::exp(-(dist[j] - dmin));
        double logz = std::log(z);
        for (unsigned j = 0; j < m; ++j) logq[e][j] = -(dist[j] - dmin) - logz;
      }
      std::vector<double> logsum(m, 0.0);
      for (std::size_t e = 0; e < deg; ++e)
        for (unsigned j = 0; j < m; ++j) logsum[j] += logq[e][j];
      double bmax = -std::numeric_limits<double>::infinity();
      for (unsigned j = 0; j < m; ++j) bmax = std::max(bmax, logsum[j]);
      double bz = 0.0;
      for (unsigned j = 0; j < m; ++j) bz += std::exp(logsum[j] - bmax);
      for (unsigned j = 0; j < m; ++j) beliefs(b, j) = std::exp(logsum[j] - bmax) / bz;
      for (std::size_t e = 0; e < deg; ++e) {
        double pmax = -std::numeric_limits<double>::infinity();
        std::vector<double> lp(m);
        for (unsigned j = 0; j < m; ++j) {
          lp[j] = logsum[j] - logq[e][j];
          pmax = std::max(pmax, lp[j]);
        }
        double z = 0.0;
        for (unsigned j = 0; j < m; ++j) z += std::exp(lp[j] - pmax);
        auto& p = pmf[b][e];
        for (unsigned j = 0; j < m; ++j) {
          double pt = std::exp(lp[j] - pmax) / z;
          p[j] = cfg.damping * pt + (1.0 - cfg.damping) * p[j];
        }
      }
    }

    double eta = 0.0;
    for (std::size_t b = 0; b < n; ++b)
      if (beliefs.row(b).maxCoeff() >= 1.0 - cfg.gamma) eta += 1.0;
    eta /= static_cast<double>(n);
    if (eta > best_eta) {
      best_eta = eta;
      best_beliefs = beliefs;
    }
    if (eta == 1.0) {
      converged = true;
      used = t;
      break;
    }
    if (eta < best_eta - cfg.patience_eps) {
      used = t;
      break;
    }
  }

  if (out != nullptr) {
    out->iterations = used;
    out->converged = converged;
    out->soft.assign(n, cplx{0.0, 0.0});
    out->hard.assign(n, 0);
    for (std::size_t b = 0; b < n; ++b) {
      Eigen::Index j;
      best_beliefs.row(b).maxCoeff(&j);
      out->hard[b] = static_cast<unsigned>(j);
      cplx mean{0.0, 0.0};
      for (unsigned jj = 0; jj < m; ++jj) mean += best_beliefs(b, jj) * pts[jj];
      out->soft[b] = mean;
    }
  }
  return best_beliefs;
}

DetectionResult detect_mp(const SparseChannel& xi, std::span<const cplx> y,
                          double noise_var, const Constellation& c,
                          const DetectorConfig& cfg) {
  DetectionResult res;
  mp_run(xi, y, noise_var, c, cfg, &res);
  return res;
}

Eigen::MatrixXd mp_beliefs(const SparseChannel& xi, std::span<const cplx> y,
                           double noise_var, const Constellation& c,
                           const DetectorConfig& cfg) {
  return mp_run(xi, y, noise_var, c, cfg, nullptr);
}

DetectionResult detect_map_oracle(const Eigen::MatrixXcd& xi, std::span<const cplx> y,
                                  double noise_var, const Constellation& c) {
  (void)noise_var;  // the argmin of ||y - Xi x||^2 is noise-level free
  const std::size_t n = static_cast<std::size_t>(xi.rows());
  const unsigned m = c.order();
  double total = std::pow(static_cast<double>(m), static_cast<double>(n));
  if (total > 1e7) throw ConfigError("detect_map_oracle: M^N exceeds 1e7");

  const auto& pts = c.points();
  std::vector<unsigned> idx(n, 0);
  Eigen::VectorXcd x = Eigen::VectorXcd::Constant(n, pts[0]);
  Eigen::Map<const Eigen::VectorXcd> yv(y.data(), y.size());

  double best_cost = std::numeric_limits<double>::infinity();
  std::vector<unsigned> best = idx;
  const std::uint64_t count = static_cast<std::uint64_t>(total);
  for (std::uint64_t it = 0;; ++it) {
    double cost = (yv - xi * x).squaredNorm();
    if (cost < best_cost) {
      best_cost = cost;
      best = idx;
    }
    if (it + 1 == count) break;
    for (std::size_t p = 0;; ++p) {
      idx[p] = (idx[p] + 1) % m;
      x(p) = pts[idx[p]];
      if (idx[p] != 0) break;
    }
  }
  DetectionResult res;
  res.hard = best;
  res.soft.resize(n);
  for (std::size_t i = 0; i < n; ++i) res.soft[i] = pts[best[i]];
  res.residual_norm = std::sqrt(best_cost);
  return res;
}

}  // namespace afdm
