#include "afdm/channel.hpp"

#include <cmath>

namespace afdm {
namespace {

double sinc_fn(double t) {
  if (t == 0.0) return 1.0;
  double x = kPi * t;
  return std::sin(x) / x;
}

}  // namespace

void PathSet::validate() const {
  if (paths.empty()) throw ConfigError("PathSet: needs at least one path");
  for (const auto& p : paths) {
    if (p.delay < 0.0 || p.delay > ell_max + 1e-12)
      throw ConfigError("PathSet: delay outside [0, ell_max]");
    if (std::abs(p.doppler) > f_max + 1e-12)
      throw ConfigError("PathSet: |doppler| exceeds f_max");
  }
}

bool PathSet::all_integer() const {
  for (const auto& p : paths)
    if (!is_near_integer(p.delay) || !is_near_integer(p.doppler)) return false;
  return true;
}

double PulseKernel::eval(double t) const {
  switch (shape) {
    case PulseShape::kRectangular:
      return (t >= -0.5 && t < 0.5) ? 1.0 : 0.0;
    case PulseShape::kSinc:
      if (std::abs(t) > half_width) return 0.0;
      return sinc_fn(t);
    case PulseShape::kRaisedCosine: {
      if (std::abs(t) > half_width) return 0.0;
      if (rolloff == 0.0) return sinc_fn(t);
      double denom = 1.0 - (2.0 * rolloff * t) * (2.0 * rolloff * t);
      if (std::abs(denom) < 1e-10) {
        // removable singularity at |t| = 1/(2 alpha)
        return (kPi / 4.0) * sinc_fn(1.0 / (2.0 * rolloff));
      }
      return sinc_fn(t) * std::cos(kPi * rolloff * t) / denom;
    }
  }
  return 0.0;
}

double PrefixSpec::phase_turns(double arg, std::size_t n) const {
  if (phase == PrefixPhase::kZero) return 0.0;
  if (phase_arg == CppPhaseArg::kIntegerPart) arg = std::floor(arg);
  double nn = static_cast<double>(n);
  return lambda1 * (nn * nn + 2.0 * nn * arg);
}

void ArrayGeometry::validate(std::size_t n_paths) const {
  if (n_tx < 1 || n_rx < 1) throw ConfigError("ArrayGeometry: antenna counts must be >= 1");
  if (d_tx <= 0.0 || d_rx <= 0.0 || lambda_c <= 0.0)
    throw ConfigError("ArrayGeometry: spacings and wavelength must be positive");
  if (aod.size() != n_paths || aoa.size() != n_paths)
    throw ConfigError("ArrayGeometry: angle lists must have one entry per path");
}

CVec doppler_diag(std::size_t n, double f) {
  CVec d(n);
  for (std::size_t k = 0; k < n; ++k)
    d[k] = unit_phasor(f * static_cast<double>(k) / static_cast<double>(n));
  return d;
}

Eigen::MatrixXcd per_path_idid(std::size_t n, std::int64_t ell, double f,
                               const PrefixSpec& prefix) {
  if (ell < 0 || ell >= static_cast<std::int64_t>(n))
    throw ConfigError("per_path_idid: integer delay must lie in {0..n-1}; "
                      "use the fractional-delay constructor otherwise");
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(n, n);
  CVec v = doppler_diag(n, f);
  for (std::size_t r = 0; r < n; ++r) {
    std::size_t c = static_cast<std::size_t>(mod_n(static_cast<std::int64_t>(r) - ell, n));
    cplx phi{1.0, 0.0};
    if (static_cast<std::int64_t>(r) < ell) {
      // diag entry r carries e^{-j 2 pi phi_cp(ell - r)}
      phi = unit_phasor(prefix.phase_turns(static_cast<double>(ell - static_cast<std::int64_t>(r)), n));
    }
    m(r, c) = phi * v[r];
  }
  return m;
}

Eigen::MatrixXcd frac_delay_matrix(std::size_t n, double ell, const PulseKernel& k) {
  if (ell < 0.0) throw ConfigError("frac_delay_matrix: delay must be nonnegative");
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(n, n);
  for (std::size_t r = 0; r < n; ++r)
    for (std::size_t c = 0; c < n; ++c) {
      double g = k.eval(static_cast<double>(r) - static_cast<double>(c) - ell);
      if (g != 0.0) m(r, c) = g;
    }
  return m;
}

Eigen::MatrixXcd frac_prefix_matrix(std::size_t n, double ell, const PulseKernel& k,
                                    const PrefixSpec& prefix) {
  if (ell < 0.0) throw ConfigError("frac_prefix_matrix: delay must be nonnegative");
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(n, n);
  for (std::size_t r = 0; r < n; ++r)
    for (std::size_t c = 0; c < n; ++c) {
      double arg = static_cast<double>(r) - static_cast<double>(c) - ell;
      double g = k.eval(arg + static_cast<double>(n));
      if (g != 0.0) m(r, c) = g * std::polar(1.0, kTwoPi * prefix.phase_turns(arg, n));
    }
  return m;
}

Eigen::MatrixXcd psi_matrix(std::size_t n, double ell, const PulseKernel& k,
                            const PrefixSpec& prefix) {
  return frac_delay_matrix(n, ell, k) + frac_prefix_matrix(n, ell, k, prefix);
}

ChannelOperator composite_channel(std::size_t n, const PathSet& ps,
                                  const PulseKernel& k, const PrefixSpec& prefix,
                                  bool circulant_approx) {
  ps.validate();
  bool integer_delays = true;
  for (const auto& p : ps.paths)
    if (!is_near_integer(p.delay)) integer_delays = false;
  if (integer_delays) {
    // Classic decomposition covers both IDID and IDFD: the Doppler diagonal
    // is exact for fractional f, only the delay must sit on the grid.
    Eigen::MatrixXcd h = Eigen::MatrixXcd::Zero(n, n);
    for (const auto& p : ps.paths)
      h += p.gain * per_path_idid(n, static_cast<std::int64_t>(std::llround(p.delay)),
                                  p.doppler, prefix);
    return {std::move(h), ChannelStructure::kIdidSparse};
  }
  if (circulant_approx) {
    PathSet virt = virtual_idid_expansion(ps, k);
    Eigen::MatrixXcd h = Eigen::MatrixXcd::Zero(n, n);
    for (const auto& p : virt.paths) {
      std::int64_t ell = mod_n(static_cast<std::int64_t>(std::llround(p.delay)),
                               static_cast<std::int64_t>(n));
      h += p.gain * per_path_idid(n, ell, p.doppler, prefix);
    }
    return {std::move(h), ChannelStructure::kFdfdBanded};
  }
  Eigen::MatrixXcd h = Eigen::MatrixXcd::Zero(n, n);
  for (const auto& p : ps.paths) {
    Eigen::MatrixXcd psi = psi_matrix(n, p.delay, k, prefix);
    CVec v = doppler_diag(n, p.doppler);
    for (std::size_t r = 0; r < n; ++r) psi.row(r) *= p.gain * v[r];
    h += psi;
  }
  return {std::move(h), ChannelStructure::kFdfdBanded};
}

PathSet virtual_idid_expansion(const PathSet& ps, const PulseKernel& k) {
  ps.validate();
  PathSet out;
  out.f_max = ps.f_max;
  double max_delay = 0.0;
  for (const auto& p : ps.paths) {
    if (is_near_integer(p.delay)) {
      out.paths.push_back({p.gain, std::round(p.delay), p.doppler});
      max_delay = std::max(max_delay, std::round(p.delay));
      continue;
    }
    double base = std::floor(p.delay);
    double eps = p.delay - base;
    for (int q = -k.half_width; q <= k.half_width; ++q) {
      double g = k.eval(static_cast<double>(q) - eps);
      out.paths.push_back({p.gain * g, base + q, p.doppler});
      max_delay = std::max(max_delay, base + q);
    }
  }
  out.ell_max = max_delay;
  return out;
}

Eigen::MatrixXcd spatial_signature(const ArrayGeometry& g, double aod, double aoa) {
  Eigen::VectorXcd at(g.n_tx), ar(g.n_rx);
  for (int t = 0; t < g.n_tx; ++t) {
    double psi = g.d_tx * t / g.lambda_c * std::sin(aod);
    at(t) = std::polar(1.0, kTwoPi * psi);
  }
  for (int r = 0; r < g.n_rx; ++r) {
    double psi = g.d_rx * r / g.lambda_c * std::sin(aoa);
    ar(r) = std::polar(1.0, kTwoPi * psi);
  }
  return ar * at.adjoint();
}

Eigen::MatrixXcd mimo_channel(const ArrayGeometry& g, std::size_t n,
                              const PathSet& ps, const PulseKernel& k,
                              const PrefixSpec& prefix) {
  ps.validate();
  g.validate(ps.size());
  Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(g.n_rx * n, g.n_tx * n);
  for (std::size_t p = 0; p < ps.size(); ++p) {
    const Path& path = ps.paths[p];
    Eigen::MatrixXcd theta = spatial_signature(g, g.aod[p], g.aoa[p]);
    Eigen::MatrixXcd siso;
    if (is_near_integer(path.delay)) {
      siso = per_path_idid(n, static_cast<std::int64_t>(std::llround(path.delay)),
                           path.doppler, prefix);
    } else {
      siso = psi_matrix(n, path.delay, k, prefix);
      CVec v = doppler_diag(n, path.doppler);
      for (std::size_t r = 0; r < n; ++r) siso.row(r) *= v[r];
    }
    for (int r = 0; r < g.n_rx; ++r)
      for (int t = 0; t < g.n_tx; ++t)
        out.block(r * n, t * n, n, n) += path.gain * theta(r, t) * siso;
  }
  return out;
}

void apply_idid_paths(std::span<const Path> paths, const PrefixSpec& prefix,
                      std::span<const cplx> in, std::span<cplx> out) {
  const std::size_t n = in.size();
  std::fill(out.begin(), out.end(), cplx{0.0, 0.0});
  for (const auto& p : paths) {
    std::int64_t ell = mod_n(static_cast<std::int64_t>(std::llround(p.delay)),
                             static_cast<std::int64_t>(n));
    for (std::size_t r = 0; r < n; ++r) {
      std::size_t c = static_cast<std::size_t>(mod_n(static_cast<std::int64_t>(r) - ell,
                                                     static_cast<std::int64_t>(n)));
      cplx coeff = unit_phasor(p.doppler * static_cast<double>(r) / static_cast<double>(n));
      if (static_cast<std::int64_t>(r) < ell)
        coeff *= unit_phasor(prefix.phase_turns(static_cast<double>(ell - static_cast<std::int64_t>(r)), n));
      out[r] += p.gain * coeff * in[c];
    }
  }
}

int band_halfwidth(const Eigen::MatrixXcd& m, double rel_tol) {
  const std::int64_t n = m.rows();
  double maxabs = 0.0;
  for (std::int64_t r = 0; r < n; ++r)
    for (std::int64_t c = 0; c < n; ++c) maxabs = std::max(maxabs, std::abs(m(r, c)));
  if (maxabs == 0.0) return 0;
  int j = 0;
  for (std::int64_t r = 0; r < n; ++r)
    for (std::int64_t c = 0; c < n; ++c) {
      if (std::abs(m(r, c)) <= rel_tol * maxabs) continue;
      j = std::max<int>(j, static_cast<int>(std::abs(centered_offset(c - r, n))));
    }
  return j;
}

}  // namespace afdm
