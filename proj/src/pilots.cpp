#include "afdm/pilots.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <map>

namespace afdm {
namespace {

// sum_{n=0}^{N-1} e^{+j 2 pi n u / N}: N at u = 0 (mod N), Dirichlet ratio
// elsewhere.
cplx dirichlet_sum(double u, std::size_t n) {
  double nn = static_cast<double>(n);
  double um = u - nn * std::floor(u / nn);
  if (std::abs(um) < 1e-12 || std::abs(um - nn) < 1e-12) return {nn, 0.0};
  double num = std::sin(kPi * um);
  double den = std::sin(kPi * um / nn);
  return std::polar(num / den, kPi * um * (nn - 1.0) / nn);
}

struct Candidate {
  std::int64_t ell;
  std::int64_t f;
  std::size_t bin;
  double metric;
};

std::int64_t stride_or_throw(std::size_t n, const ChirpParams& cp) {
  std::int64_t q = 0;
  if (!cp.integer_stride(n, &q))
    throw ConfigError("estimator: DAFT-domain estimation requires 2*N*lambda1 integral");
  return q;
}

// Doppler candidates ordered 0, -1, +1, -2, +2, ... so that argmax ties
// resolve toward smaller |f|.
std::vector<std::int64_t> doppler_order(std::int64_t fmax) {
  std::vector<std::int64_t> order{0};
  for (std::int64_t v = 1; v <= fmax; ++v) {
    order.push_back(-v);
    order.push_back(v);
  }
  return order;
}

}  // namespace

void PilotLayout::validate() const {
  if (n == 0 || positions.empty()) throw ConfigError("PilotLayout: empty layout");
  for (std::size_t m : positions)
    if (m >= n) throw ConfigError("PilotLayout: pilot index out of range");
  // Each pilot's observation window spans Q+1 bins, so pilots spaced Q+1
  // apart (the multi-antenna pattern) give adjacent, disjoint windows.
  for (std::size_t i = 0; i < positions.size(); ++i)
    for (std::size_t j = i + 1; j < positions.size(); ++j) {
      std::int64_t d = std::llabs(centered_offset(
          static_cast<std::int64_t>(positions[i]) - static_cast<std::int64_t>(positions[j]),
          static_cast<std::int64_t>(n)));
      if (d < static_cast<std::int64_t>(guard_q) + 1)
        throw ConfigError("PilotLayout: overlapping pilot windows");
    }
  if ((guard_q + 1) * positions.size() + guard_q > n)
    throw ConfigError("PilotLayout: pilots+guards exceed block");
}

std::vector<std::size_t> PilotLayout::data_positions() const {
  std::vector<bool> used(n, false);
  for (std::size_t m : positions)
    for (std::int64_t d = -static_cast<std::int64_t>(guard_q);
         d <= static_cast<std::int64_t>(guard_q); ++d)
      used[static_cast<std::size_t>(mod_n(static_cast<std::int64_t>(m) + d,
                                          static_cast<std::int64_t>(n)))] = true;
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < n; ++i)
    if (!used[i]) out.push_back(i);
  return out;
}

double PilotLayout::overhead_fraction() const {
  return static_cast<double>((2 * guard_q + 1) * positions.size()) /
         static_cast<double>(n);
}

std::size_t PilotLayout::min_guard(double ell_max, double f_max) {
  double q = (std::ceil(ell_max) + 1.0) * (2.0 * std::ceil(f_max) + 1.0) - 1.0;
  return static_cast<std::size_t>(q);
}

PilotLayout PilotLayout::siso(std::size_t n, std::size_t m, std::size_t q, cplx value) {
  PilotLayout l{n, {m}, value, q};
  l.validate();
  return l;
}

PilotLayout PilotLayout::mimo(std::size_t n, int n_tx, std::size_t q, cplx value) {
  PilotLayout l{n, {}, value, q};
  for (int t = 1; t <= n_tx; ++t)
    l.positions.push_back(static_cast<std::size_t>((q + 1) * t - 1));
  l.validate();
  return l;
}

cplx afdm_path_coefficient(std::size_t n, const ChirpParams& cp, std::int64_t ell,
                           double f, std::size_t row, std::size_t col) {
  const double nn = static_cast<double>(n);
  const double a = static_cast<double>(row);
  const double b = static_cast<double>(col);
  const double ld = static_cast<double>(ell);
  // e^{j 2 pi (l1 ell^2 + l2 (b^2 - a^2) - ell b / N)}
  double turns = -(cp.lambda1 * ld * ld + cp.lambda2 * (b * b - a * a)) + ld * b / nn;
  turns -= std::floor(turns);
  double u = b - a - f - 2.0 * nn * cp.lambda1 * ld;
  return unit_phasor(turns) * dirichlet_sum(u, n) / nn;
}

std::int64_t path_loc(std::size_t n, const ChirpParams& cp, std::int64_t ell,
                      std::int64_t f) {
  std::int64_t q = stride_or_throw(n, cp);
  return mod_n(f + ell * q, static_cast<std::int64_t>(n));
}

Frame build_pilot_frame(const PilotLayout& layout, std::span<const cplx> data,
                        std::size_t antenna) {
  layout.validate();
  if (antenna >= layout.positions.size())
    throw ConfigError("build_pilot_frame: antenna index out of range");
  auto data_pos = layout.data_positions();
  if (data.size() != data_pos.size() && !data.empty())
    throw ConfigError("build_pilot_frame: data size must equal free positions");
  Frame f;
  f.symbols.assign(layout.n, cplx{0.0, 0.0});
  f.symbols[layout.positions[antenna]] = layout.pilot_value;
  if (!data.empty()) {
    for (std::size_t i = 0; i < data_pos.size(); ++i) f.symbols[data_pos[i]] = data[i];
    f.data_positions = data_pos;
  }
  return f;
}

namespace {

// Shared integer-grid peak search. Returns retained candidates, strongest
// first, validating loc injectivity over the search box.
std::vector<Candidate> integer_search(std::span<const cplx> y, std::size_t m,
                                      std::size_t n, std::int64_t q,
                                      std::int64_t ell_lo, std::int64_t ell_hi,
                                      std::int64_t fmax, const EstimatorOptions& opts) {
  std::vector<bool> seen(n, false);
  auto f_order = doppler_order(fmax);
  std::vector<Candidate> per_ell;
  for (std::int64_t ell = ell_lo; ell <= ell_hi; ++ell) {
    Candidate best{ell, 0, 0, -1.0};
    for (std::int64_t f : f_order) {
      std::int64_t loc = mod_n(f + q * ell, static_cast<std::int64_t>(n));
      std::size_t bin = static_cast<std::size_t>(
          mod_n(static_cast<std::int64_t>(m) - loc, static_cast<std::int64_t>(n)));
      if (seen[bin])
        throw ConfigError("estimator: colliding loc values; lambda1 condition violated");
      seen[bin] = true;
      double metric = std::norm(y[bin]);
      if (metric > best.metric) best = {ell, f, bin, metric};
    }
    per_ell.push_back(best);
  }
  std::stable_sort(per_ell.begin(), per_ell.end(),
                   [](const Candidate& a, const Candidate& b) { return a.metric > b.metric; });
  std::vector<Candidate> kept;
  if (opts.known_paths.has_value()) {
    for (std::size_t i = 0; i < per_ell.size() && i < *opts.known_paths; ++i)
      kept.push_back(per_ell[i]);
  } else {
    for (const auto& c : per_ell)
      if (c.metric > opts.zeta()) kept.push_back(c);
  }
  return kept;
}

void sort_by_gain(EstimatedChannel& est) {
  std::stable_sort(est.paths.begin(), est.paths.end(),
                   [](const EstimatedPath& a, const EstimatedPath& b) {
                     return std::abs(a.gain) > std::abs(b.gain);
                   });
}

}  // namespace

EstimatedChannel estimate_idid(std::span<const cplx> y, const PilotLayout& layout,
                               const DelayDopplerBounds& bounds, const ChirpParams& cp,
                               const EstimatorOptions& opts, std::size_t antenna) {
  layout.validate();
  const std::size_t n = layout.n;
  const std::size_t m = layout.positions.at(antenna);
  const std::int64_t q = stride_or_throw(n, cp);
  const std::int64_t fmax = static_cast<std::int64_t>(std::ceil(bounds.f_max));
  const std::int64_t lmax = static_cast<std::int64_t>(std::ceil(bounds.ell_max));

  EstimatedChannel est;
  est.threshold_zeta = opts.zeta();
  est.grid_step = 0.0;
  for (const auto& c : integer_search(y, m, n, q, 0, lmax, fmax, opts)) {
    cplx coeff = afdm_path_coefficient(n, cp, c.ell, static_cast<double>(c.f), c.bin, m);
    cplx gain = std::conj(coeff) * y[c.bin] / layout.pilot_value;
    est.paths.push_back({gain, static_cast<double>(c.ell), static_cast<double>(c.f)});
  }
  sort_by_gain(est);
  return est;
}

namespace {

// Fractional refinement: normalized matched-filter energy over the Doppler
// window, scanned on a grid over [-1/2, 1/2]. The correlation magnitude is
// taken over the whole window (coherent form); the per-bin-magnitude variant
// is constant-maximized at the integer candidate and cannot resolve the
// fraction.
double refine_fractional_doppler(std::span<const cplx> y, std::size_t n,
                                 const ChirpParams& cp, std::size_t m, std::int64_t q,
                                 std::int64_t ell, std::int64_t f_int,
                                 std::int64_t fmax, double grid_step) {
  double best_ff = 0.0;
  double best_obj = -1.0;
  const std::int64_t steps = static_cast<std::int64_t>(std::llround(1.0 / grid_step));
  for (std::int64_t s = -steps / 2; s <= steps / 2; ++s) {
    double ff = static_cast<double>(s) * grid_step;
    cplx corr{0.0, 0.0};
    double den = 0.0;
    for (std::int64_t kp = -fmax; kp <= fmax; ++kp) {
      std::int64_t loc = mod_n(kp + q * ell, static_cast<std::int64_t>(n));
      std::size_t bin = static_cast<std::size_t>(
          mod_n(static_cast<std::int64_t>(m) - loc, static_cast<std::int64_t>(n)));
      cplx coeff = afdm_path_coefficient(n, cp, ell, static_cast<double>(f_int) + ff, bin, m);
      corr += std::conj(coeff) * y[bin];
      den += std::norm(coeff);
    }
    double obj = den > 0.0 ? std::norm(corr) / den : 0.0;
    if (obj > best_obj) {
      best_obj = obj;
      best_ff = ff;
    }
  }
  return best_ff;
}

cplx matched_gain(std::span<const cplx> y, std::size_t n, const ChirpParams& cp,
                  std::size_t m, cplx pilot, std::int64_t q, std::int64_t ell,
                  double f, std::int64_t fmax) {
  cplx acc{0.0, 0.0};
  for (std::int64_t kp = -fmax; kp <= fmax; ++kp) {
    std::int64_t loc = mod_n(kp + q * ell, static_cast<std::int64_t>(n));
    std::size_t bin = static_cast<std::size_t>(
        mod_n(static_cast<std::int64_t>(m) - loc, static_cast<std::int64_t>(n)));
    cplx coeff = afdm_path_coefficient(n, cp, ell, f, bin, m);
    acc += std::conj(coeff) * y[bin];
  }
  return acc / pilot;
}

}  // namespace

EstimatedChannel estimate_frac_doppler(std::span<const cplx> y,
                                       const PilotLayout& layout,
                                       const DelayDopplerBounds& bounds,
                                       const ChirpParams& cp,
                                       const EstimatorOptions& opts,
                                       std::size_t antenna) {
  layout.validate();
  if (opts.grid_step <= 0.0) throw ConfigError("estimate_frac_doppler: grid_step > 0 required");
  const std::size_t n = layout.n;
  const std::size_t m = layout.positions.at(antenna);
  const std::int64_t q = stride_or_throw(n, cp);
  const std::int64_t fmax = static_cast<std::int64_t>(std::ceil(bounds.f_max));
  const std::int64_t lmax = static_cast<std::int64_t>(std::ceil(bounds.ell_max));

  EstimatedChannel est;
  est.threshold_zeta = opts.zeta();
  est.grid_step = opts.grid_step;
  for (const auto& c : integer_search(y, m, n, q, 0, lmax, fmax, opts)) {
    double ff = refine_fractional_doppler(y, n, cp, m, q, c.ell, c.f, fmax, opts.grid_step);
    double f_hat = static_cast<double>(c.f) + ff;
    cplx gain = matched_gain(y, n, cp, m, layout.pilot_value, q, c.ell, f_hat, fmax);
    est.paths.push_back({gain, static_cast<double>(c.ell), f_hat});
  }
  sort_by_gain(est);
  return est;
}

EstimatedChannel estimate_fdfd(std::span<const cplx> y, const PilotLayout& layout,
                               const DelayDopplerBounds& bounds, const ChirpParams& cp,
                               const PulseKernel& kernel, const EstimatorOptions& opts,
                               std::size_t antenna) {
  layout.validate();
  const std::size_t n = layout.n;
  const std::size_t m = layout.positions.at(antenna);
  const std::int64_t q = stride_or_throw(n, cp);
  const std::int64_t fmax = static_cast<std::int64_t>(std::ceil(bounds.f_max));
  const std::int64_t lmax = static_cast<std::int64_t>(std::ceil(bounds.ell_max));
  const std::int64_t b = kernel.half_width;

  // Integer-tap sweep over the virtual delay range.
  EstimatorOptions tap_opts = opts;
  tap_opts.known_paths.reset();  // threshold-driven at the virtual-tap level
  auto taps = integer_search(y, m, n, q, -b, lmax + b, fmax, tap_opts);
  // Drop taps far below the dominant one; keeps the noiseless sweep from
  // reporting every empty bin.
  double peak = 0.0;
  for (const auto& t : taps) peak = std::max(peak, t.metric);
  std::vector<Candidate> kept;
  for (const auto& t : taps)
    if (t.metric > 1e-12 * peak) kept.push_back(t);

  // Per-tap gains, grouped by integer Doppler.
  struct Tap {
    std::int64_t ell;
    cplx gain;
  };
  std::map<std::int64_t, std::vector<Tap>> groups;
  for (const auto& c : kept) {
    cplx coeff = afdm_path_coefficient(n, cp, c.ell, static_cast<double>(c.f), c.bin, m);
    cplx gain = std::conj(coeff) * y[c.bin] / layout.pilot_value;
    groups[c.f].push_back({c.ell, gain});
  }

  EstimatedChannel est;
  est.threshold_zeta = tap_opts.zeta();
  est.grid_step = opts.grid_step;

  for (auto& [f, tap_list] : groups) {
    std::sort(tap_list.begin(), tap_list.end(),
              [](const Tap& a, const Tap& b2) { return a.ell < b2.ell; });
    // split into clusters of contiguous integer delays
    std::vector<std::vector<Tap>> clusters;
    for (const auto& t : tap_list) {
      if (clusters.empty() || t.ell > clusters.back().back().ell + 1)
        clusters.emplace_back();
      clusters.back().push_back(t);
    }
    for (const auto& cluster : clusters) {
      if (static_cast<std::int64_t>(cluster.size()) > 2 * b + 1) est.overlap_warning = true;
      if (cluster.size() == 1) {
        // nothing to fit: a lone tap is an integer-delay path
        est.paths.push_back({cluster[0].gain, static_cast<double>(cluster[0].ell),
                             static_cast<double>(f)});
        continue;
      }
      // peak tap anchors the integer part of the delay
      std::size_t peak_i = 0;
      for (std::size_t i = 1; i < cluster.size(); ++i)
        if (std::abs(cluster[i].gain) > std::abs(cluster[peak_i].gain)) peak_i = i;
      double step = opts.grid_step > 0.0 ? opts.grid_step : 0.01;
      double best_res = std::numeric_limits<double>::infinity();
      double best_delay = static_cast<double>(cluster[peak_i].ell);
      cplx best_gain = cluster[peak_i].gain;
      for (std::int64_t base : {cluster[peak_i].ell - 1, cluster[peak_i].ell}) {
        for (double eps = 0.0; eps < 1.0; eps += step) {
          // model: gain_j = h * g(ell_j - base - eps)
          double gg = 0.0;
          cplx gh{0.0, 0.0};
          for (const auto& t : cluster) {
            double g = kernel.eval(static_cast<double>(t.ell - base) - eps);
            gg += g * g;
            gh += g * t.gain;
          }
          if (gg < 1e-30) continue;
          cplx h = gh / gg;
          double res = 0.0;
          for (const auto& t : cluster) {
            double g = kernel.eval(static_cast<double>(t.ell - base) - eps);
            res += std::norm(t.gain - h * g);
          }
          if (res < best_res) {
            best_res = res;
            best_delay = static_cast<double>(base) + eps;
            best_gain = h;
          }
        }
      }
      est.paths.push_back({best_gain, best_delay, static_cast<double>(f)});
    }
  }
  sort_by_gain(est);
  if (opts.known_paths.has_value() && est.paths.size() > *opts.known_paths)
    est.paths.resize(*opts.known_paths);
  return est;
}

CVec estimate_freq_domain(std::span<const cplx> y_f, const ChirpParams& cp,
                          const PilotLayout& layout) {
  layout.validate();
  const std::size_t n = layout.n;
  std::int64_t q = 0;
  if (!cp.integer_stride(n, &q) || q == 0 ||
      !is_near_integer(1.0 / (2.0 * cp.lambda1)))
    throw ConfigError("estimate_freq_domain: requires 2N*lambda1 and 1/(2*lambda1) integral");

  // comb reference z = F A^H x_pilot
  CVec x(n, cplx{0.0, 0.0});
  x[layout.positions.at(0)] = layout.pilot_value;
  TransformPlan daft(n, TransformKind::kDaft, cp);
  TransformPlan dft(n, TransformKind::kDft);
  CVec s = daft.inverse(x);
  CVec z = dft.forward(s);

  double zmax = 0.0;
  for (const auto& v : z) zmax = std::max(zmax, std::abs(v));
  std::vector<std::size_t> comb;
  for (std::size_t k = 0; k < n; ++k)
    if (std::abs(z[k]) > 1e-8 * zmax) comb.push_back(k);
  if (comb.empty()) throw ConfigError("estimate_freq_domain: empty comb");

  CVec h(n, cplx{0.0, 0.0});
  for (std::size_t k : comb) h[k] = y_f[k] / z[k];

  // linear interpolation between cyclically adjacent comb tones
  for (std::size_t i = 0; i < comb.size(); ++i) {
    std::size_t k0 = comb[i];
    std::size_t k1 = comb[(i + 1) % comb.size()];
    std::size_t gap = static_cast<std::size_t>(
        mod_n(static_cast<std::int64_t>(k1) - static_cast<std::int64_t>(k0),
              static_cast<std::int64_t>(n)));
    if (gap <= 1) continue;
    for (std::size_t d = 1; d < gap; ++d) {
      double t = static_cast<double>(d) / static_cast<double>(gap);
      std::size_t k = static_cast<std::size_t>(
          mod_n(static_cast<std::int64_t>(k0 + d), static_cast<std::int64_t>(n)));
      h[k] = (1.0 - t) * h[k0] + t * h[k1];
    }
  }
  return h;
}

std::vector<std::vector<EstimatedChannel>> estimate_mimo(
    const std::vector<CVec>& y_per_rx, const PilotLayout& layout,
    const DelayDopplerBounds& bounds, const ChirpParams& cp,
    const EstimatorOptions& opts) {
  layout.validate();
  std::vector<std::vector<EstimatedChannel>> grid;
  for (const auto& y : y_per_rx) {
    std::vector<EstimatedChannel> row;
    for (std::size_t t = 0; t < layout.positions.size(); ++t)
      row.push_back(estimate_idid(y, layout, bounds, cp, opts, t));
    grid.push_back(std::move(row));
  }
  return grid;
}

Eigen::MatrixXcd reconstruct_effective(std::size_t n, const ChirpParams& cp,
                                       const EstimatedChannel& est,
                                       const std::optional<PulseKernel>& kernel) {
  Eigen::MatrixXcd xi = Eigen::MatrixXcd::Zero(n, n);
  std::vector<EstimatedPath> flat;
  for (const auto& p : est.paths) {
    if (is_near_integer(p.delay)) {
      flat.push_back(p);
      continue;
    }
    if (!kernel.has_value())
      throw ConfigError("reconstruct_effective: fractional delay needs the pulse kernel");
    double base = std::floor(p.delay);
    double eps = p.delay - base;
    for (int q = -kernel->half_width; q <= kernel->half_width; ++q) {
      double g = kernel->eval(static_cast<double>(q) - eps);
      if (g != 0.0) flat.push_back({p.gain * g, base + q, p.doppler});
    }
  }
  for (const auto& p : flat) {
    std::int64_t ell = static_cast<std::int64_t>(std::llround(p.delay));
    if (is_near_integer(p.doppler)) {
      std::int64_t f = static_cast<std::int64_t>(std::llround(p.doppler));
      std::int64_t loc = path_loc(n, cp, ell, f);
      for (std::size_t a = 0; a < n; ++a) {
        std::size_t bcol = static_cast<std::size_t>(
            mod_n(static_cast<std::int64_t>(a) + loc, static_cast<std::int64_t>(n)));
        xi(a, bcol) += p.gain * afdm_path_coefficient(n, cp, ell, p.doppler, a, bcol);
      }
    } else {
      // separable form of the coefficient: c0 * pb[b] * conj(pa[a]) * dir[(b-a)_N]
      const double nn = static_cast<double>(n);
      const double ld = static_cast<double>(ell);
      double shift = p.doppler + 2.0 * nn * cp.lambda1 * ld;
      cplx c0 = p.gain * std::polar(1.0, kTwoPi * cp.lambda1 * ld * ld) / nn;
      CVec dir(n), pb(n), pa(n);
      for (std::size_t d = 0; d < n; ++d)
        dir[d] = dirichlet_sum(static_cast<double>(d) - shift, n);
      for (std::size_t b = 0; b < n; ++b) {
        double bb = static_cast<double>(b);
        double turns = cp.lambda2 * bb * bb - std::floor(cp.lambda2 * bb * bb);
        pb[b] = std::polar(1.0, kTwoPi * turns - kTwoPi * ld * bb / nn);
      }
      for (std::size_t a = 0; a < n; ++a) {
        double aa = static_cast<double>(a);
        double turns = cp.lambda2 * aa * aa - std::floor(cp.lambda2 * aa * aa);
        pa[a] = std::polar(1.0, -kTwoPi * turns);
      }
      for (std::size_t a = 0; a < n; ++a)
        for (std::size_t bcol = 0; bcol < n; ++bcol)
          xi(a, bcol) += c0 * pb[bcol] * pa[a] *
                         dir[static_cast<std::size_t>(
                             mod_n(static_cast<std::int64_t>(bcol) - static_cast<std::int64_t>(a),
                                   static_cast<std::int64_t>(n)))];
    }
  }
  return xi;
}

void write_estimated_csv(const std::string& path, const EstimatedChannel& est) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("write_estimated_csv: cannot open " + path);
  out << "h_re,h_im,delay,doppler\n";
  for (const auto& p : est.paths)
    out << p.gain.real() << ',' << p.gain.imag() << ',' << p.delay << ','
        << p.doppler << '\n';
}

}  // namespace afdm
