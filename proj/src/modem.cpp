#include "afdm/modem.hpp"

#include <Eigen/SVD>
#include <cstdio>
#include <numeric>

#include "afdm/simd.hpp"

namespace afdm {

void Window::validate() const {
  for (double t : taps)
    if (!std::isfinite(t) || t < 0.0)
      throw ConfigError("Window: taps must be finite and nonnegative");
}

Window Window::ones(std::size_t n) { return {std::vector<double>(n, 1.0)}; }

Window Window::raised_cosine_edges(std::size_t n, std::size_t ramp) {
  Window w = ones(n);
  for (std::size_t i = 0; i < ramp && i < n; ++i) {
    double t = 0.5 * (1.0 - std::cos(kPi * (static_cast<double>(i) + 0.5) /
                                     static_cast<double>(ramp)));
    w.taps[i] *= t;
    w.taps[n - 1 - i] *= t;
  }
  return w;
}

CVec modulate(const TransformPlan& plan, std::span<const cplx> x) {
  return plan.apply(Direction::kInverse, x);
}

CVec demodulate(const TransformPlan& plan, std::span<const cplx> r) {
  return plan.apply(Direction::kForward, r);
}

CVec add_prefix(std::span<const cplx> s, const PrefixSpec& prefix) {
  const std::size_t n = s.size();
  if (prefix.length >= n) throw ConfigError("add_prefix: N_cp must be < N");
  CVec out(n + prefix.length);
  for (std::size_t i = 0; i < prefix.length; ++i) {
    double np = static_cast<double>(i) - static_cast<double>(prefix.length);  // n' in {-N_cp..-1}
    out[i] = s[n - prefix.length + i] *
             std::polar(1.0, kTwoPi * prefix.phase_turns(np, n));
  }
  std::copy(s.begin(), s.end(), out.begin() + prefix.length);
  return out;
}

CVec strip_prefix(std::span<const cplx> s_ext, const PrefixSpec& prefix) {
  if (s_ext.size() <= prefix.length)
    throw DimensionError("strip_prefix: block shorter than prefix");
  return CVec(s_ext.begin() + prefix.length, s_ext.end());
}

CVec apply_window(std::span<const cplx> s_cp, const Window& w) {
  if (s_cp.size() != w.taps.size())
    throw DimensionError("apply_window: length mismatch");
  CVec out(s_cp.size());
  simd::active().rmul(w.taps.data(), s_cp.data(), out.data(), s_cp.size());
  return out;
}

Eigen::MatrixXcd effective_channel(const TransformPlan& plan, const Eigen::MatrixXcd& h) {
  const std::size_t n = plan.size();
  if (h.rows() != static_cast<Eigen::Index>(n) || h.cols() != static_cast<Eigen::Index>(n))
    throw DimensionError("effective_channel: H must be N x N");
  // Xi = T H T^H, columns via the fast transform path.
  Eigen::MatrixXcd xi(n, n);
  CVec col(n), tmp(n);
  for (std::size_t c = 0; c < n; ++c) {
    CVec e(n, cplx{0.0, 0.0});
    e[c] = 1.0;
    plan.apply(Direction::kInverse, e, std::span<cplx>(tmp));
    Eigen::Map<const Eigen::VectorXcd> tv(tmp.data(), n);
    Eigen::VectorXcd ht = h * tv;
    std::copy(ht.data(), ht.data() + n, col.begin());
    plan.apply(Direction::kForward, col, std::span<cplx>(tmp));
    for (std::size_t r = 0; r < n; ++r) xi(r, c) = tmp[r];
  }
  return xi;
}

void AccessMap::validate() const {
  if (users.empty()) throw ConfigError("AccessMap: no users");
  if (mode == Mode::kPerBlock) {
    std::size_t total = 0;
    for (const auto& u : users) total += u.block_size;
    if (total != n_total)
      throw ConfigError("AccessMap: per-block sizes must sum to N");
  } else {
    std::int64_t q = 0;
    if (!shared_cp.integer_stride(n_total, &q) || q == 0)
      throw ConfigError("AccessMap: per-subcarrier requires 2 N lambda1 integer and nonzero");
    double inv = 1.0 / (2.0 * shared_cp.lambda1);
    if (!is_near_integer(inv))
      throw ConfigError("AccessMap: per-subcarrier requires 1/(2 lambda1) integer");
    if (users.size() > static_cast<std::size_t>(std::llabs(q)))
      throw ConfigError("AccessMap: more users than congruence classes");
  }
}

std::vector<std::size_t> AccessMap::owned_indices(std::size_t user) const {
  std::int64_t q = 0;
  shared_cp.integer_stride(n_total, &q);
  std::size_t qa = static_cast<std::size_t>(std::llabs(q));
  std::vector<std::size_t> idx;
  std::size_t base = odd_branch ? (user + qa / 2) % qa : user;
  for (std::size_t i = base; i < n_total; i += qa) idx.push_back(i);
  return idx;
}

std::size_t AccessMap::user_payload_size(std::size_t user) const {
  if (mode == Mode::kPerBlock) return users[user].block_size;
  return owned_indices(user).size();
}

CVec map_access(const std::vector<CVec>& user_payloads, const AccessMap& map) {
  map.validate();
  if (user_payloads.size() != map.users.size())
    throw ConfigError("map_access: payload count mismatch");

  if (map.mode == AccessMap::Mode::kPerBlock) {
    // s = F_N^H [ (F_{N_1} s_1)^T ... ]^T with s_k the user's modulated block.
    CVec freq(map.n_total);
    std::size_t offset = 0;
    for (std::size_t u = 0; u < map.users.size(); ++u) {
      const auto& usr = map.users[u];
      if (user_payloads[u].size() != usr.block_size)
        throw DimensionError("map_access: user payload size mismatch");
      TransformPlan user_plan(usr.block_size, usr.waveform, usr.cp);
      CVec sk = modulate(user_plan, user_payloads[u]);
      TransformPlan dft_k(usr.block_size, TransformKind::kDft);
      CVec fk = dft_k.forward(sk);
      std::copy(fk.begin(), fk.end(), freq.begin() + offset);
      offset += usr.block_size;
    }
    TransformPlan dft_n(map.n_total, TransformKind::kDft);
    return dft_n.inverse(freq);
  }

  // Per-subcarrier: scatter each user's payload onto its congruence class and
  // push the superposition through one shared inverse DAFT; OFDM users are
  // substituted through F^H.
  CVec time(map.n_total, cplx{0.0, 0.0});
  TransformPlan daft(map.n_total, TransformKind::kDaft, map.shared_cp);
  TransformPlan dft(map.n_total, TransformKind::kDft);
  for (std::size_t u = 0; u < map.users.size(); ++u) {
    auto idx = map.owned_indices(u);
    if (user_payloads[u].size() != idx.size())
      throw DimensionError("map_access: user payload size mismatch");
    CVec x(map.n_total, cplx{0.0, 0.0});
    for (std::size_t i = 0; i < idx.size(); ++i) x[idx[i]] = user_payloads[u][i];
    const TransformPlan& plan =
        map.users[u].waveform == TransformKind::kDft ? dft : daft;
    CVec s = modulate(plan, x);
    for (std::size_t i = 0; i < time.size(); ++i) time[i] += s[i];
  }
  return time;
}

CVec demap_access(std::span<const cplx> time_signal, const AccessMap& map,
                  std::size_t user) {
  map.validate();
  if (user >= map.users.size()) throw ConfigError("demap_access: bad user index");
  if (time_signal.size() != map.n_total)
    throw DimensionError("demap_access: signal length mismatch");

  if (map.mode == AccessMap::Mode::kPerBlock) {
    TransformPlan dft_n(map.n_total, TransformKind::kDft);
    CVec freq = dft_n.forward(time_signal);
    std::size_t offset = 0;
    for (std::size_t u = 0; u < user; ++u) offset += map.users[u].block_size;
    const auto& usr = map.users[user];
    CVec block(freq.begin() + offset, freq.begin() + offset + usr.block_size);
    TransformPlan dft_k(usr.block_size, TransformKind::kDft);
    CVec sk = dft_k.inverse(block);
    TransformPlan user_plan(usr.block_size, usr.waveform, usr.cp);
    return demodulate(user_plan, sk);
  }

  const auto& usr = map.users[user];
  TransformPlan plan(map.n_total,
                     usr.waveform == TransformKind::kDft ? TransformKind::kDft
                                                         : TransformKind::kDaft,
                     map.shared_cp);
  CVec y = demodulate(plan, time_signal);
  auto idx = map.owned_indices(user);
  CVec out(idx.size());
  for (std::size_t i = 0; i < idx.size(); ++i) out[i] = y[idx[i]];
  return out;
}

Eigen::MatrixXcd zf_precode(const Eigen::MatrixXcd& xi_k, double cond_cap) {
  const Eigen::Index n_r = xi_k.rows();
  const Eigen::Index n_t = xi_k.cols();
  if (n_t < n_r) throw ConfigError("zf_precode: requires N_t >= N_r");
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(xi_k);
  double smax = svd.singularValues()(0);
  double smin = svd.singularValues()(n_r - 1);
  if (smin <= 0.0 || smax / smin > cond_cap)
    throw SingularMatrixError("zf_precode: Xi Xi^H ill-conditioned");
  Eigen::MatrixXcd gram = xi_k * xi_k.adjoint();
  return xi_k.adjoint() * gram.inverse();
}

double papr_db(std::span<const cplx> s) {
  if (s.empty()) throw DimensionError("papr_db: empty block");
  const auto& k = simd::active();
  double peak = k.abs2_max(s.data(), s.size());
  double mean = k.abs2_sum(s.data(), s.size()) / static_cast<double>(s.size());
  return 10.0 * std::log10(peak / mean);
}

void write_iq_float32(const std::string& path, std::span<const cplx> s) {
  std::FILE* f = std::fopen(path.c_str(), "wb");
  if (f == nullptr) throw std::runtime_error("write_iq_float32: cannot open " + path);
  for (const cplx& v : s) {
    float iq[2] = {static_cast<float>(v.real()), static_cast<float>(v.imag())};
    std::fwrite(iq, sizeof(float), 2, f);
  }
  std::fclose(f);
}

}  // namespace afdm
