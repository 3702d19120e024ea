#include "afdm/impairments.hpp"

namespace afdm {

double ImpairmentConfig::phn_var_from_oscillator(double f_c_hz, double xi_osc,
                                                 double t_s) {
  return 4.0 * kPi * kPi * f_c_hz * f_c_hz * xi_osc * t_s;
}

void ImpairmentConfig::validate(std::size_t n) const {
  if (phn_increment_var < 0.0)
    throw ConfigError("ImpairmentConfig: PHN increment variance must be >= 0");
  if (std::abs(cfo) >= static_cast<double>(n) / 2.0)
    throw ConfigError("ImpairmentConfig: |theta_CFO| must be < N/2");
}

std::vector<double> phn_trajectory(std::size_t n, double increment_var, Rng& rng) {
  std::vector<double> phi(n, 0.0);
  if (increment_var <= 0.0) return phi;
  double sd = std::sqrt(increment_var);
  for (std::size_t k = 1; k < n; ++k) phi[k] = phi[k - 1] + sd * rng.gaussian();
  return phi;
}

Eigen::MatrixXcd phn_matrix(std::size_t n, const ImpairmentConfig& cfg, Rng& rng) {
  cfg.validate(n);
  auto phi = phn_trajectory(n, cfg.phn_increment_var, rng);
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(n, n);
  for (std::size_t k = 0; k < n; ++k) m(k, k) = std::polar(1.0, phi[k]);
  return m;
}

Eigen::MatrixXcd cfo_matrix(std::size_t n, double theta) {
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(n, n);
  for (std::size_t k = 0; k < n; ++k)
    m(k, k) = std::polar(1.0, kTwoPi * theta * static_cast<double>(k) / static_cast<double>(n));
  return m;
}

ChannelOperator impaired_channel(const ChannelOperator& h, const ImpairmentConfig& cfg,
                                 Rng& rng) {
  const std::size_t n = static_cast<std::size_t>(h.matrix.rows());
  cfg.validate(n);
  if (!cfg.enabled()) return h;
  auto phi = phn_trajectory(n, cfg.phn_increment_var, rng);
  ChannelOperator out;
  out.matrix = h.matrix;
  for (std::size_t k = 0; k < n; ++k) {
    cplx rot = std::polar(1.0, phi[k] + kTwoPi * cfg.cfo * static_cast<double>(k) /
                                            static_cast<double>(n));
    out.matrix.row(k) *= rot;
  }
  // diagonal left-composition keeps the band profile
  out.structure = h.structure == ChannelStructure::kIdidSparse
                      ? ChannelStructure::kIdidSparse
                      : h.structure;
  return out;
}

void apply_phn_cfo(std::span<cplx> r, std::span<const double> phn_phase, double cfo) {
  const double n = static_cast<double>(r.size());
  for (std::size_t k = 0; k < r.size(); ++k) {
    double phi = (phn_phase.empty() ? 0.0 : phn_phase[k]) +
                 kTwoPi * cfo * static_cast<double>(k) / n;
    r[k] *= std::polar(1.0, phi);
  }
}

}  // namespace afdm
