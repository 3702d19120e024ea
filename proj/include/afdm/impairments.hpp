#pragma once

#include <Eigen/Dense>

#include "afdm/channel.hpp"
#include "afdm/rng.hpp"

namespace afdm {

enum class LoMode { kClo, kSlo };

struct ImpairmentConfig {
  double phn_increment_var = 0.0;  // sigma^2_Delta, rad^2 per sample
  double cfo = 0.0;                // theta_CFO, cycles per block
  LoMode lo = LoMode::kClo;

  // sigma^2_Delta = 4 pi^2 f_c^2 xi_osc T_s
  static double phn_var_from_oscillator(double f_c_hz, double xi_osc, double t_s);

  bool enabled() const { return phn_increment_var > 0.0 || cfo != 0.0; }
  void validate(std::size_t n) const;
};

// Wiener phase trajectory phi[0..N-1], phi[0] = 0.
std::vector<double> phn_trajectory(std::size_t n, double increment_var, Rng& rng);

// Theta = diag(e^{j phi[k]}).
Eigen::MatrixXcd phn_matrix(std::size_t n, const ImpairmentConfig& cfg, Rng& rng);

// P = diag(e^{j 2 pi theta k / N}).
Eigen::MatrixXcd cfo_matrix(std::size_t n, double theta);

// Left-composes Theta * P with the channel.
ChannelOperator impaired_channel(const ChannelOperator& h, const ImpairmentConfig& cfg,
                                 Rng& rng);

// Hot-path variant: applies Theta*P sample-wise to a received block.
void apply_phn_cfo(std::span<cplx> r, std::span<const double> phn_phase, double cfo);

}  // namespace afdm
