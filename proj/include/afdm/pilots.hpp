#pragma once

#include <Eigen/Dense>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "afdm/channel.hpp"
#include "afdm/modem.hpp"
#include "afdm/transforms.hpp"

namespace afdm {

struct PilotLayout {
  std::size_t n = 0;                   // block length
  std::vector<std::size_t> positions;  // one pilot index per transmit antenna
  cplx pilot_value{1.0, 0.0};
  std::size_t guard_q = 0;

  void validate() const;
  std::vector<std::size_t> data_positions() const;
  double overhead_fraction() const;  // (2Q+1)/N per pilot

  // Q >= (ceil(ell_max)+1)(2 ceil(f_max)+1) - 1
  static std::size_t min_guard(double ell_max, double f_max);

  static PilotLayout siso(std::size_t n, std::size_t m, std::size_t q,
                          cplx value = {1.0, 0.0});
  // Pilot of antenna t at (Q+1)(t+1) - 1.
  static PilotLayout mimo(std::size_t n, int n_tx, std::size_t q,
                          cplx value = {1.0, 0.0});
};

struct EstimatedPath {
  cplx gain;
  double delay = 0.0;
  double doppler = 0.0;
};

struct EstimatedChannel {
  std::vector<EstimatedPath> paths;  // sorted by |gain| descending
  double threshold_zeta = 0.0;
  double grid_step = 0.0;
  bool overlap_warning = false;  // FDFD: physical paths too close to resolve
};

struct DelayDopplerBounds {
  double ell_max = 0.0;
  double f_max = 0.0;
};

struct EstimatorOptions {
  std::optional<std::size_t> known_paths;
  double noise_var = 0.0;
  // < 0 selects the default 6 * noise_var per DAFT bin.
  double threshold_zeta = -1.0;
  double grid_step = 0.01;

  double zeta() const { return threshold_zeta >= 0.0 ? threshold_zeta : 6.0 * noise_var; }
};

// Closed-form entry of the unit-gain per-path effective channel
// [T Phi_p V^f Pi^ell T^H]_{row,col} for integer delay and arbitrary real
// Doppler. Exact whenever 2 N lambda1 is an integer (the regime in which the
// DAFT-domain estimators operate); cross-checked against the dense
// construction in the tests.
cplx afdm_path_coefficient(std::size_t n, const ChirpParams& cp, std::int64_t ell,
                           double f, std::size_t row, std::size_t col);

// DAFT-domain offset at which a path's pilot response appears:
// (f + ell * 2N*lambda1) mod N. Integer stride required.
std::int64_t path_loc(std::size_t n, const ChirpParams& cp, std::int64_t ell,
                      std::int64_t f);

Frame build_pilot_frame(const PilotLayout& layout, std::span<const cplx> data,
                        std::size_t antenna = 0);

EstimatedChannel estimate_idid(std::span<const cplx> y, const PilotLayout& layout,
                               const DelayDopplerBounds& bounds, const ChirpParams& cp,
                               const EstimatorOptions& opts = {},
                               std::size_t antenna = 0);

EstimatedChannel estimate_frac_doppler(std::span<const cplx> y,
                                       const PilotLayout& layout,
                                       const DelayDopplerBounds& bounds,
                                       const ChirpParams& cp,
                                       const EstimatorOptions& opts = {},
                                       std::size_t antenna = 0);

EstimatedChannel estimate_fdfd(std::span<const cplx> y, const PilotLayout& layout,
                               const DelayDopplerBounds& bounds, const ChirpParams& cp,
                               const PulseKernel& kernel,
                               const EstimatorOptions& opts = {},
                               std::size_t antenna = 0);

// Frequency-domain special case (2N*lambda1 and 1/(2*lambda1) integral, low
// Doppler): LS gains at the comb positions, linear interpolation elsewhere.
// Returns the per-subcarrier frequency response estimate, length N.
CVec estimate_freq_domain(std::span<const cplx> y_f, const ChirpParams& cp,
                          const PilotLayout& layout);

// Per-link estimates, outer index receive antenna, inner transmit antenna.
std::vector<std::vector<EstimatedChannel>> estimate_mimo(
    const std::vector<CVec>& y_per_rx, const PilotLayout& layout,
    const DelayDopplerBounds& bounds, const ChirpParams& cp,
    const EstimatorOptions& opts = {});

// Dense effective channel rebuilt from estimated paths (for NMSE checks and
// estimated-CSI detection). Fractional delays are expanded through the pulse
// kernel's virtual taps.
Eigen::MatrixXcd reconstruct_effective(std::size_t n, const ChirpParams& cp,
                                       const EstimatedChannel& est,
                                       const std::optional<PulseKernel>& kernel = {});

// CSV rows: h_re,h_im,delay,doppler
void write_estimated_csv(const std::string& path, const EstimatedChannel& est);

}  // namespace afdm
