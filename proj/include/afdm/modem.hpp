#pragma once

#include <Eigen/Dense>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "afdm/channel.hpp"
#include "afdm/constellation.hpp"
#include "afdm/transforms.hpp"

namespace afdm {

// One block of N affine/frequency-domain symbols.
struct Frame {
  CVec symbols;
  std::vector<std::size_t> data_positions;  // indices carrying payload
};

struct Window {
  std::vector<double> taps;  // length N + N_cp, finite nonnegative

  void validate() const;
  static Window ones(std::size_t n);
  static Window raised_cosine_edges(std::size_t n, std::size_t ramp);
};

// s = T^H x under the block's transform (IDAFT / IDFT).
CVec modulate(const TransformPlan& plan, std::span<const cplx> x);

// y = T r.
CVec demodulate(const TransformPlan& plan, std::span<const cplx> r);

// Prepends phase-rotated tail copies: s[n'] = s[N + n'] e^{j 2 pi phi_cp(n')},
// n' in {-N_cp .. -1}. Zero phase gives the classical CP.
CVec add_prefix(std::span<const cplx> s, const PrefixSpec& prefix);

CVec strip_prefix(std::span<const cplx> s_ext, const PrefixSpec& prefix);

CVec apply_window(std::span<const cplx> s_cp, const Window& w);

// Xi = T H T^H: the matrix seen between the data symbols.
Eigen::MatrixXcd effective_channel(const TransformPlan& plan, const Eigen::MatrixXcd& h);

// ---- multiple access -------------------------------------------------------

struct AccessUser {
  TransformKind waveform = TransformKind::kDaft;
  ChirpParams cp;          // per-user chirp (per-block mode)
  std::size_t block_size = 0;  // per-block mode: N_k
};

struct AccessMap {
  enum class Mode { kPerBlock, kPerSubcarrier };
  Mode mode = Mode::kPerBlock;
  std::size_t n_total = 0;
  std::vector<AccessUser> users;
  ChirpParams shared_cp;   // per-subcarrier mode: the one shared DAFT
  bool odd_branch = false; // per-subcarrier congruence variant (default: even)

  void validate() const;
  // per-subcarrier: the indices owned by user k ({k + n q}).
  std::vector<std::size_t> owned_indices(std::size_t user) const;
  std::size_t user_payload_size(std::size_t user) const;
};

// Composite time-domain signal from per-user payload vectors.
CVec map_access(const std::vector<CVec>& user_payloads, const AccessMap& map);

// Recovers one user's payload from the received time-domain block.
CVec demap_access(std::span<const cplx> time_signal, const AccessMap& map,
                  std::size_t user);

// ---- MIMO precoding --------------------------------------------------------

// U = Xi^H (Xi Xi^H)^{-1}; requires N_t >= N_r and conditioning below cap.
Eigen::MatrixXcd zf_precode(const Eigen::MatrixXcd& xi_k, double cond_cap = 1e12);

// ---- misc ------------------------------------------------------------------

double papr_db(std::span<const cplx> s);

// Interleaved float32 I/Q dump.
void write_iq_float32(const std::string& path, std::span<const cplx> s);

}  // namespace afdm
