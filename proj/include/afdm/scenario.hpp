#pragma once

#include <string>
#include <vector>

#include "afdm/channel.hpp"
#include "afdm/detectors.hpp"
#include "afdm/impairments.hpp"
#include "afdm/transforms.hpp"

namespace afdm::sim {

enum class WaveformType { kOfdm, kAfdm };
enum class DetectorType { kZf, kMmse, kLdlMmse, kMrc, kMp, kMapOracle };
enum class ChannelDraw { kFixed, kIidGains, kIidGainsRandomDoppler };
enum class EstimatorType { kPerfectCsi, kIdid, kFracDoppler, kFdfd };

struct ScenarioChannel {
  PathSet paths;  // template; gains/Dopplers may be redrawn per frame
  PulseKernel kernel = PulseKernel::sinc();
  bool cpp_prefix = true;   // chirp-periodic prefix (waveform lambda1); false = plain CP
  std::size_t n_cp = 0;     // 0 = auto: ceil(ell_max) + B
  ChannelDraw draw = ChannelDraw::kFixed;
  bool circulant_approx = false;
};

struct ScenarioPilot {
  EstimatorType estimator = EstimatorType::kPerfectCsi;
  std::size_t position = 0;
  std::size_t guard_q = 0;  // 0 = auto from (ell_max, f_max)
  double grid_step = 0.01;
  bool known_p = true;
  // pilot amplitude; 0 selects sqrt(2Q+1), reallocating the guard energy
  double amplitude = 1.0;
};

struct SimScenario {
  std::string id = "scenario";
  std::size_t n = 128;
  WaveformType waveform = WaveformType::kAfdm;
  ChirpParams chirp;
  unsigned mod_order = 4;
  ScenarioChannel channel;
  ScenarioPilot pilot;
  DetectorType detector = DetectorType::kMmse;
  DetectorConfig det_cfg;
  ImpairmentConfig impairments;
  std::vector<double> snr_db;  // Eb/N0 per bit, dB
  std::uint64_t min_frames = 100;
  std::uint64_t max_frames = 100000;
  std::uint64_t target_bit_errors = 200;
  std::uint64_t master_seed = 1;

  void validate() const;
  PrefixSpec prefix_spec() const;
  std::size_t prefix_length() const;
};

struct ResultRow {
  std::string scenario_id;
  double snr_db = 0.0;
  double ber = 0.0;
  double fer = 0.0;
  double nmse = -1.0;  // < 0: no estimation stage
  std::uint64_t frames = 0;
  std::uint64_t bit_errors = 0;
  std::uint64_t seed = 0;
  std::string version;
};

inline constexpr const char* kVersion = "afdmlab 1.0.0";

std::string scenario_to_json(const SimScenario& sc);
SimScenario scenario_from_json(const std::string& text);
SimScenario load_scenario_file(const std::string& path);

// Monte-Carlo run. workers <= 0 selects hardware concurrency. Results are
// identical for any worker count: frames derive their RNG streams from
// (master_seed, scenario id, snr index, frame index) and the stopping rule is
// evaluated on the in-order chunk prefix.
std::vector<ResultRow> run_scenario(const SimScenario& sc, int workers = 0);

// Variant streaming per-block detector diagnostics (first chunk of each SNR
// point) as CSV rows.
std::vector<ResultRow> run_scenario(const SimScenario& sc, int workers,
                                    const std::string& diagnostics_csv);

// CSV (fixed column order) plus a matplotlib companion script.
void emit_results(const std::vector<ResultRow>& rows, const std::string& out_dir,
                  const std::string& basename);

// Log-linear interpolation of the SNR (dB) where a curve crosses target_ber.
// Rows must belong to one scenario, sorted by SNR. NaN when not bracketed.
double snr_at_ber(const std::vector<ResultRow>& rows, double target_ber);

// ---- presets ----------------------------------------------------------------

// Monte-Carlo presets: fig9_cfo, fig9_phn (primary scenario of the bundle),
// awgn_qpsk.
SimScenario preset_scenario(const std::string& name);

// All scenarios needed to reproduce a figure (ideal + impaired, both
// waveforms for the fig9 pair).
std::vector<SimScenario> preset_bundle(const std::string& name);

}  // namespace afdm::sim
