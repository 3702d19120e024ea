#include <atomic>
#include <filesystem>
#include <fstream>
#include <limits>
#include <map>
#include <mutex>
#include <thread>

#include "afdm/metrics.hpp"
#include "afdm/modem.hpp"
#include "afdm/pilots.hpp"
#include "afdm/rng.hpp"
#include "afdm/scenario.hpp"

namespace afdm::sim {
namespace {

constexpr std::uint64_t kChunkFrames = 64;

// Receiver-side channel knowledge for one frame.
struct Csi {
  std::optional<SparseChannel> sparse;
  std::optional<Eigen::MatrixXcd> dense;

  const Eigen::MatrixXcd& as_dense(Eigen::MatrixXcd& scratch) const {
    if (dense.has_value()) return *dense;
    scratch = sparse->dense();
    return scratch;
  }
};

struct PointContext {
  const SimScenario* sc;
  const TransformPlan* plan;
  const Constellation* constellation;
  double noise_var;
  std::size_t snr_idx;
  std::uint64_t id_hash;
  // pilot mode
  std::optional<PilotLayout> layout;
  std::vector<std::size_t> data_positions;
};

struct FrameStats {
  std::uint64_t bits = 0;
  std::uint64_t bit_errors = 0;
  bool frame_error = false;
  double nmse = -1.0;
  int iterations = 0;
  bool converged = true;
  double residual = 0.0;
};

PathSet draw_paths(const SimScenario& sc, Rng& rng) {
  PathSet ps = sc.channel.paths;
  const double p_count = static_cast<double>(ps.paths.size());
  switch (sc.channel.draw) {
    case ChannelDraw::kFixed:
      break;
    case ChannelDraw::kIidGainsRandomDoppler: {
      std::int64_t fmax = static_cast<std::int64_t>(std::ceil(ps.f_max));
      for (auto& p : ps.paths) {
        p.gain = rng.cgaussian(1.0 / p_count);
        std::int64_t f = static_cast<std::int64_t>(
                             std::floor(rng.uniform() * (2.0 * fmax + 1.0))) -
                         fmax;
        p.doppler = static_cast<double>(std::clamp<std::int64_t>(f, -fmax, fmax));
      }
      break;
    }
    case ChannelDraw::kIidGains:
      for (auto& p : ps.paths) p.gain = rng.cgaussian(1.0 / p_count);
      break;
  }
  return ps;
}

Csi receiver_csi(const PointContext& ctx, const PathSet& ps) {
  const SimScenario& sc = *ctx.sc;
  Csi csi;
  bool integer_taps = ps.all_integer();
  if (integer_taps && !sc.channel.circulant_approx) {
    csi.sparse = SparseChannel::from_afdm_paths(sc.n, ctx.plan->chirp(), ps.paths);
  } else {
    ChannelOperator h = composite_channel(sc.n, ps, sc.channel.kernel, sc.prefix_spec(),
                                          sc.channel.circulant_approx);
    csi.dense = effective_channel(*ctx.plan, h.matrix);
  }
  return csi;
}

DetectionResult detect(const PointContext& ctx, const Csi& csi,
                       std::span<const cplx> y) {
  const SimScenario& sc = *ctx.sc;
  const Constellation& c = *ctx.constellation;
  Eigen::MatrixXcd scratch;
  switch (sc.detector) {
    case DetectorType::kZf:
      return detect_zf(csi.as_dense(scratch), y, c);
    case DetectorType::kMmse:
      // Banded channels route through the exact banded-LDL factorization of
      // the same MMSE system (verified against the dense solve in tests).
      if (csi.sparse.has_value())
        return detect_ldl_mmse(*csi.sparse, y, ctx.noise_var, c, -1);
      return detect_mmse(*csi.dense, y, ctx.noise_var, c);
    case DetectorType::kLdlMmse:
      if (csi.sparse.has_value())
        return detect_ldl_mmse(*csi.sparse, y, ctx.noise_var, c, sc.det_cfg.band_j);
      return detect_ldl_mmse(csi.as_dense(scratch), y, ctx.noise_var, c,
                             sc.det_cfg.band_j);
    case DetectorType::kMrc: {
      SparseChannel s = csi.sparse.has_value()
                            ? *csi.sparse
                            : SparseChannel::from_dense(csi.as_dense(scratch));
      return detect_mrc(s, y, ctx.noise_var, c, sc.det_cfg);
    }
    case DetectorType::kMp: {
      SparseChannel s = csi.sparse.has_value()
                            ? *csi.sparse
                            : SparseChannel::from_dense(csi.as_dense(scratch));
      return detect_mp(s, y, ctx.noise_var, c, sc.det_cfg);
    }
    case DetectorType::kMapOracle:
      return detect_map_oracle(csi.as_dense(scratch), y, ctx.noise_var, c);
  }
  throw ConfigError("detect: unknown detector");
}

FrameStats simulate_frame(const PointContext& ctx, std::uint64_t frame_idx) {
  const SimScenario& sc = *ctx.sc;
  const Constellation& c = *ctx.constellation;
  const std::size_t n = sc.n;

  std::uint64_t base =
      derive_seed(sc.master_seed, ctx.id_hash, ctx.snr_idx + 1, frame_idx + 1);
  Rng ch_rng(derive_seed(base, 0));
  Rng data_rng(derive_seed(base, 1));
  Rng noise_rng(derive_seed(base, 2));
  Rng imp_rng(derive_seed(base, 3));

  PathSet ps = draw_paths(sc, ch_rng);

  // payload
  std::vector<unsigned> tx_idx;
  CVec x(n, cplx{0.0, 0.0});
  const std::vector<std::size_t>* positions = nullptr;
  static const std::vector<std::size_t> kEmpty;
  if (ctx.layout.has_value()) {
    positions = &ctx.data_positions;
    x[ctx.layout->positions[0]] = ctx.layout->pilot_value;
  } else {
    positions = &kEmpty;
  }
  if (positions->empty()) {
    tx_idx.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
      unsigned idx = std::min<unsigned>(
          static_cast<unsigned>(data_rng.uniform() * c.order()), c.order() - 1);
      tx_idx[i] = idx;
      x[i] = c.point(idx);
    }
  } else {
    tx_idx.resize(positions->size());
    for (std::size_t i = 0; i < positions->size(); ++i) {
      unsigned idx = std::min<unsigned>(
          static_cast<unsigned>(data_rng.uniform() * c.order()), c.order() - 1);
      tx_idx[i] = idx;
      x[(*positions)[i]] = c.point(idx);
    }
  }

  // modulate
  CVec s = ctx.plan->apply(Direction::kInverse, x);

  // channel
  CVec r(n);
  bool integer_taps = ps.all_integer();
  if (integer_taps && !sc.channel.circulant_approx) {
    apply_idid_paths(ps.paths, sc.prefix_spec(), s, r);
  } else {
    ChannelOperator h = composite_channel(n, ps, sc.channel.kernel, sc.prefix_spec(),
                                          sc.channel.circulant_approx);
    Eigen::Map<const Eigen::VectorXcd> sv(s.data(), n);
    Eigen::VectorXcd rv = h.matrix * sv;
    std::copy(rv.data(), rv.data() + n, r.begin());
  }

  // impairments, then receiver noise
  if (sc.impairments.enabled()) {
    auto phi = phn_trajectory(n, sc.impairments.phn_increment_var, imp_rng);
    apply_phn_cfo(r, phi, sc.impairments.cfo);
  }
  if (ctx.noise_var > 0.0)
    for (auto& v : r) v += noise_rng.cgaussian(ctx.noise_var);

  // demodulate
  CVec y = ctx.plan->apply(Direction::kForward, r);

  // channel knowledge
  FrameStats st;
  Csi csi;
  if (ctx.layout.has_value()) {
    EstimatorOptions opts;
    opts.noise_var = ctx.noise_var;
    opts.grid_step = sc.pilot.grid_step;
    if (sc.pilot.known_p) opts.known_paths = ps.paths.size();
    DelayDopplerBounds bounds{ps.ell_max, ps.f_max};
    EstimatedChannel est;
    switch (sc.pilot.estimator) {
      case EstimatorType::kIdid:
        est = estimate_idid(y, *ctx.layout, bounds, ctx.plan->chirp(), opts);
        break;
      case EstimatorType::kFracDoppler:
        est = estimate_frac_doppler(y, *ctx.layout, bounds, ctx.plan->chirp(), opts);
        break;
      case EstimatorType::kFdfd:
        est = estimate_fdfd(y, *ctx.layout, bounds, ctx.plan->chirp(),
                            sc.channel.kernel, opts);
        break;
      case EstimatorType::kPerfectCsi:
        break;
    }
    Eigen::MatrixXcd xi_hat =
        reconstruct_effective(n, ctx.plan->chirp(), est, sc.channel.kernel);
    // NMSE against the true effective channel
    Eigen::MatrixXcd scratch;
    Csi truth = receiver_csi(ctx, ps);
    const Eigen::MatrixXcd& xi_true = truth.as_dense(scratch);
    double denom = xi_true.squaredNorm();
    st.nmse = denom > 0.0 ? (xi_hat - xi_true).squaredNorm() / denom : 0.0;
    csi.dense = std::move(xi_hat);
  } else {
    csi = receiver_csi(ctx, ps);
  }

  DetectionResult det = detect(ctx, csi, y);
  st.iterations = det.iterations;
  st.converged = det.converged;
  st.residual = det.residual_norm;

  // bit accounting over payload positions
  BerAccumulator acc;
  std::vector<unsigned> rx_idx(tx_idx.size());
  if (ctx.layout.has_value()) {
    for (std::size_t i = 0; i < positions->size(); ++i)
      rx_idx[i] = det.hard[(*positions)[i]];
  } else {
    rx_idx = det.hard;
  }
  ber_update_symbols(acc, tx_idx, rx_idx, c.bits_per_symbol());
  st.bits = acc.bits_total;
  st.bit_errors = acc.bit_errors;
  st.frame_error = acc.frame_errors > 0;
  return st;
}

struct ChunkStats {
  BerAccumulator acc;
  double nmse_sum = 0.0;
  std::uint64_t nmse_frames = 0;
};

ChunkStats run_chunk(const PointContext& ctx, std::uint64_t chunk,
                     std::uint64_t max_frames, std::ofstream* diag,
                     std::mutex* diag_mu) {
  ChunkStats cs;
  std::uint64_t lo = chunk * kChunkFrames;
  std::uint64_t hi = std::min(max_frames, lo + kChunkFrames);
  for (std::uint64_t f = lo; f < hi; ++f) {
    FrameStats st = simulate_frame(ctx, f);
    cs.acc.bit_errors += st.bit_errors;
    cs.acc.bits_total += st.bits;
    cs.acc.frames_total += 1;
    if (st.frame_error) cs.acc.frame_errors += 1;
    if (st.nmse >= 0.0) {
      cs.nmse_sum += st.nmse;
      cs.nmse_frames += 1;
    }
    if (diag != nullptr && chunk == 0) {
      std::lock_guard<std::mutex> lk(*diag_mu);
      *diag << ctx.sc->id << ',' << ctx.snr_idx << ',' << f << ',' << st.iterations
            << ',' << (st.converged ? 1 : 0) << ',' << st.residual << '\n';
    }
  }
  return cs;
}

ResultRow run_point(const SimScenario& sc, const TransformPlan& plan,
                    const Constellation& constellation, std::size_t snr_idx,
                    int workers, std::ofstream* diag, std::mutex* diag_mu) {
  PointContext ctx;
  ctx.sc = &sc;
  ctx.plan = &plan;
  ctx.constellation = &constellation;
  double ebn0 = std::pow(10.0, sc.snr_db[snr_idx] / 10.0);
  ctx.noise_var = 1.0 / (ebn0 * constellation.bits_per_symbol());
  ctx.snr_idx = snr_idx;
  ctx.id_hash = fnv1a(sc.id);
  if (sc.pilot.estimator != EstimatorType::kPerfectCsi) {
    std::size_t q = sc.pilot.guard_q > 0
                        ? sc.pilot.guard_q
                        : PilotLayout::min_guard(sc.channel.paths.ell_max,
                                                 sc.channel.paths.f_max);
    double amp = sc.pilot.amplitude > 0.0
                     ? sc.pilot.amplitude
                     : std::sqrt(2.0 * static_cast<double>(q) + 1.0);
    ctx.layout = PilotLayout::siso(sc.n, sc.pilot.position, q, cplx{amp, 0.0});
    ctx.data_positions = ctx.layout->data_positions();
  }

  const std::uint64_t n_chunks =
      (sc.max_frames + kChunkFrames - 1) / kChunkFrames;

  std::mutex mu;
  std::map<std::uint64_t, ChunkStats> done;
  std::uint64_t committed = 0;
  ChunkStats total;
  std::atomic<std::uint64_t> next{0};
  std::atomic<std::uint64_t> stop_after{n_chunks};
  bool cut_found = false;

  auto worker = [&]() {
    for (;;) {
      std::uint64_t c = next.fetch_add(1);
      if (c >= stop_after.load()) break;
      ChunkStats cs = run_chunk(ctx, c, sc.max_frames, diag, diag_mu);
      std::lock_guard<std::mutex> lk(mu);
      done[c] = cs;
      // fold the in-order prefix and evaluate the stopping rule after each
      // chunk so the cut is schedule-independent
      while (!cut_found) {
        auto it = done.find(committed);
        if (it == done.end()) break;
        total.acc.merge(it->second.acc);
        total.nmse_sum += it->second.nmse_sum;
        total.nmse_frames += it->second.nmse_frames;
        done.erase(it);
        ++committed;
        if (total.acc.frames_total >= sc.min_frames &&
            total.acc.bit_errors >= sc.target_bit_errors) {
          cut_found = true;
          stop_after.store(committed);
        }
      }
    }
  };

  int w = workers > 0 ? workers
                      : static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
  w = static_cast<int>(std::min<std::uint64_t>(w, n_chunks));
  if (w <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int i = 0; i < w; ++i) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }

  ResultRow row;
  row.scenario_id = sc.id;
  row.snr_db = sc.snr_db[snr_idx];
  row.ber = total.acc.ber();
  row.fer = total.acc.fer();
  row.frames = total.acc.frames_total;
  row.bit_errors = total.acc.bit_errors;
  row.seed = sc.master_seed;
  row.version = kVersion;
  if (total.nmse_frames > 0)
    row.nmse = total.nmse_sum / static_cast<double>(total.nmse_frames);
  return row;
}

}  // namespace

std::vector<ResultRow> run_scenario(const SimScenario& sc, int workers,
                                    const std::string& diagnostics_csv) {
  sc.validate();
  TransformPlan plan(sc.n,
                     sc.waveform == WaveformType::kOfdm ? TransformKind::kDft
                                                        : TransformKind::kDaft,
                     sc.chirp);
  Constellation constellation =
      sc.mod_order == 4 ? Constellation::qpsk() : Constellation::qam(sc.mod_order);

  std::ofstream diag_file;
  std::ofstream* diag = nullptr;
  std::mutex diag_mu;
  if (!diagnostics_csv.empty()) {
    diag_file.open(diagnostics_csv);
    if (!diag_file)
      throw std::runtime_error("run_scenario: cannot open " + diagnostics_csv);
    diag_file << "scenario_id,snr_idx,frame,iterations,converged,residual\n";
    diag = &diag_file;
  }

  std::vector<ResultRow> rows;
  for (std::size_t i = 0; i < sc.snr_db.size(); ++i) {
    try {
      rows.push_back(run_point(sc, plan, constellation, i, workers, diag, &diag_mu));
    } catch (const std::exception& e) {
      throw std::runtime_error("scenario '" + sc.id + "' failed at snr index " +
                               std::to_string(i) + ": " + e.what());
    }
  }
  return rows;
}

std::vector<ResultRow> run_scenario(const SimScenario& sc, int workers) {
  return run_scenario(sc, workers, std::string());
}

void emit_results(const std::vector<ResultRow>& rows, const std::string& out_dir,
                  const std::string& basename) {
  if (rows.empty()) throw ConfigError("emit_results: no rows");
  std::filesystem::create_directories(out_dir);
  std::string csv_path = out_dir + "/" + basename + ".csv";
  std::ofstream csv(csv_path);
  if (!csv) throw std::runtime_error("emit_results: cannot open " + csv_path);
  csv << "scenario_id,snr_db,ber,fer,nmse,frames,bit_errors,seed,version\n";
  for (const auto& r : rows) {
    csv << r.scenario_id << ',' << r.snr_db << ',' << r.ber << ',' << r.fer << ',';
    if (r.nmse >= 0.0) csv << r.nmse;
    csv << ',' << r.frames << ',' << r.bit_errors << ',' << r.seed << ','
        << r.version << '\n';
  }
  csv.close();

  std::string plot_path = out_dir + "/" + basename + "_plot.py";
  std::ofstream plot(plot_path);
  plot << "#!/usr/bin/env python3\n"
          "import csv, collections\n"
          "import matplotlib\n"
          "matplotlib.use('Agg')\n"
          "import matplotlib.pyplot as plt\n"
          "curves = collections.defaultdict(list)\n"
          "with open('"
       << basename
       << ".csv') as f:\n"
          "    for row in csv.DictReader(f):\n"
          "        curves[row['scenario_id']].append((float(row['snr_db']), "
          "float(row['ber'])))\n"
          "for name, pts in curves.items():\n"
          "    pts.sort()\n"
          "    plt.semilogy([p[0] for p in pts], [max(p[1], 1e-12) for p in pts], "
          "marker='o', label=name)\n"
          "plt.xlabel('Eb/N0 [dB]')\n"
          "plt.ylabel('BER')\n"
          "plt.grid(True, which='both', alpha=0.3)\n"
          "plt.legend()\n"
          "plt.savefig('"
       << basename << ".png', dpi=150)\n";
}

double snr_at_ber(const std::vector<ResultRow>& rows, double target_ber) {
  for (std::size_t i = 1; i < rows.size(); ++i) {
    double b0 = rows[i - 1].ber;
    double b1 = rows[i].ber;
    if (b0 >= target_ber && b1 <= target_ber && b1 > 0.0 && b0 > 0.0) {
      double l0 = std::log10(b0), l1 = std::log10(b1), lt = std::log10(target_ber);
      if (l0 == l1) return rows[i - 1].snr_db;
      double t = (lt - l0) / (l1 - l0);
      return rows[i - 1].snr_db + t * (rows[i].snr_db - rows[i - 1].snr_db);
    }
  }
  return std::numeric_limits<double>::quiet_NaN();
}

}  // namespace afdm::sim
