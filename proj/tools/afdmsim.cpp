// Scenario-driven link-level simulation CLI.
//
//   afdmsim simulate <scenario.json> --out DIR [--seed S] [--workers W]
//   afdmsim preset <name> --out DIR
//   afdmsim dump-channel <scenario.json> --domain {time,effective} [--out FILE]
//   afdmsim dump-iq <scenario.json> --out FILE [--frames K]
//   afdmsim cost-table --n N1,N2,... [--out FILE]

#include <CLI11.hpp>
#include <filesystem>
#include <fstream>
#include <iostream>

#include "afdm/metrics.hpp"
#include "afdm/modem.hpp"
#include "afdm/pilots.hpp"
#include "afdm/rng.hpp"
#include "afdm/scenario.hpp"

namespace {

using namespace afdm;
using namespace afdm::sim;

void ensure_parent_dir(const std::string& path) {
  std::filesystem::path p(path);
  if (p.has_parent_path()) std::filesystem::create_directories(p.parent_path());
}

void write_matrix_abs_csv(const std::string& path, const Eigen::MatrixXcd& m) {
  ensure_parent_dir(path);
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path);
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    for (Eigen::Index c = 0; c < m.cols(); ++c) {
      if (c > 0) out << ',';
      out << std::abs(m(r, c));
    }
    out << '\n';
  }
}

Eigen::MatrixXcd scenario_channel_matrix(const SimScenario& sc) {
  Rng rng(derive_seed(sc.master_seed, fnv1a(sc.id), 0));
  PathSet ps = sc.channel.paths;
  return composite_channel(sc.n, ps, sc.channel.kernel, sc.prefix_spec(),
                           sc.channel.circulant_approx)
      .matrix;
}

void write_cost_table(const std::string& path, const std::vector<std::size_t>& sizes) {
  ensure_parent_dir(path);
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path);
  out << "waveform,N,K,L,flops,overhead_vs_ofdm\n";
  for (std::size_t n : sizes) {
    std::size_t k = 1;
    while (k * k < n) k <<= 1;
    std::size_t l = n / k;
    double ofdm = flops({WaveformCost::kOfdm, n, 0, 0});
    out << "ofdm," << n << ",,," << ofdm << ",0\n";
    out << "afdm," << n << ",,," << flops({WaveformCost::kAfdm, n, 0, 0}) << ','
        << afdm_overhead_approx(n) << '\n';
    if (k >= 2 && l >= 2 && k * l == n) {
      out << "otfs," << n << ',' << k << ',' << l << ','
          << flops({WaveformCost::kOtfs, n, k, l}) << ','
          << (flops({WaveformCost::kOtfs, n, k, l}) - ofdm) / ofdm << '\n';
      out << "zak_otfs," << n << ',' << k << ',' << l << ','
          << flops({WaveformCost::kZakOtfs, n, k, l}) << ','
          << (flops({WaveformCost::kZakOtfs, n, k, l}) - ofdm) / ofdm << '\n';
    }
  }
}

void emit_preset(const std::string& name, const std::string& out_dir) {
  namespace fs = std::filesystem;
  fs::create_directories(out_dir);
  const std::size_t n = 64;

  if (name == "fig1") {
    PrefixSpec cpp = PrefixSpec::cpp(0, 7.0 / 128.0);
    PulseKernel sinc = PulseKernel::sinc(8);
    write_matrix_abs_csv(out_dir + "/fig1a_idid_classic.csv",
                         per_path_idid(n, 4, 2.0, cpp));
    Eigen::MatrixXcd psi = psi_matrix(n, 4.0, sinc, cpp);
    CVec v = doppler_diag(n, 2.0);
    for (std::size_t r = 0; r < n; ++r) psi.row(r) *= v[r];
    write_matrix_abs_csv(out_dir + "/fig1b_idid_generalized.csv", psi);
    Eigen::MatrixXcd psi_f = psi_matrix(n, 4.3, sinc, cpp);
    CVec vf = doppler_diag(n, 2.1);
    for (std::size_t r = 0; r < n; ++r) psi_f.row(r) *= vf[r];
    write_matrix_abs_csv(out_dir + "/fig1c_fdfd.csv", psi_f);
    return;
  }
  if (name == "fig2") {
    PrefixSpec cpp = PrefixSpec::cpp(0, 7.0 / 128.0);
    auto dump = [&](const PulseKernel& k, const std::string& file) {
      Eigen::MatrixXcd psi = psi_matrix(n, 4.3, k, cpp);
      CVec v = doppler_diag(n, 2.1);
      for (std::size_t r = 0; r < n; ++r) psi.row(r) *= v[r];
      write_matrix_abs_csv(out_dir + "/" + file, psi);
    };
    dump(PulseKernel::sinc(8), "fig2a_sinc.csv");
    dump(PulseKernel::raised_cosine(0.5, 8), "fig2b_raised_cosine.csv");
    dump(PulseKernel::rectangular(), "fig2c_rectangular.csv");
    return;
  }
  if (name == "fig5") {
    ChirpParams cp;
    cp.lambda1 = (2.0 * (3.0 + 1.0) + 1.0) / (2.0 * n);  // f_max = 3, guard 1
    cp.lambda2 = 1.0 / (2.0 * n);
    cp.guard_xi = 1;
    PathSet fdfd;
    fdfd.paths = {{cplx{1.0, 0.0}, 1.3, 1.1},
                  {cplx{0.9, 0.0}, 3.25, -2.3},
                  {cplx{0.8, 0.0}, 5.96, 0.85}};
    fdfd.ell_max = 6.0;
    fdfd.f_max = 3.0;
    auto rounded = [&](bool round_doppler) {
      PathSet ps = fdfd;
      for (auto& p : ps.paths) {
        p.delay = std::round(p.delay);
        if (round_doppler) p.doppler = std::round(p.doppler);
      }
      return ps;
    };
    PulseKernel sinc = PulseKernel::sinc(8);
    struct Regime {
      const char* tag;
      PathSet ps;
    };
    std::vector<Regime> regimes{{"idid", rounded(true)},
                                {"idfd", rounded(false)},
                                {"fdfd", fdfd}};
    for (const auto& reg : regimes) {
      for (bool afdm : {false, true}) {
        PrefixSpec prefix =
            afdm ? PrefixSpec::cpp(0, cp.lambda1) : PrefixSpec::cp(0);
        ChannelOperator h = composite_channel(n, reg.ps, sinc, prefix);
        TransformPlan plan(n, afdm ? TransformKind::kDaft : TransformKind::kDft, cp);
        write_matrix_abs_csv(out_dir + "/fig5_" + (afdm ? "afdm_" : "ofdm_") +
                                 reg.tag + ".csv",
                             effective_channel(plan, h.matrix));
      }
    }
    return;
  }
  if (name == "table1") {
    write_cost_table(out_dir + "/table1_cost.csv", {256, 1024, 4096});
    return;
  }
  // Monte-Carlo presets: write every scenario of the bundle.
  auto bundle = preset_bundle(name);
  for (const auto& sc : bundle) {
    std::ofstream out(out_dir + "/" + name + "_" + sc.id + ".json");
    out << scenario_to_json(sc) << '\n';
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"AFDM/OFDM link-level waveform laboratory"};
  app.require_subcommand(1);

  // simulate
  std::string sim_file, sim_out = ".", sim_diag;
  std::int64_t sim_seed = -1;
  int sim_workers = 0;
  auto* sim_cmd = app.add_subcommand("simulate", "run a Monte-Carlo BER scenario");
  sim_cmd->add_option("scenario", sim_file, "scenario JSON file")->required();
  sim_cmd->add_option("--out", sim_out, "output directory");
  sim_cmd->add_option("--seed", sim_seed, "override master seed");
  sim_cmd->add_option("--workers", sim_workers, "worker threads (0 = auto)");
  sim_cmd->add_option("--diagnostics", sim_diag, "per-block diagnostics CSV");

  // preset
  std::string preset_name, preset_out = ".";
  auto* preset_cmd = app.add_subcommand("preset", "emit a bundled preset");
  preset_cmd->add_option("name", preset_name,
                         "fig1|fig2|fig5|fig9_cfo|fig9_phn|table1|awgn_qpsk")
      ->required();
  preset_cmd->add_option("--out", preset_out, "output directory");

  // dump-channel
  std::string dump_file, dump_domain = "time", dump_out = "channel.csv";
  auto* dump_cmd = app.add_subcommand("dump-channel", "dump |H| or |Xi| as CSV");
  dump_cmd->add_option("scenario", dump_file, "scenario JSON file")->required();
  dump_cmd->add_option("--domain", dump_domain, "time|effective");
  dump_cmd->add_option("--out", dump_out, "output CSV path");

  // dump-iq
  std::string iq_file, iq_out = "frames.iq";
  int iq_frames = 1;
  auto* iq_cmd = app.add_subcommand("dump-iq", "dump modulated frames as float32 I/Q");
  iq_cmd->add_option("scenario", iq_file, "scenario JSON file")->required();
  iq_cmd->add_option("--out", iq_out, "output binary path");
  iq_cmd->add_option("--frames", iq_frames, "number of frames");

  // cost-table
  std::string cost_sizes = "256,1024,4096", cost_out = "cost_table.csv";
  auto* cost_cmd = app.add_subcommand("cost-table", "modulator FLOP cost table");
  cost_cmd->add_option("--n", cost_sizes, "comma-separated block sizes");
  cost_cmd->add_option("--out", cost_out, "output CSV path");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*sim_cmd) {
      SimScenario sc = load_scenario_file(sim_file);
      if (sim_seed >= 0) sc.master_seed = static_cast<std::uint64_t>(sim_seed);
      std::filesystem::create_directories(sim_out);
      if (!sim_diag.empty() && std::filesystem::path(sim_diag).has_parent_path())
        std::filesystem::create_directories(std::filesystem::path(sim_diag).parent_path());
      auto rows = run_scenario(sc, sim_workers, sim_diag);
      emit_results(rows, sim_out, sc.id);
      for (const auto& r : rows)
        std::cout << r.scenario_id << " snr=" << r.snr_db << " dB  ber=" << r.ber
                  << "  frames=" << r.frames << '\n';
    } else if (*preset_cmd) {
      emit_preset(preset_name, preset_out);
      std::cout << "preset '" << preset_name << "' written to " << preset_out << '\n';
    } else if (*dump_cmd) {
      SimScenario sc = load_scenario_file(dump_file);
      Eigen::MatrixXcd h = scenario_channel_matrix(sc);
      if (dump_domain == "time") {
        write_matrix_abs_csv(dump_out, h);
      } else if (dump_domain == "effective") {
        TransformPlan plan(sc.n,
                           sc.waveform == WaveformType::kOfdm ? TransformKind::kDft
                                                              : TransformKind::kDaft,
                           sc.chirp);
        write_matrix_abs_csv(dump_out, effective_channel(plan, h));
      } else {
        throw ConfigError("dump-channel: domain must be time or effective");
      }
      std::cout << "wrote " << dump_out << '\n';
    } else if (*iq_cmd) {
      SimScenario sc = load_scenario_file(iq_file);
      TransformPlan plan(sc.n,
                         sc.waveform == WaveformType::kOfdm ? TransformKind::kDft
                                                            : TransformKind::kDaft,
                         sc.chirp);
      Constellation c = sc.mod_order == 4 ? Constellation::qpsk()
                                          : Constellation::qam(sc.mod_order);
      ensure_parent_dir(iq_out);
      CVec all;
      for (int f = 0; f < iq_frames; ++f) {
        Rng rng(derive_seed(sc.master_seed, fnv1a(sc.id), 1, f + 1));
        CVec x(sc.n);
        for (auto& v : x)
          v = c.point(std::min<unsigned>(
              static_cast<unsigned>(rng.uniform() * c.order()), c.order() - 1));
        CVec s = modulate(plan, x);
        CVec cp = add_prefix(s, sc.prefix_spec());
        all.insert(all.end(), cp.begin(), cp.end());
      }
      write_iq_float32(iq_out, all);
      std::cout << "wrote " << all.size() << " samples to " << iq_out << '\n';
    } else if (*cost_cmd) {
      std::vector<std::size_t> sizes;
      std::stringstream ss(cost_sizes);
      std::string tok;
      while (std::getline(ss, tok, ',')) sizes.push_back(std::stoull(tok));
      write_cost_table(cost_out, sizes);
      std::cout << "wrote " << cost_out << '\n';
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
