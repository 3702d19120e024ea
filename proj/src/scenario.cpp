#include "afdm/scenario.hpp"

#include <fstream>
#include <json.hpp>
#include <sstream>

namespace afdm::sim {

using nlohmann::json;

void SimScenario::validate() const {
  if (n < 2) throw ConfigError("scenario: n must be >= 2");
  if (snr_db.empty()) throw ConfigError("scenario: snr_db must be nonempty");
  if (max_frames < min_frames) throw ConfigError("scenario: max_frames < min_frames");
  channel.paths.validate();
  impairments.validate(n);
  det_cfg.validate();
  if (waveform == WaveformType::kOfdm && chirp.lambda1 != 0.0)
    throw ConfigError("scenario: OFDM carries no chirp parameters");
  if (detector == DetectorType::kMp && impairments.enabled())
    throw ConfigError("scenario: MP detection assumes an integer-tap channel; "
                      "impairments make it dense");
  if (pilot.estimator != EstimatorType::kPerfectCsi) {
    if (waveform != WaveformType::kAfdm)
      throw ConfigError("scenario: DAFT-domain estimation requires the AFDM waveform");
  }
  if (detector == DetectorType::kMapOracle &&
      std::pow(static_cast<double>(mod_order), static_cast<double>(n)) > 1e7)
    throw ConfigError("scenario: MAP oracle instance too large");
}

PrefixSpec SimScenario::prefix_spec() const {
  if (waveform == WaveformType::kAfdm && channel.cpp_prefix)
    return PrefixSpec::cpp(prefix_length(), chirp.lambda1);
  return PrefixSpec::cp(prefix_length());
}

std::size_t SimScenario::prefix_length() const {
  if (channel.n_cp > 0) return channel.n_cp;
  return static_cast<std::size_t>(std::ceil(channel.paths.ell_max)) +
         static_cast<std::size_t>(channel.kernel.half_width);
}

namespace {

std::string waveform_name(WaveformType w) {
  return w == WaveformType::kOfdm ? "ofdm" : "afdm";
}

WaveformType waveform_from(const std::string& s) {
  if (s == "ofdm") return WaveformType::kOfdm;
  if (s == "afdm") return WaveformType::kAfdm;
  throw ConfigError("scenario: unknown waveform " + s);
}

std::string detector_name(DetectorType d) {
  switch (d) {
    case DetectorType::kZf: return "zf";
    case DetectorType::kMmse: return "mmse";
    case DetectorType::kLdlMmse: return "ldl_mmse";
    case DetectorType::kMrc: return "mrc";
    case DetectorType::kMp: return "mp";
    case DetectorType::kMapOracle: return "map_oracle";
  }
  return "mmse";
}

DetectorType detector_from(const std::string& s) {
  if (s == "zf") return DetectorType::kZf;
  if (s == "mmse") return DetectorType::kMmse;
  if (s == "ldl_mmse") return DetectorType::kLdlMmse;
  if (s == "mrc") return DetectorType::kMrc;
  if (s == "mp") return DetectorType::kMp;
  if (s == "map_oracle") return DetectorType::kMapOracle;
  throw ConfigError("scenario: unknown detector " + s);
}

std::string draw_name(ChannelDraw d) {
  switch (d) {
    case ChannelDraw::kFixed: return "fixed";
    case ChannelDraw::kIidGains: return "iid_gains";
    case ChannelDraw::kIidGainsRandomDoppler: return "iid_gains_random_doppler";
  }
  return "fixed";
}

ChannelDraw draw_from(const std::string& s) {
  if (s == "fixed") return ChannelDraw::kFixed;
  if (s == "iid_gains") return ChannelDraw::kIidGains;
  if (s == "iid_gains_random_doppler") return ChannelDraw::kIidGainsRandomDoppler;
  throw ConfigError("scenario: unknown channel draw " + s);
}

std::string estimator_name(EstimatorType e) {
  switch (e) {
    case EstimatorType::kPerfectCsi: return "perfect_csi";
    case EstimatorType::kIdid: return "idid";
    case EstimatorType::kFracDoppler: return "frac_doppler";
    case EstimatorType::kFdfd: return "fdfd";
  }
  return "perfect_csi";
}

EstimatorType estimator_from(const std::string& s) {
  if (s == "perfect_csi") return EstimatorType::kPerfectCsi;
  if (s == "idid") return EstimatorType::kIdid;
  if (s == "frac_doppler") return EstimatorType::kFracDoppler;
  if (s == "fdfd") return EstimatorType::kFdfd;
  throw ConfigError("scenario: unknown estimator " + s);
}

std::string shape_name(PulseShape s) {
  switch (s) {
    case PulseShape::kSinc: return "sinc";
    case PulseShape::kRaisedCosine: return "raised_cosine";
    case PulseShape::kRectangular: return "rectangular";
  }
  return "sinc";
}

PulseShape shape_from(const std::string& s) {
  if (s == "sinc") return PulseShape::kSinc;
  if (s == "raised_cosine") return PulseShape::kRaisedCosine;
  if (s == "rectangular") return PulseShape::kRectangular;
  throw ConfigError("scenario: unknown pulse shape " + s);
}

}  // namespace

std::string scenario_to_json(const SimScenario& sc) {
  json j;
  j["id"] = sc.id;
  j["n"] = sc.n;
  j["waveform"] = waveform_name(sc.waveform);
  j["chirp"] = {{"lambda1", sc.chirp.lambda1},
                {"lambda2", sc.chirp.lambda2},
                {"guard_xi", sc.chirp.guard_xi}};
  j["mod_order"] = sc.mod_order;
  json paths = json::array();
  for (const auto& p : sc.channel.paths.paths)
    paths.push_back({{"gain_re", p.gain.real()},
                     {"gain_im", p.gain.imag()},
                     {"delay", p.delay},
                     {"doppler", p.doppler}});
  j["channel"] = {
      {"paths", paths},
      {"ell_max", sc.channel.paths.ell_max},
      {"f_max", sc.channel.paths.f_max},
      {"kernel",
       {{"shape", shape_name(sc.channel.kernel.shape)},
        {"rolloff", sc.channel.kernel.rolloff},
        {"half_width", sc.channel.kernel.half_width}}},
      {"cpp_prefix", sc.channel.cpp_prefix},
      {"n_cp", sc.channel.n_cp},
      {"draw", draw_name(sc.channel.draw)},
      {"circulant_approx", sc.channel.circulant_approx}};
  j["pilot"] = {{"estimator", estimator_name(sc.pilot.estimator)},
                {"position", sc.pilot.position},
                {"guard_q", sc.pilot.guard_q},
                {"grid_step", sc.pilot.grid_step},
                {"known_p", sc.pilot.known_p},
                {"amplitude", sc.pilot.amplitude}};
  j["detector"] = {{"type", detector_name(sc.detector)},
                   {"band_j", sc.det_cfg.band_j},
                   {"max_iter", sc.det_cfg.max_iter},
                   {"tol", sc.det_cfg.tol},
                   {"damping", sc.det_cfg.damping},
                   {"gamma", sc.det_cfg.gamma},
                   {"patience_eps", sc.det_cfg.patience_eps}};
  j["impairments"] = {{"phn_var", sc.impairments.phn_increment_var},
                      {"cfo", sc.impairments.cfo},
                      {"lo", sc.impairments.lo == LoMode::kClo ? "clo" : "slo"}};
  j["snr_db"] = sc.snr_db;
  j["min_frames"] = sc.min_frames;
  j["max_frames"] = sc.max_frames;
  j["target_bit_errors"] = sc.target_bit_errors;
  j["master_seed"] = sc.master_seed;
  return j.dump(2);
}

SimScenario scenario_from_json(const std::string& text) {
  json j = json::parse(text);
  SimScenario sc;
  sc.id = j.value("id", std::string("scenario"));
  sc.n = j.at("n").get<std::size_t>();
  sc.waveform = waveform_from(j.value("waveform", std::string("afdm")));
  if (j.contains("chirp")) {
    sc.chirp.lambda1 = j["chirp"].value("lambda1", 0.0);
    sc.chirp.lambda2 = j["chirp"].value("lambda2", 0.0);
    sc.chirp.guard_xi = j["chirp"].value("guard_xi", 0);
  }
  sc.mod_order = j.value("mod_order", 4u);
  const json& ch = j.at("channel");
  for (const auto& p : ch.at("paths"))
    sc.channel.paths.paths.push_back(
        {cplx{p.value("gain_re", 0.0), p.value("gain_im", 0.0)},
         p.value("delay", 0.0), p.value("doppler", 0.0)});
  sc.channel.paths.ell_max = ch.value("ell_max", 0.0);
  sc.channel.paths.f_max = ch.value("f_max", 0.0);
  if (ch.contains("kernel")) {
    sc.channel.kernel.shape = shape_from(ch["kernel"].value("shape", std::string("sinc")));
    sc.channel.kernel.rolloff = ch["kernel"].value("rolloff", 0.0);
    sc.channel.kernel.half_width = ch["kernel"].value("half_width", 8);
  }
  sc.channel.cpp_prefix = ch.value("cpp_prefix", true);
  sc.channel.n_cp = ch.value("n_cp", std::size_t{0});
  sc.channel.draw = draw_from(ch.value("draw", std::string("fixed")));
  sc.channel.circulant_approx = ch.value("circulant_approx", false);
  if (j.contains("pilot")) {
    const json& pj = j["pilot"];
    sc.pilot.estimator = estimator_from(pj.value("estimator", std::string("perfect_csi")));
    sc.pilot.position = pj.value("position", std::size_t{0});
    sc.pilot.guard_q = pj.value("guard_q", std::size_t{0});
    sc.pilot.grid_step = pj.value("grid_step", 0.01);
    sc.pilot.known_p = pj.value("known_p", true);
    sc.pilot.amplitude = pj.value("amplitude", 1.0);
  }
  if (j.contains("detector")) {
    const json& dj = j["detector"];
    sc.detector = detector_from(dj.value("type", std::string("mmse")));
    sc.det_cfg.band_j = dj.value("band_j", -1);
    sc.det_cfg.max_iter = dj.value("max_iter", 50);
    sc.det_cfg.tol = dj.value("tol", 1e-6);
    sc.det_cfg.damping = dj.value("damping", 0.6);
    sc.det_cfg.gamma = dj.value("gamma", 0.01);
    sc.det_cfg.patience_eps = dj.value("patience_eps", 0.2);
  }
  if (j.contains("impairments")) {
    const json& ij = j["impairments"];
    sc.impairments.phn_increment_var = ij.value("phn_var", 0.0);
    sc.impairments.cfo = ij.value("cfo", 0.0);
    sc.impairments.lo = ij.value("lo", std::string("clo")) == "slo" ? LoMode::kSlo
                                                                    : LoMode::kClo;
  }
  sc.snr_db = j.at("snr_db").get<std::vector<double>>();
  sc.min_frames = j.value("min_frames", std::uint64_t{100});
  sc.max_frames = j.value("max_frames", std::uint64_t{100000});
  sc.target_bit_errors = j.value("target_bit_errors", std::uint64_t{200});
  sc.master_seed = j.value("master_seed", std::uint64_t{1});
  sc.validate();
  return sc;
}

SimScenario load_scenario_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open scenario file " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return scenario_from_json(ss.str());
}

// ---- presets ----------------------------------------------------------------
namespace {

std::vector<double> linspace_db(double lo, double hi, double step) {
  std::vector<double> v;
  for (double x = lo; x <= hi + 1e-9; x += step) v.push_back(x);
  return v;
}

// Documented Fig. 9 profile: P = 3, integer delays {0,1,2}, per-frame
// CN(0,1/P) gains, per-frame uniform integer Dopplers in [-2, 2]. The AFDM
// receiver runs the pilot-aided fractional-Doppler estimator (a boosted pilot
// reallocating the guard-band energy), so deterministic LO offsets fold into
// the estimated Doppler; the OFDM receiver gets genie channel-only CSI since
// the affine-domain estimator requires the AFDM lambda1 condition.
SimScenario fig9_base(WaveformType w) {
  SimScenario sc;
  sc.n = 128;
  sc.waveform = w;
  sc.mod_order = 4;
  const double f_max = 2.0;
  if (w == WaveformType::kAfdm) {
    sc.chirp.lambda1 = ChirpParams::min_lambda1(f_max, 0, sc.n);  // 5/256
    sc.chirp.lambda2 = 1.0 / (2.0 * static_cast<double>(sc.n));
    sc.pilot.estimator = EstimatorType::kFracDoppler;
    sc.pilot.position = 64;
    sc.pilot.grid_step = 0.01;
    sc.pilot.known_p = true;
    sc.pilot.amplitude = 0.0;  // sqrt(2Q+1)
  }
  sc.channel.paths.paths = {{cplx{1.0, 0.0}, 0.0, 0.0},
                            {cplx{1.0, 0.0}, 1.0, 0.0},
                            {cplx{1.0, 0.0}, 2.0, 0.0}};
  sc.channel.paths.ell_max = 2.0;
  sc.channel.paths.f_max = f_max;
  sc.channel.draw = ChannelDraw::kIidGainsRandomDoppler;
  sc.detector = DetectorType::kMmse;
  sc.min_frames = 200;
  sc.max_frames = 100000;
  sc.target_bit_errors = 200;
  sc.master_seed = 9;
  return sc;
}

}  // namespace

std::vector<SimScenario> preset_bundle(const std::string& name) {
  std::vector<SimScenario> out;
  if (name == "fig9_cfo" || name == "fig9_phn") {
    for (WaveformType w : {WaveformType::kAfdm, WaveformType::kOfdm}) {
      bool afdm = w == WaveformType::kAfdm;
      SimScenario ideal = fig9_base(w);
      ideal.id = std::string(afdm ? "afdm" : "ofdm") + "_ideal";
      ideal.snr_db = afdm ? linspace_db(0, 18, 2) : linspace_db(0, 34, 2);
      out.push_back(ideal);
      SimScenario imp = ideal;
      if (name == "fig9_cfo") {
        imp.id = std::string(afdm ? "afdm" : "ofdm") + "_cfo";
        imp.impairments.cfo = 0.1;
      } else {
        imp.id = std::string(afdm ? "afdm" : "ofdm") + "_phn";
        // calibration choice: strong enough that the OFDM chain degrades
        // visibly at N=128 QPSK while AFDM stays clear of its ICI floor
        imp.impairments.phn_increment_var = 5e-4;
      }
      imp.snr_db = afdm ? linspace_db(0, 20, 2) : linspace_db(0, 40, 2);
      out.push_back(imp);
    }
    return out;
  }
  if (name == "awgn_qpsk") {
    SimScenario sc;
    sc.id = "awgn_qpsk";
    sc.n = 128;
    sc.waveform = WaveformType::kOfdm;
    sc.mod_order = 4;
    sc.channel.paths.paths = {{cplx{1.0, 0.0}, 0.0, 0.0}};
    sc.channel.paths.ell_max = 0.0;
    sc.channel.paths.f_max = 0.0;
    sc.channel.draw = ChannelDraw::kFixed;
    sc.detector = DetectorType::kZf;
    sc.snr_db = {0, 2, 4, 6, 8};
    sc.min_frames = 500;
    sc.max_frames = 200000;
    sc.target_bit_errors = 2000;
    sc.master_seed = 7;
    out.push_back(sc);
    return out;
  }
  throw ConfigError("unknown Monte-Carlo preset " + name);
}

SimScenario preset_scenario(const std::string& name) {
  auto bundle = preset_bundle(name);
  if (name == "fig9_cfo") return bundle[1];  // AFDM with theta_CFO = 0.1
  if (name == "fig9_phn") return bundle[1];
  return bundle[0];
}

}  // namespace afdm::sim
