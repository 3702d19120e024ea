#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "afdm/scenario.hpp"
#include "oracles.hpp"

using namespace afdm;
using namespace afdm::sim;

namespace {

SimScenario small_scenario() {
  SimScenario sc;
  sc.id = "unit";
  sc.n = 32;
  sc.waveform = WaveformType::kAfdm;
  sc.chirp.lambda1 = ChirpParams::min_lambda1(1.0, 0, sc.n);
  sc.chirp.lambda2 = 1.0 / 64.0;
  sc.channel.paths.paths = {{cplx{1.0, 0.0}, 0.0, 0.0}, {cplx{1.0, 0.0}, 1.0, 0.0}};
  sc.channel.paths.ell_max = 1;
  sc.channel.paths.f_max = 1;
  sc.channel.draw = ChannelDraw::kIidGainsRandomDoppler;
  sc.detector = DetectorType::kMmse;
  sc.snr_db = {6.0, 10.0};
  sc.min_frames = 128;
  sc.max_frames = 512;
  sc.target_bit_errors = 100;
  sc.master_seed = 11;
  return sc;
}

}  // namespace

TEST_CASE("noiseless perfect-CSI ZF gives zero errors") {
  SimScenario sc = small_scenario();
  sc.detector = DetectorType::kZf;
  sc.snr_db = {300.0};  // effectively noiseless
  sc.max_frames = 192;
  sc.target_bit_errors = 1;
  auto rows = run_scenario(sc, 1);
  REQUIRE(rows.size() == 1);
  CHECK(rows[0].bit_errors == 0);
  CHECK(rows[0].ber == 0.0);
  CHECK(rows[0].frames == 192);
}

TEST_CASE("worker count does not change the result") {
  SimScenario sc = small_scenario();
  auto r1 = run_scenario(sc, 1);
  auto r4 = run_scenario(sc, 4);
  REQUIRE(r1.size() == r4.size());
  for (std::size_t i = 0; i < r1.size(); ++i) {
    CHECK(r1[i].bit_errors == r4[i].bit_errors);
    CHECK(r1[i].frames == r4[i].frames);
    CHECK(r1[i].ber == r4[i].ber);
  }
}

TEST_CASE("disabling already-absent impairments reproduces rows exactly") {
  SimScenario sc = small_scenario();
  auto base = run_scenario(sc, 2);
  SimScenario sc2 = sc;
  sc2.impairments = ImpairmentConfig{};  // explicit no-op
  auto again = run_scenario(sc2, 1);
  for (std::size_t i = 0; i < base.size(); ++i) {
    CHECK(base[i].bit_errors == again[i].bit_errors);
    CHECK(base[i].frames == again[i].frames);
  }
}

TEST_CASE("awgn identity-channel OFDM QPSK tracks the closed form") {
  SimScenario sc;
  sc.id = "awgn_unit";
  sc.n = 64;
  sc.waveform = WaveformType::kOfdm;
  sc.channel.paths.paths = {{cplx{1.0, 0.0}, 0.0, 0.0}};
  sc.channel.paths.ell_max = 0;
  sc.channel.paths.f_max = 0;
  sc.detector = DetectorType::kZf;
  sc.snr_db = {4.0};
  sc.min_frames = 300;
  sc.max_frames = 2000;
  sc.target_bit_errors = 800;
  sc.master_seed = 3;
  auto rows = run_scenario(sc, 2);
  double ebn0 = std::pow(10.0, 0.4);
  double expect = oracle::q_function(std::sqrt(2.0 * ebn0));
  // 3-sigma binomial interval around the true BER
  double sigma = std::sqrt(expect * (1.0 - expect) / static_cast<double>(rows[0].frames * 128));
  CHECK(std::abs(rows[0].ber - expect) < 3.0 * sigma + 1e-12);
}

TEST_CASE("scenario json round trip") {
  SimScenario sc = small_scenario();
  sc.impairments.cfo = 0.1;
  sc.pilot.estimator = EstimatorType::kIdid;
  sc.pilot.position = 20;
  std::string text = scenario_to_json(sc);
  SimScenario back = scenario_from_json(text);
  CHECK(back.id == sc.id);
  CHECK(back.n == sc.n);
  CHECK(back.chirp.lambda1 == sc.chirp.lambda1);
  CHECK(back.channel.paths.paths.size() == 2);
  CHECK(back.impairments.cfo == 0.1);
  CHECK(back.pilot.estimator == EstimatorType::kIdid);
  CHECK(back.detector == DetectorType::kMmse);
  CHECK(back.snr_db == sc.snr_db);
}

TEST_CASE("scenario validation rejects bad configs") {
  SimScenario sc = small_scenario();
  sc.snr_db.clear();
  CHECK_THROWS_AS(sc.validate(), ConfigError);

  SimScenario sc2 = small_scenario();
  sc2.waveform = WaveformType::kOfdm;  // keeps lambda1 != 0
  CHECK_THROWS_AS(sc2.validate(), ConfigError);

  SimScenario sc3 = small_scenario();
  sc3.detector = DetectorType::kMp;
  sc3.impairments.cfo = 0.1;
  CHECK_THROWS_AS(sc3.validate(), ConfigError);
}

TEST_CASE("emit_results writes the documented CSV layout") {
  SimScenario sc = small_scenario();
  sc.snr_db = {8.0};
  sc.max_frames = 128;
  sc.target_bit_errors = 50;
  auto rows = run_scenario(sc, 1);
  emit_results(rows, "engine_out", "unit");
  std::ifstream csv("engine_out/unit.csv");
  REQUIRE(csv.good());
  std::string header;
  std::getline(csv, header);
  CHECK(header == "scenario_id,snr_db,ber,fer,nmse,frames,bit_errors,seed,version");
  CHECK(std::filesystem::exists("engine_out/unit_plot.py"));

  // byte-identical on re-run with the same seed
  emit_results(run_scenario(sc, 3), "engine_out", "unit2");
  std::ifstream a("engine_out/unit.csv"), b("engine_out/unit2.csv");
  std::stringstream sa, sb;
  sa << a.rdbuf();
  sb << b.rdbuf();
  CHECK(sa.str() == sb.str());
}

TEST_CASE("estimated-CSI scenario reports NMSE and decent detection") {
  SimScenario sc;
  sc.id = "est_unit";
  sc.n = 64;
  sc.waveform = WaveformType::kAfdm;
  sc.chirp.lambda1 = ChirpParams::min_lambda1(1.0, 0, sc.n);
  sc.chirp.lambda2 = 1.0 / 128.0;
  sc.channel.paths.paths = {{cplx{0.8, 0.0}, 0.0, 1.0}, {cplx{0.6, 0.0}, 2.0, -1.0}};
  sc.channel.paths.ell_max = 2;
  sc.channel.paths.f_max = 1;
  sc.channel.draw = ChannelDraw::kIidGains;
  sc.pilot.estimator = EstimatorType::kIdid;
  sc.pilot.position = 40;
  sc.detector = DetectorType::kMmse;
  sc.snr_db = {25.0};
  sc.min_frames = 60;
  sc.max_frames = 60;
  sc.target_bit_errors = 1u << 30;
  sc.master_seed = 5;
  auto rows = run_scenario(sc, 2);
  REQUIRE(rows.size() == 1);
  CHECK(rows[0].nmse >= 0.0);
  CHECK(rows[0].nmse < 0.05);
  CHECK(rows[0].ber < 0.05);
}

TEST_CASE("presets populate the documented parameters") {
  SimScenario cfo = preset_scenario("fig9_cfo");
  CHECK(cfo.n == 128);
  CHECK(cfo.mod_order == 4);
  CHECK(cfo.impairments.cfo == doctest::Approx(0.1));
  CHECK(cfo.channel.paths.paths.size() == 3);
  CHECK(cfo.detector == DetectorType::kMmse);
  CHECK(cfo.waveform == WaveformType::kAfdm);

  auto bundle = preset_bundle("fig9_phn");
  CHECK(bundle.size() == 4);
  bool has_phn = false;
  for (const auto& s : bundle)
    if (s.impairments.phn_increment_var == doctest::Approx(1e-4)) has_phn = true;
  CHECK(has_phn);

  CHECK_THROWS_AS(preset_bundle("nope"), ConfigError);
}

TEST_CASE("snr_at_ber interpolates on the log scale") {
  std::vector<ResultRow> rows(3);
  rows[0].snr_db = 0.0;
  rows[0].ber = 1e-1;
  rows[1].snr_db = 10.0;
  rows[1].ber = 1e-3;
  rows[2].snr_db = 20.0;
  rows[2].ber = 1e-5;
  CHECK(snr_at_ber(rows, 1e-2) == doctest::Approx(5.0));
  CHECK(snr_at_ber(rows, 1e-4) == doctest::Approx(15.0));
  CHECK(std::isnan(snr_at_ber(rows, 1e-9)));
}
