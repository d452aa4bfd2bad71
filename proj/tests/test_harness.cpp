#include <doctest.h>

#include <cmath>

#include "stairdet/airlink.hpp"
#include "stairdet/harness.hpp"
#include "stairdet/rng.hpp"

using namespace stairdet;

namespace {

SimConfig base_config() {
  SimConfig cfg;
  cfg.bs_antennas = 32;
  cfg.users = 4;
  cfg.mod_order = 16;
  cfg.snr_db = {6.0, 10.0};
  cfg.trials = 50;
  cfg.master_seed = 42;
  cfg.workers = 1;
  DetectorConfig mmse;
  mmse.algorithm = Algorithm::MmseExact;
  cfg.detectors.push_back(mmse);
  DetectorConfig stair;
  stair.algorithm = Algorithm::Stair;
  stair.iterations = 2;
  cfg.detectors.push_back(stair);
  return cfg;
}

/// Standalone single-antenna, single-user pipeline: the same draws as the
/// harness contract (bits, then channel, then noise), detected with scalar
/// MMSE arithmetic. Independent of the harness implementation.
std::uint64_t scalar_pipeline_bit_errors(std::uint64_t master_seed, int snr_index, double snr_db,
                                         std::uint64_t trial) {
  Xoshiro256pp rng(derive_stream_seed(master_seed, snr_index, trial));
  const Constellation c = Constellation::qam(4);
  const int b0 = rng.bit(), b1 = rng.bit();
  const Complex x = c.point(static_cast<unsigned>((b0 << 1) | b1));
  const Complex h = rng.cn01();
  // Same sigma² value as the harness (the computed Es can sit an ulp off 1).
  const double sigma2 = noise_variance_for_snr(snr_db, 1, c);
  const Complex y = h * x + std::sqrt(sigma2) * rng.cn01();
  const double g = std::norm(h) + sigma2;
  const Complex xhat = std::conj(h) * y / g;
  const unsigned decided = c.slice(xhat);
  return static_cast<std::uint64_t>(((decided >> 1) & 1u) != static_cast<unsigned>(b0)) +
         static_cast<std::uint64_t>((decided & 1u) != static_cast<unsigned>(b1));
}

}  // namespace

TEST_CASE("noiseless exact detection makes no errors") {
  SimConfig cfg = base_config();
  cfg.snr_db = {200.0};
  cfg.detectors.resize(1);  // mmse only
  cfg.trials = 10;
  const auto curves = run_sweep(cfg);
  CHECK(curves[0].points[0].bit_errors == 0);
  CHECK(curves[0].points[0].symbol_errors == 0);
}

TEST_CASE("trials are reproducible for identical indices") {
  const SimConfig cfg = base_config();
  const auto a = run_trial(cfg, 1, 7);
  const auto b = run_trial(cfg, 1, 7);
  REQUIRE(a.size() == b.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    CHECK(a[i].bit_errors == b[i].bit_errors);
    CHECK(a[i].symbol_errors == b[i].symbol_errors);
  }
}

TEST_CASE("single-symbol pipeline matches the standalone scalar oracle") {
  SimConfig cfg;
  cfg.bs_antennas = 1;
  cfg.users = 1;
  cfg.mod_order = 4;
  cfg.snr_db = {3.0, 9.0};
  cfg.trials = 300;
  cfg.master_seed = 2718;
  cfg.workers = 1;
  DetectorConfig mmse;
  mmse.algorithm = Algorithm::MmseExact;
  cfg.detectors.push_back(mmse);

  for (int s = 0; s < 2; ++s) {
    std::uint64_t oracle_errors = 0;
    for (std::uint64_t t = 0; t < 300; ++t)
      oracle_errors += scalar_pipeline_bit_errors(cfg.master_seed, s, cfg.snr_db[s], t);
    std::uint64_t harness_errors = 0;
    for (std::uint64_t t = 0; t < 300; ++t) harness_errors += run_trial(cfg, s, t)[0].bit_errors;
    CHECK(harness_errors == oracle_errors);
    CHECK(oracle_errors > 0);  // 3 and 9 dB QPSK on a fading scalar: errors happen
  }
}

TEST_CASE("sweep with one trial equals that trial's counts") {
  SimConfig cfg = base_config();
  cfg.trials = 1;
  const auto curves = run_sweep(cfg);
  for (int s = 0; s < 2; ++s) {
    const auto counts = run_trial(cfg, s, 0);
    for (std::size_t d = 0; d < cfg.detectors.size(); ++d) {
      CHECK(curves[d].points[s].bit_errors == counts[d].bit_errors);
      CHECK(curves[d].points[s].symbol_errors == counts[d].symbol_errors);
    }
  }
}

TEST_CASE("per-trial outcomes form a prefix: growing the campaign never rewrites them") {
  SimConfig cfg = base_config();
  cfg.snr_db = {8.0};
  cfg.trials = 40;
  const auto small = run_sweep(cfg);
  cfg.trials = 80;
  const auto big = run_sweep(cfg);

  std::uint64_t tail = 0;
  for (std::uint64_t t = 40; t < 80; ++t) tail += run_trial(cfg, 0, t)[0].bit_errors;
  CHECK(big[0].points[0].bit_errors == small[0].points[0].bit_errors + tail);
}

TEST_CASE("results are identical for 1, 4 and 8 workers") {
  SimConfig cfg = base_config();
  cfg.trials = 64;
  cfg.workers = 1;
  const auto w1 = run_sweep(cfg);
  cfg.workers = 4;
  const auto w4 = run_sweep(cfg);
  cfg.workers = 8;
  const auto w8 = run_sweep(cfg);
  for (std::size_t d = 0; d < w1.size(); ++d)
    for (std::size_t s = 0; s < w1[d].points.size(); ++s) {
      CHECK(w1[d].points[s].bit_errors == w4[d].points[s].bit_errors);
      CHECK(w1[d].points[s].bit_errors == w8[d].points[s].bit_errors);
      CHECK(w1[d].points[s].symbol_errors == w8[d].points[s].symbol_errors);
    }
}

TEST_CASE("detectors in one trial consume the identical realization") {
  SimConfig solo = base_config();
  solo.detectors.resize(1);  // mmse alone
  const SimConfig paired = base_config();
  for (std::uint64_t t = 0; t < 20; ++t) {
    const auto a = run_trial(solo, 0, t);
    const auto b = run_trial(paired, 0, t);
    CHECK(a[0].bit_errors == b[0].bit_errors);
    CHECK(a[0].symbol_errors == b[0].symbol_errors);
  }
}

TEST_CASE("MMSE BER is monotone in SNR up to estimator noise") {
  SimConfig cfg;
  cfg.bs_antennas = 16;
  cfg.users = 4;
  cfg.mod_order = 16;
  cfg.snr_db = {0.0, 4.0, 8.0, 12.0};
  cfg.trials = 2000;
  cfg.master_seed = 7;
  cfg.workers = 0;
  DetectorConfig mmse;
  mmse.algorithm = Algorithm::MmseExact;
  cfg.detectors.push_back(mmse);

  const auto curves = run_sweep(cfg);
  const auto& pts = curves[0].points;
  for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
    const double p = pts[i].ber();
    const double sigma =
        std::sqrt(std::max(p * (1.0 - p), 1e-12) / static_cast<double>(pts[i].bits_total));
    CHECK(pts[i + 1].ber() <= p + 3.0 * sigma);
  }
}

TEST_CASE("a diverging detector is recorded as failures, not a crash") {
  SimConfig cfg = base_config();
  DetectorConfig wild;
  wild.algorithm = Algorithm::Richardson;
  wild.iterations = 400;
  wild.richardson_omega = 1e9;  // guaranteed blow-up to non-finite values
  cfg.detectors.push_back(wild);
  cfg.trials = 5;
  cfg.snr_db = {10.0};

  const auto curves = run_sweep(cfg);
  const auto& wild_curve = curves.back();
  CHECK(wild_curve.points[0].failures == 5);
  CHECK(wild_curve.points[0].bit_errors == wild_curve.points[0].bits_total);
  // The paired detectors are unaffected.
  CHECK(curves[0].points[0].failures == 0);
}

TEST_CASE("totals bookkeeping") {
  SimConfig cfg = base_config();
  const auto curves = run_sweep(cfg);
  for (const auto& curve : curves)
    for (const auto& p : curve.points) {
      CHECK(p.bits_total == static_cast<std::uint64_t>(cfg.trials) * cfg.users * 4);
      CHECK(p.symbols_total == static_cast<std::uint64_t>(cfg.trials) * cfg.users);
      CHECK(p.ber() >= 0.0);
      CHECK(p.ber() <= 1.0);
    }
}

TEST_CASE("near-MMSE proximity measured by curve interpolation at BER 1e-2") {
  SimConfig cfg;
  cfg.bs_antennas = 128;
  cfg.users = 8;
  cfg.mod_order = 256;
  cfg.snr_db = {8, 10, 12, 14, 16, 18, 20};
  cfg.trials = 1000;
  cfg.master_seed = 1;
  cfg.workers = 0;
  for (Algorithm alg : {Algorithm::MmseExact, Algorithm::Stair, Algorithm::GaussSeidel}) {
    DetectorConfig d;
    d.algorithm = alg;
    d.iterations = 2;
    cfg.detectors.push_back(d);
  }
  const auto curves = run_sweep(cfg);

  auto crossing = [](const std::vector<SnrRecord>& pts) {
    for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
      const double b0 = pts[i].ber(), b1 = pts[i + 1].ber();
      if (b0 >= 1e-2 && b1 < 1e-2) {
        const double f = (std::log10(b0) + 2.0) / (std::log10(b0) - std::log10(b1));
        return pts[i].snr_db + f * (pts[i + 1].snr_db - pts[i].snr_db);
      }
    }
    return -1.0;
  };
  const double at_mmse = crossing(curves[0].points);
  const double at_stair = crossing(curves[1].points);
  const double at_gs = crossing(curves[2].points);
  REQUIRE(at_mmse > 0.0);
  REQUIRE(at_stair > 0.0);
  REQUIRE(at_gs > 0.0);
  // GS tracks the exact detector within 0.2 dB here. Two stair updates land
  // measurably behind GS (about 0.7 dB from MMSE with these seeds) while
  // still well clear of the far-field detectors; bound the frozen-seed gap
  // at 1 dB and keep the ordering strict.
  CHECK(at_gs - at_mmse <= 0.2);
  CHECK(at_stair - at_mmse <= 1.0);
  CHECK(at_mmse <= at_gs);
  CHECK(at_gs <= at_stair);
}

TEST_CASE("run_trial rejects out-of-range SNR indices") {
  const SimConfig cfg = base_config();
  CHECK_THROWS_AS(run_trial(cfg, 2, 0), ArgumentError);
  CHECK_THROWS_AS(run_trial(cfg, -1, 0), ArgumentError);
}

TEST_CASE("config validation rejects malformed setups") {
  SimConfig cfg = base_config();
  cfg.users = 50;  // > bs_antennas
  CHECK_THROWS_AS(cfg.validate(), ArgumentError);

  cfg = base_config();
  cfg.snr_db.clear();
  CHECK_THROWS_AS(cfg.validate(), ArgumentError);

  cfg = base_config();
  cfg.detectors.clear();
  CHECK_THROWS_AS(cfg.validate(), ArgumentError);

  cfg = base_config();
  cfg.mod_order = 32;
  CHECK_THROWS_AS(cfg.validate(), ArgumentError);

  cfg = base_config();
  cfg.trials = 0;
  CHECK_THROWS_AS(cfg.validate(), ArgumentError);
}
