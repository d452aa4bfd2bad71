#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "stairdet/detectors.hpp"

namespace stairdet {

struct SimConfig {
  int bs_antennas = 128;
  int users = 8;
  int mod_order = 256;
  std::vector<DetectorConfig> detectors;
  std::vector<double> snr_db;
  int trials = 2000;
  std::uint64_t master_seed = 1;
  int workers = 0;  // 0 = hardware concurrency

  void validate() const;
};

struct SnrRecord {
  double snr_db = 0.0;
  std::uint64_t bit_errors = 0;
  std::uint64_t bits_total = 0;
  std::uint64_t symbol_errors = 0;
  std::uint64_t symbols_total = 0;
  std::uint64_t failures = 0;  // trials where the detector raised a numeric error

  double ber() const { return static_cast<double>(bit_errors) / static_cast<double>(bits_total); }
  double ser() const {
    return static_cast<double>(symbol_errors) / static_cast<double>(symbols_total);
  }
};

struct BerCurve {
  std::string label;
  std::vector<SnrRecord> points;
};

struct TrialCounts {
  std::uint64_t bit_errors = 0;
  std::uint64_t symbol_errors = 0;
  bool failed = false;
};

/// One Monte-Carlo trial: a fresh generator derived from
/// (master_seed, snr_index, trial_index) draws bits, then H row-major, then
/// the noise vector; Gramian and matched filter are computed in floating
/// point; every configured detector consumes the identical realization. A
/// detector numeric error scores that detector all-wrong for the trial.
std::vector<TrialCounts> run_trial(const SimConfig& cfg, int snr_index,
                                   std::uint64_t trial_index);

/// Full sweep over snr_db x trials, one BerCurve per configured detector.
/// Deterministic for a given master_seed regardless of worker count.
std::vector<BerCurve> run_sweep(const SimConfig& cfg);

}  // namespace stairdet
