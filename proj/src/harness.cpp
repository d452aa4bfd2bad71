#include "stairdet/harness.hpp"

#include <algorithm>
#include <cmath>
#include <thread>

#include "stairdet/airlink.hpp"
#include "stairdet/rng.hpp"

namespace stairdet {

namespace {

int ceil_log2(int n) {
  int p = 0;
  while ((1 << p) < n) ++p;
  return p;
}

/// Config with fixed-point auto-prescale resolved against the system size.
SimConfig resolve(const SimConfig& cfg) {
  SimConfig out = cfg;
  for (auto& det : out.detectors) {
    if (det.numeric_mode == NumericMode::Fixed && det.fxp_profile.prescale_bits < 0)
      det.fxp_profile.prescale_bits = ceil_log2(cfg.bs_antennas);
  }
  return out;
}

struct TrialScratch {
  Constellation constellation;
  bool any_zf = false;
};

std::vector<TrialCounts> run_trial_impl(const SimConfig& cfg, const TrialScratch& scratch,
                                        int snr_index, std::uint64_t trial_index) {
  const Constellation& c = scratch.constellation;
  const int users = cfg.users;
  const int bps = c.bits_per_symbol();

  Xoshiro256pp rng(
      derive_stream_seed(cfg.master_seed, static_cast<std::uint64_t>(snr_index), trial_index));

  std::vector<std::uint8_t> bits(static_cast<std::size_t>(users) * bps);
  for (auto& b : bits) b = static_cast<std::uint8_t>(rng.bit());
  const ComplexVector x = modulate(bits, c, users);
  const ComplexMatrix H = draw_channel(cfg.bs_antennas, users, rng);
  const double sigma2 = noise_variance_for_snr(cfg.snr_db[snr_index], users, c);
  const ComplexVector y = transmit(x, H, sigma2, rng);

  const ComplexMatrix G = gramian(H, sigma2);
  const ComplexVector xmf = matched_filter(H, y);
  ComplexMatrix G_zf;
  if (scratch.any_zf) G_zf = gramian(H, 0.0);

  std::vector<TrialCounts> out(cfg.detectors.size());
  for (std::size_t d = 0; d < cfg.detectors.size(); ++d) {
    const DetectorConfig& det = cfg.detectors[d];
    TrialCounts& tc = out[d];
    try {
      const ComplexMatrix& Gd = (det.algorithm == Algorithm::ZfExact) ? G_zf : G;
      const ComplexVector xhat = run_detector(det, Gd, xmf, cfg.bs_antennas);
      for (const Complex& v : xhat)
        if (!std::isfinite(v.real()) || !std::isfinite(v.imag()))
          throw NumericError("detector produced a non-finite estimate");
      const std::vector<std::uint8_t> bits_hat = demodulate_hard(xhat, c);
      for (int u = 0; u < users; ++u) {
        std::uint64_t symbol_bit_errors = 0;
        for (int k = 0; k < bps; ++k) {
          const std::size_t idx = static_cast<std::size_t>(u) * bps + k;
          if (bits[idx] != bits_hat[idx]) ++symbol_bit_errors;
        }
        tc.bit_errors += symbol_bit_errors;
        if (symbol_bit_errors > 0) ++tc.symbol_errors;
      }
    } catch (const NumericError&) {
      // Conservative failure policy: score the trial all-wrong and move on.
      tc.bit_errors = static_cast<std::uint64_t>(users) * bps;
      tc.symbol_errors = users;
      tc.failed = true;
    }
  }
  return out;
}

TrialScratch make_scratch(const SimConfig& cfg) {
  TrialScratch scratch{Constellation::qam(cfg.mod_order), false};
  for (const auto& det : cfg.detectors)
    if (det.algorithm == Algorithm::ZfExact) scratch.any_zf = true;
  return scratch;
}

}  // namespace

void SimConfig::validate() const {
  if (users < 1 || bs_antennas < users)
    throw ArgumentError("sim config: need bs_antennas >= users >= 1");
  if (trials < 1) throw ArgumentError("sim config: trials must be >= 1");
  if (snr_db.empty()) throw ArgumentError("sim config: snr list must be nonempty");
  if (detectors.empty()) throw ArgumentError("sim config: need at least one detector");
  if (workers < 0) throw ArgumentError("sim config: workers must be >= 0");
  Constellation::qam(mod_order);
  for (const auto& det : detectors) det.validate();
}

std::vector<TrialCounts> run_trial(const SimConfig& cfg, int snr_index,
                                   std::uint64_t trial_index) {
  cfg.validate();
  if (snr_index < 0 || snr_index >= static_cast<int>(cfg.snr_db.size()))
    throw ArgumentError("run_trial: snr_index out of range");
  const SimConfig rcfg = resolve(cfg);
  return run_trial_impl(rcfg, make_scratch(rcfg), snr_index, trial_index);
}

std::vector<BerCurve> run_sweep(const SimConfig& cfg) {
  cfg.validate();
  const SimConfig rcfg = resolve(cfg);
  const TrialScratch scratch = make_scratch(rcfg);
  const int n_det = static_cast<int>(rcfg.detectors.size());
  const int n_snr = static_cast<int>(rcfg.snr_db.size());
  const int bps = scratch.constellation.bits_per_symbol();

  int workers = rcfg.workers;
  if (workers == 0) workers = static_cast<int>(std::thread::hardware_concurrency());
  workers = std::clamp(workers, 1, rcfg.trials);

  std::vector<BerCurve> curves(n_det);
  for (int d = 0; d < n_det; ++d) curves[d].label = rcfg.detectors[d].label();

  for (int s = 0; s < n_snr; ++s) {
    // Per-worker accumulators; error-count addition is associative and
    // commutative, so the partition has no effect on totals.
    std::vector<std::vector<TrialCounts>> partial(
        workers, std::vector<TrialCounts>(n_det));
    std::vector<std::uint64_t> fail_trials(static_cast<std::size_t>(workers) * n_det, 0);

    auto work = [&](int w) {
      const std::uint64_t lo = static_cast<std::uint64_t>(rcfg.trials) * w / workers;
      const std::uint64_t hi = static_cast<std::uint64_t>(rcfg.trials) * (w + 1) / workers;
      for (std::uint64_t trial = lo; trial < hi; ++trial) {
        const auto counts = run_trial_impl(rcfg, scratch, s, trial);
        for (int d = 0; d < n_det; ++d) {
          partial[w][d].bit_errors += counts[d].bit_errors;
          partial[w][d].symbol_errors += counts[d].symbol_errors;
          if (counts[d].failed) ++fail_trials[static_cast<std::size_t>(w) * n_det + d];
        }
      }
    };

    if (workers == 1) {
      work(0);
    } else {
      std::vector<std::thread> threads;
      threads.reserve(workers);
      for (int w = 0; w < workers; ++w) threads.emplace_back(work, w);
      for (auto& th : threads) th.join();
    }

    for (int d = 0; d < n_det; ++d) {
      SnrRecord rec;
      rec.snr_db = rcfg.snr_db[s];
      rec.bits_total = static_cast<std::uint64_t>(rcfg.trials) * rcfg.users * bps;
      rec.symbols_total = static_cast<std::uint64_t>(rcfg.trials) * rcfg.users;
      for (int w = 0; w < workers; ++w) {
        rec.bit_errors += partial[w][d].bit_errors;
        rec.symbol_errors += partial[w][d].symbol_errors;
        rec.failures += fail_trials[static_cast<std::size_t>(w) * n_det + d];
      }
      curves[d].points.push_back(rec);
    }
  }
  return curves;
}

}  // namespace stairdet
