#include "stairdet/hwmodel.hpp"

#include <cinttypes>
#include <cstdio>
#include <sstream>

#include "stairdet/airlink.hpp"
#include "stairdet/rng.hpp"

namespace stairdet::hw {

std::uint64_t formula_mults(Algorithm algorithm, int users, int iterations) {
  if (users < 1) throw ArgumentError("formula_mults: users must be >= 1");
  if (iterations < 1) throw ArgumentError("formula_mults: iterations must be >= 1");
  const std::uint64_t U = static_cast<std::uint64_t>(users);
  const std::uint64_t K = static_cast<std::uint64_t>(iterations);
  switch (algorithm) {
    case Algorithm::ConjugateGradient:
      return (K + 1) * (4 * U * U + 20 * U);
    case Algorithm::Nsa:
      return (K - 1) * (2 * U * U * U + 2 * U * U - 2 * U);
    case Algorithm::GaussSeidel:
      return 6 * K * U * U;
    case Algorithm::Stair:
      return K * (4 * U * U - 2 * U);
    default:
      throw ArgumentError("formula_mults: no closed-form count for algorithm '" +
                          std::string(algorithm_name(algorithm)) + "'");
  }
}

ComplexityReport instrument(Algorithm algorithm, int users, int iterations, std::uint64_t seed,
                            int bs_antennas) {
  const std::uint64_t formula = formula_mults(algorithm, users, iterations);

  const int bs = (bs_antennas > 0) ? bs_antennas : 16 * users;
  if (bs < users) throw ArgumentError("instrument: bs_antennas must be >= users");

  // Any well-posed seeded instance will do: counts are structural.
  Xoshiro256pp rng(derive_stream_seed(seed, 0, 0));
  const ComplexMatrix H = draw_channel(bs, users, rng);
  ComplexVector y(bs);
  for (auto& v : y) v = rng.cn01();
  const double sigma2 = static_cast<double>(users) / 10.0;  // 10 dB ridge
  const ComplexMatrix G = gramian(H, sigma2);
  const ComplexVector xmf = matched_filter(H, y);

  DetectorConfig cfg;
  cfg.algorithm = algorithm;
  cfg.iterations = iterations;
  OpTally tally;
  run_detector(cfg, G, xmf, bs, &tally);

  ComplexityReport rep;
  rep.algorithm = algorithm;
  rep.users = users;
  rep.iterations = iterations;
  rep.formula_mults = formula;
  rep.instrumented_mults = tally.inversion_mults + tally.iteration_mults;
  rep.divisions = tally.divisions;
  return rep;
}

double throughput_bps(const TimingModel& tm, int iterations) {
  if (iterations < 1) throw ArgumentError("throughput_bps: iterations must be >= 1");
  if (!(tm.clock_hz > 0.0)) throw ArgumentError("throughput_bps: clock must be positive");
  const double bits = static_cast<double>(tm.users) * tm.bits_per_symbol;
  return bits * tm.clock_hz / static_cast<double>(tm.total_cycles(iterations));
}

std::string complexity_table(const std::vector<ComplexityRow>& rows) {
  std::ostringstream os;
  char line[160];
  std::snprintf(line, sizeof line, "%-11s %5s %5s %14s %18s %10s %16s\n", "algorithm", "U", "K",
                "formula_mults", "instrumented_mults", "divisions", "throughput_mbps");
  os << line;
  for (const auto& row : rows) {
    const auto& r = row.report;
    std::string tput = "-";
    if (row.throughput_bps) {
      char buf[32];
      std::snprintf(buf, sizeof buf, "%.2f", *row.throughput_bps / 1e6);
      tput = buf;
    }
    std::snprintf(line, sizeof line, "%-11s %5d %5d %14" PRIu64 " %18" PRIu64 " %10" PRIu64
                  " %16s\n",
                  algorithm_name(r.algorithm), r.users, r.iterations, r.formula_mults,
                  r.instrumented_mults, r.divisions, tput.c_str());
    os << line;
  }
  return os.str();
}

std::string complexity_csv(const std::vector<ComplexityRow>& rows) {
  std::ostringstream os;
  os << "algorithm,users,iterations,formula_mults,instrumented_mults,divisions,throughput_bps\n";
  for (const auto& row : rows) {
    const auto& r = row.report;
    os << algorithm_name(r.algorithm) << ',' << r.users << ',' << r.iterations << ','
       << r.formula_mults << ',' << r.instrumented_mults << ',' << r.divisions << ',';
    if (row.throughput_bps) {
      char buf[32];
      std::snprintf(buf, sizeof buf, "%.10g", *row.throughput_bps);
      os << buf;
    }
    os << '\n';
  }
  return os.str();
}

std::string throughput_report(const TimingModel& tm, int iterations) {
  const double bps = throughput_bps(tm, iterations);
  std::ostringstream os;
  char line[160];
  std::snprintf(line, sizeof line, "clock           %.6g MHz\n", tm.clock_hz / 1e6);
  os << line;
  std::snprintf(line, sizeof line, "users           %d\n", tm.users);
  os << line;
  std::snprintf(line, sizeof line, "bits/symbol     %d\n", tm.bits_per_symbol);
  os << line;
  std::snprintf(line, sizeof line, "iterations      %d\n", iterations);
  os << line;
  std::snprintf(line, sizeof line, "cycles          %" PRId64 " (load %d + overhead %d + %d/iter)\n",
                tm.total_cycles(iterations), tm.load_cycles, tm.overhead_cycles,
                tm.per_iteration_cycles);
  os << line;
  if (iterations != 2)
    os << "note            cycle counts for t != 2 extrapolate the fitted model\n";
  std::snprintf(line, sizeof line, "throughput      %.2f Mbps\n", bps / 1e6);
  os << line;
  return os.str();
}

}  // namespace stairdet::hw
