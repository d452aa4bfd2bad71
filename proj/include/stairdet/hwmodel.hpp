#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "stairdet/detectors.hpp"

namespace stairdet::hw {

/// Closed-form real-multiplication counts per detection, by algorithm:
/// cg: (K+1)(4U² + 20U), nsa: (K-1)(2U³ + 2U² - 2U), gs: 6KU²,
/// stair: K(4U² - 2U). Exact integer arithmetic. Other algorithms have no
/// closed-form row and raise an argument error.
std::uint64_t formula_mults(Algorithm algorithm, int users, int iterations);

struct ComplexityReport {
  Algorithm algorithm = Algorithm::Stair;
  int users = 0;
  int iterations = 0;
  std::uint64_t formula_mults = 0;
  std::uint64_t instrumented_mults = 0;
  std::uint64_t divisions = 0;
};

/// Runs the detector on a seeded random instance with counting arithmetic
/// and reports executed real multiplications and divisions next to the
/// closed-form value. instrumented_mults covers inverse construction plus
/// iteration work; the initial-estimate multiplies are excluded (that work
/// overlaps the memory-load phase in the time-shared architecture) and are
/// available from the detector tally. Counts depend only on (U, K), never on
/// matrix values. bs_antennas <= 0 selects 16 * users.
ComplexityReport instrument(Algorithm algorithm, int users, int iterations, std::uint64_t seed,
                            int bs_antennas = 0);

/// Cycle model of the time-shared detector: a load phase (the S-G memory,
/// during which the Newton divider runs), fixed pipeline overhead, and a
/// constant number of cycles per iteration. Defaults reproduce the 8-user
/// 256-QAM architecture: 64 + 2 + 25t cycles, so t = 2 takes 116 cycles.
struct TimingModel {
  double clock_hz = 258e6;
  int load_cycles = 64;
  int per_iteration_cycles = 25;
  int overhead_cycles = 2;
  int users = 8;
  int bits_per_symbol = 8;

  std::int64_t total_cycles(int iterations) const {
    return load_cycles + overhead_cycles +
           static_cast<std::int64_t>(per_iteration_cycles) * iterations;
  }
};

/// users * bits_per_symbol * clock / total_cycles(t).
double throughput_bps(const TimingModel& tm, int iterations);

struct ComplexityRow {
  ComplexityReport report;
  std::optional<double> throughput_bps;  // filled for the modeled architecture only
};

std::string complexity_table(const std::vector<ComplexityRow>& rows);

/// CSV with header algorithm,users,iterations,formula_mults,
/// instrumented_mults,divisions,throughput_bps (throughput blank when absent).
std::string complexity_csv(const std::vector<ComplexityRow>& rows);

std::string throughput_report(const TimingModel& tm, int iterations);

}  // namespace stairdet::hw
