#pragma once

#include <string>
#include <vector>

#include "stairdet/harness.hpp"

namespace stairdet {

inline constexpr const char* kToolVersion = "0.1.0";

/// Stable CSV rendering: header
/// detector,snr_db,trials,bit_errors,bits_total,ber,symbol_errors,
/// symbols_total,ser,failures — UTF-8, LF endings, '.' decimal separator,
/// byte-identical for identical curves.
std::string ber_csv(const std::vector<BerCurve>& curves, int trials);

/// Human-readable per-detector BER table.
std::string ber_summary(const std::vector<BerCurve>& curves);

/// Reproducibility sidecar written next to every CSV: resolved
/// configuration, tool version, seed, timestamps and output paths as JSON.
struct RunManifest {
  std::string command;
  std::string config_json;  // resolved configuration, already serialized
  std::uint64_t master_seed = 0;
  std::string started_at;
  std::string finished_at;
  std::vector<std::string> outputs;
};

std::string manifest_json(const RunManifest& m);

/// ISO-8601 UTC timestamp for manifests.
std::string timestamp_utc_now();

/// Locale-independent shortest-roundtrip-ish double formatting (%.10g).
std::string format_double(double v);

}  // namespace stairdet
