#include "stairdet/report.hpp"

#include <chrono>
#include <cstdio>
#include <ctime>
#include <sstream>

#include <json.hpp>

namespace stairdet {

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  // printf honors LC_NUMERIC; the CSV contract is '.' regardless.
  for (char& c : buf) {
    if (c == '\0') break;
    if (c == ',') c = '.';
  }
  return buf;
}

std::string ber_csv(const std::vector<BerCurve>& curves, int trials) {
  std::ostringstream os;
  os << "detector,snr_db,trials,bit_errors,bits_total,ber,symbol_errors,symbols_total,ser,"
        "failures\n";
  for (const auto& curve : curves) {
    for (const auto& p : curve.points) {
      os << curve.label << ',' << format_double(p.snr_db) << ',' << trials << ',' << p.bit_errors
         << ',' << p.bits_total << ',' << format_double(p.ber()) << ',' << p.symbol_errors << ','
         << p.symbols_total << ',' << format_double(p.ser()) << ',' << p.failures << '\n';
    }
  }
  return os.str();
}

std::string ber_summary(const std::vector<BerCurve>& curves) {
  std::ostringstream os;
  char line[200];
  std::snprintf(line, sizeof line, "%-12s %8s %12s %12s %9s\n", "detector", "snr_db", "ber",
                "ser", "failures");
  os << line;
  for (const auto& curve : curves) {
    for (const auto& p : curve.points) {
      std::snprintf(line, sizeof line, "%-12s %8.6g %12.4e %12.4e %9llu\n", curve.label.c_str(),
                    p.snr_db, p.ber(), p.ser(), static_cast<unsigned long long>(p.failures));
      os << line;
    }
  }
  return os.str();
}

std::string manifest_json(const RunManifest& m) {
  nlohmann::json j;
  j["tool"] = "stairdet";
  j["version"] = kToolVersion;
  j["command"] = m.command;
  j["master_seed"] = m.master_seed;
  j["config"] = nlohmann::json::parse(m.config_json.empty() ? "{}" : m.config_json);
  j["started_at"] = m.started_at;
  j["finished_at"] = m.finished_at;
  j["outputs"] = m.outputs;
  return j.dump(2) + "\n";
}

std::string timestamp_utc_now() {
  const auto now = std::chrono::system_clock::now();
  const std::time_t t = std::chrono::system_clock::to_time_t(now);
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[40];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

}  // namespace stairdet
