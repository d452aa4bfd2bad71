#include <doctest.h>

#include <algorithm>

#include <json.hpp>

#include "stairdet/report.hpp"

using namespace stairdet;

namespace {

std::vector<BerCurve> sample_curves() {
  BerCurve a;
  a.label = "mmse";
  a.points.push_back({10.0, 25, 12800, 20, 1600, 0});
  a.points.push_back({12.0, 5, 12800, 5, 1600, 0});
  BerCurve b;
  b.label = "stair_fixed";
  b.points.push_back({10.0, 40, 12800, 33, 1600, 2});
  b.points.push_back({12.0, 9, 12800, 9, 1600, 0});
  return {a, b};
}

}  // namespace

TEST_CASE("CSV schema and determinism") {
  const auto curves = sample_curves();
  const std::string csv = ber_csv(curves, 200);
  CHECK(csv.rfind("detector,snr_db,trials,bit_errors,bits_total,ber,symbol_errors,"
                  "symbols_total,ser,failures\n",
                  0) == 0);
  // one header + one row per (detector, snr)
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 5);
  CHECK(csv.find("mmse,10,200,25,12800,0.001953125,20,1600,0.0125,0\n") != std::string::npos);
  CHECK(csv.find("stair_fixed,10,200,40,12800,0.003125,33,1600,0.020625,2\n") !=
        std::string::npos);
  CHECK(csv.find('\r') == std::string::npos);  // LF endings only
  CHECK(ber_csv(curves, 200) == csv);
}

TEST_CASE("summary mentions every detector") {
  const std::string text = ber_summary(sample_curves());
  CHECK(text.find("mmse") != std::string::npos);
  CHECK(text.find("stair_fixed") != std::string::npos);
}

TEST_CASE("manifest JSON round-trips its fields") {
  RunManifest m;
  m.command = "stairdet ber --trials 200";
  m.config_json = R"({"bs_antennas":128,"users":8})";
  m.master_seed = 31337;
  m.started_at = "2000-01-01T00:00:00Z";
  m.finished_at = "2000-01-01T00:00:01Z";
  m.outputs = {"fig2.csv"};

  const auto j = nlohmann::json::parse(manifest_json(m));
  CHECK(j["tool"] == "stairdet");
  CHECK(j["version"] == kToolVersion);
  CHECK(j["master_seed"] == 31337);
  CHECK(j["config"]["users"] == 8);
  CHECK(j["outputs"][0] == "fig2.csv");
  CHECK(j["command"] == "stairdet ber --trials 200");
}

TEST_CASE("timestamps look like ISO-8601 UTC") {
  const std::string ts = timestamp_utc_now();
  CHECK(ts.size() == 20);
  CHECK(ts.back() == 'Z');
  CHECK(ts[4] == '-');
  CHECK(ts[10] == 'T');
}

TEST_CASE("format_double is locale-independent and stable") {
  CHECK(format_double(0.001953125) == "0.001953125");
  CHECK(format_double(10.0) == "10");
  CHECK(format_double(142342857.1428571) == "142342857.1");
}
