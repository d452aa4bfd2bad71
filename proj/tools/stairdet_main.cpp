// stairdet: stair-matrix massive-MIMO detection simulator.
// Subcommands: ber (Monte-Carlo error-rate sweep), complexity (multiplication
// counts), throughput (cycle-model data rate).

#include <cmath>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "stairdet/airlink.hpp"
#include "stairdet/harness.hpp"
#include "stairdet/hwmodel.hpp"
#include "stairdet/report.hpp"

namespace {

using namespace stairdet;

std::vector<double> parse_snr_range(const std::string& text) {
  std::vector<double> parts;
  std::istringstream is(text);
  std::string item;
  while (std::getline(is, item, ':')) parts.push_back(std::stod(item));
  if (parts.size() == 1) return {parts[0]};
  if (parts.size() != 3) throw ArgumentError("--snr expects start:step:stop or a single value");
  const double start = parts[0], step = parts[1], stop = parts[2];
  if (!(step > 0.0)) throw ArgumentError("--snr step must be positive");
  std::vector<double> snrs;
  for (double v = start; v <= stop + 1e-9; v += step) snrs.push_back(v);
  if (snrs.empty()) throw ArgumentError("--snr range is empty");
  return snrs;
}

std::vector<std::string> split_commas(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream is(text);
  std::string item;
  while (std::getline(is, item, ',')) {
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

nlohmann::json detector_json(const DetectorConfig& d) {
  nlohmann::json j;
  j["algorithm"] = algorithm_name(d.algorithm);
  j["iterations"] = d.iterations;
  j["numeric_mode"] = (d.numeric_mode == NumericMode::Fixed) ? "fixed" : "float64";
  if (d.algorithm == Algorithm::Richardson)
    j["richardson_omega"] = (d.richardson_omega > 0.0) ? d.richardson_omega : 0.0;
  if (d.numeric_mode == NumericMode::Fixed)
    j["fxp_profile"] = fxp::format_profile(d.fxp_profile);
  return j;
}

nlohmann::json sim_config_json(const SimConfig& cfg) {
  nlohmann::json j;
  j["bs_antennas"] = cfg.bs_antennas;
  j["users"] = cfg.users;
  j["mod_order"] = cfg.mod_order;
  j["snr_db"] = cfg.snr_db;
  j["trials"] = cfg.trials;
  j["master_seed"] = cfg.master_seed;
  j["workers"] = cfg.workers;
  j["detectors"] = nlohmann::json::array();
  for (const auto& d : cfg.detectors) j["detectors"].push_back(detector_json(d));
  return j;
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw ArgumentError("cannot open output file '" + path + "'");
  os << content;
}

std::string rebuild_command(int argc, char** argv) {
  std::string cmd;
  for (int i = 0; i < argc; ++i) {
    if (i) cmd += ' ';
    cmd += argv[i];
  }
  return cmd;
}

int cmd_ber(const SimConfig& cfg, const std::string& out_path, const std::string& command) {
  RunManifest manifest;
  manifest.command = command;
  manifest.master_seed = cfg.master_seed;
  manifest.config_json = sim_config_json(cfg).dump();
  manifest.started_at = timestamp_utc_now();

  const std::vector<BerCurve> curves = run_sweep(cfg);

  manifest.finished_at = timestamp_utc_now();
  manifest.outputs = {out_path};
  write_file(out_path, ber_csv(curves, cfg.trials));
  write_file(out_path + ".manifest.json", manifest_json(manifest));

  std::cout << ber_summary(curves);
  std::uint64_t failures = 0;
  for (const auto& c : curves)
    for (const auto& p : c.points) failures += p.failures;
  if (failures > 0)
    std::cout << "warning: " << failures << " detector trial failures recorded in the CSV\n";
  std::cout << "wrote " << out_path << " and " << out_path << ".manifest.json\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"stair-matrix massive-MIMO detection simulator"};
  app.set_version_flag("--version", std::string("stairdet ") + kToolVersion);
  app.require_subcommand(1);

  // --- ber ---------------------------------------------------------------
  auto* ber = app.add_subcommand("ber", "Monte-Carlo BER/SER sweep, CSV output");
  int bs = 128, users = 8, mod = 256, iters = 2, trials = 2000, workers = 0;
  std::uint64_t seed = 1;
  std::string detectors_flag = "stair,gs,mmse";
  std::string snr_flag = "8:2:20";
  std::string out_path = "ber.csv";
  std::string fxp_flag;
  bool fixed_point = false;
  double richardson_omega = 0.0;
  ber->add_option("--bs", bs, "BS antennas")->check(CLI::PositiveNumber);
  ber->add_option("--users", users, "single-antenna users")->check(CLI::PositiveNumber);
  ber->add_option("--mod", mod, "QAM order (4/16/64/256)");
  ber->add_option("--detectors", detectors_flag,
                  "comma list: mmse,zf,stair,gs,nsa,cg,richardson");
  ber->add_option("--iters", iters, "iterations t/K for iterative detectors")
      ->check(CLI::PositiveNumber);
  ber->add_option("--snr", snr_flag, "SNR sweep start:step:stop [dB], inclusive");
  ber->add_option("--trials", trials, "Monte-Carlo trials per SNR")->check(CLI::PositiveNumber);
  ber->add_option("--seed", seed, "64-bit master seed")->envname("STAIRDET_SEED");
  ber->add_option("--workers", workers, "worker threads (0 = all cores)");
  ber->add_option("--out", out_path, "output CSV path");
  ber->add_flag("--fixed-point", fixed_point,
                "add a fixed-point stair curve next to the floating-point one");
  ber->add_option("--fxp", fxp_flag,
                  "fixed-point profile overrides, e.g. gram=12.8,prescale=7");
  ber->add_option("--richardson-omega", richardson_omega,
                  "Richardson relaxation (default 1/(B+U))");

  // --- complexity ----------------------------------------------------------
  auto* cpx = app.add_subcommand("complexity", "closed-form and instrumented mult counts");
  std::string cpx_users_flag = "8", cpx_iters_flag = "2", algs_flag = "stair,gs,cg,nsa";
  bool instrument_flag = false;
  std::uint64_t cpx_seed = 1;
  std::string cpx_out;
  cpx->add_option("--users", cpx_users_flag, "comma list of user counts");
  cpx->add_option("--iters", cpx_iters_flag, "comma list of iteration counts");
  cpx->add_option("--algs", algs_flag, "comma list: stair,gs,cg,nsa");
  cpx->add_flag("--instrument", instrument_flag, "run counting detectors on a seeded instance");
  cpx->add_option("--seed", cpx_seed, "seed for the instrumented instance");
  cpx->add_option("--out", cpx_out, "write CSV here instead of a table");

  // --- throughput ----------------------------------------------------------
  auto* tput = app.add_subcommand("throughput", "cycle-model throughput report");
  double clock_mhz = 258.0;
  int t_users = 8, t_mod = 256, t_iters = 2;
  hw::TimingModel tm;
  tput->add_option("--clock-mhz", clock_mhz, "clock frequency [MHz]")
      ->check(CLI::PositiveNumber);
  tput->add_option("--users", t_users, "users")->check(CLI::PositiveNumber);
  tput->add_option("--mod", t_mod, "QAM order (sets bits/symbol)");
  tput->add_option("--iters", t_iters, "detector iterations")->check(CLI::PositiveNumber);
  tput->add_option("--load-cycles", tm.load_cycles, "memory-load cycles");
  tput->add_option("--iter-cycles", tm.per_iteration_cycles, "cycles per iteration");
  tput->add_option("--overhead-cycles", tm.overhead_cycles, "fixed pipeline overhead");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*ber) {
      SimConfig cfg;
      cfg.bs_antennas = bs;
      cfg.users = users;
      cfg.mod_order = mod;
      cfg.snr_db = parse_snr_range(snr_flag);
      cfg.trials = trials;
      cfg.master_seed = seed;
      cfg.workers = workers;

      fxp::FxpProfile profile = fxp::parse_profile(fxp_flag);
      bool has_stair = false;
      for (const auto& name : split_commas(detectors_flag)) {
        DetectorConfig d;
        d.algorithm = algorithm_from_name(name);
        d.iterations = iters;
        d.richardson_omega = richardson_omega;
        cfg.detectors.push_back(d);
        if (d.algorithm == Algorithm::Stair) has_stair = true;
      }
      if (fixed_point) {
        if (!has_stair)
          throw ArgumentError("--fixed-point needs 'stair' among --detectors");
        DetectorConfig d;
        d.algorithm = Algorithm::Stair;
        d.iterations = iters;
        d.numeric_mode = NumericMode::Fixed;
        d.fxp_profile = profile;
        cfg.detectors.push_back(d);
      }
      cfg.validate();
      return cmd_ber(cfg, out_path, rebuild_command(argc, argv));
    }

    if (*cpx) {
      std::vector<hw::ComplexityRow> rows;
      for (const auto& alg_name : split_commas(algs_flag)) {
        const Algorithm alg = algorithm_from_name(alg_name);
        for (const auto& u_str : split_commas(cpx_users_flag)) {
          const int u = std::stoi(u_str);
          for (const auto& k_str : split_commas(cpx_iters_flag)) {
            const int k = std::stoi(k_str);
            hw::ComplexityRow row;
            if (instrument_flag) {
              row.report = hw::instrument(alg, u, k, cpx_seed);
            } else {
              row.report.algorithm = alg;
              row.report.users = u;
              row.report.iterations = k;
              row.report.formula_mults = hw::formula_mults(alg, u, k);
            }
            // The cycle model describes the 8-user time-shared stair design.
            if (alg == Algorithm::Stair && u == 8)
              row.throughput_bps = hw::throughput_bps(hw::TimingModel{}, k);
            rows.push_back(row);
          }
        }
      }
      if (!cpx_out.empty()) {
        write_file(cpx_out, hw::complexity_csv(rows));
        RunManifest manifest;
        manifest.command = rebuild_command(argc, argv);
        manifest.master_seed = cpx_seed;
        nlohmann::json cfgj;
        cfgj["algs"] = algs_flag;
        cfgj["users"] = cpx_users_flag;
        cfgj["iters"] = cpx_iters_flag;
        cfgj["instrument"] = instrument_flag;
        manifest.config_json = cfgj.dump();
        manifest.started_at = manifest.finished_at = timestamp_utc_now();
        manifest.outputs = {cpx_out};
        write_file(cpx_out + ".manifest.json", manifest_json(manifest));
        std::cout << "wrote " << cpx_out << " and " << cpx_out << ".manifest.json\n";
      } else {
        std::cout << hw::complexity_table(rows);
      }
      return 0;
    }

    if (*tput) {
      tm.clock_hz = clock_mhz * 1e6;
      tm.users = t_users;
      const Constellation c = Constellation::qam(t_mod);
      tm.bits_per_symbol = c.bits_per_symbol();
      std::cout << hw::throughput_report(tm, t_iters);
      return 0;
    }
  } catch (const ArgumentError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const NumericError& e) {
    std::cerr << "numeric error: " << e.what() << '\n';
    return 3;
  }
  return 0;
}
