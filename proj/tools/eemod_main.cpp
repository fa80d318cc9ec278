// eemod: energy-per-bit optimal M-QAM operating points for a DS-CDMA uplink
// under average-delay constraints. Subcommands emit CSV/JSON on stdout (or
// --out <path>); diagnostics go to stderr.
//
// Exit codes: 0 ok, 1 validation z-score out of range, 2 usage/config error,
// 3 delay-infeasible, 4 system-infeasible, 5 numeric failure.

#include <cstdint>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "eemod/commands.hpp"
#include "eemod/errors.hpp"

namespace {

void write_output(const std::string& text, const std::string& out_path) {
  if (out_path == "-") {
    std::cout << text;
    std::cout.flush();
    return;
  }
  std::ofstream out(out_path, std::ios::binary);
  if (!out) throw eemod::ConfigError("cannot open output file: " + out_path);
  out << text;
}

std::vector<int> even_b_list(int b_max) {
  std::vector<int> list;
  for (int b = 2; b <= b_max; b += 2) list.push_back(b);
  return list;
}

struct Cli {
  std::string config_path;
  std::string out_path = "-";
  int packet_bits = 100;
  int b_max = 10;
  bool coded = false;
  int points = 0;
  double start = 0.0;
  double stop = 0.0;
  std::int64_t packets = 1000000;
  std::uint64_t seed = 1;
};

int run(int argc, char** argv) {
  CLI::App app{
      "bits-per-joule operating points for M-QAM users on a CDMA uplink "
      "with average-delay QoS"};
  app.require_subcommand(1);
  Cli cli;

  CLI::App* table1 = app.add_subcommand(
      "table1", "Per-constellation optimal SIR targets and peak utilities (CSV)");
  table1->add_option("--packet-bits", cli.packet_bits, "Packet size L in bits")
      ->check(CLI::PositiveNumber);
  table1->add_option("--b-max", cli.b_max, "Highest even constellation size");
  table1->add_option("--out", cli.out_path, "Output path or '-' for stdout");

  CLI::App* sir_sweep = app.add_subcommand(
      "sir-sweep", "Normalized utility b*f/gamma over an SIR grid (CSV)");
  cli.points = 0;
  sir_sweep->add_option("--packet-bits", cli.packet_bits, "Packet size L in bits")
      ->check(CLI::PositiveNumber);
  sir_sweep->add_option("--b-max", cli.b_max, "Highest even constellation size");
  sir_sweep->add_option("--points", cli.points, "Grid points (default 400)");
  sir_sweep->add_option("--start", cli.start, "Grid start in dB (default 0)");
  sir_sweep->add_option("--stop", cli.stop, "Grid stop in dB (default 40)");
  sir_sweep->add_flag("--coded", cli.coded,
                      "Use the built-in constant-gain TCM table");
  sir_sweep->add_option("--out", cli.out_path, "Output path or '-' for stdout");

  CLI::App* delay_sweep = app.add_subcommand(
      "delay-sweep",
      "Single-user best response vs the normalized delay bound D*B (CSV)");
  delay_sweep->add_option("--config", cli.config_path, "Scenario JSON")
      ->required();
  delay_sweep->add_option("--points", cli.points, "Grid points (default 200)");
  delay_sweep->add_option("--start", cli.start, "Lowest D*B (default 1e2)");
  delay_sweep->add_option("--stop", cli.stop, "Highest D*B (default 1e6)");
  delay_sweep->add_flag("--coded", cli.coded,
                        "Force coding on regardless of the config");
  delay_sweep->add_option("--out", cli.out_path, "Output path or '-' for stdout");

  CLI::App* nash = app.add_subcommand(
      "nash", "Multi-user Pareto-dominant/max-rate equilibrium report (JSON)");
  nash->add_option("--config", cli.config_path, "Scenario JSON")->required();
  nash->add_option("--out", cli.out_path, "Output path or '-' for stdout");

  CLI::App* validate = app.add_subcommand(
      "validate-mg1",
      "Analytic mean delay vs queue simulation at the best response (JSON)");
  validate->add_option("--config", cli.config_path, "Scenario JSON")->required();
  validate->add_option("--packets", cli.packets, "Packets to simulate")
      ->check(CLI::PositiveNumber);
  validate->add_option("--seed", cli.seed, "Simulation seed");
  validate->add_option("--out", cli.out_path, "Output path or '-' for stdout");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return eemod::kExitUsage;
  }

  try {
    if (table1->parsed()) {
      write_output(eemod::cmd_table1(cli.packet_bits, even_b_list(cli.b_max)),
                   cli.out_path);
      return eemod::kExitOk;
    }
    if (sir_sweep->parsed()) {
      std::vector<eemod::ModulationScheme> schemes;
      const auto gains = eemod::ScenarioConfig::default_coding_gains();
      for (const int b : even_b_list(cli.b_max)) {
        schemes.push_back(
            cli.coded ? eemod::ModulationScheme::trellis(b, cli.packet_bits, gains)
                      : eemod::ModulationScheme::uncoded(b, cli.packet_bits));
      }
      eemod::GridSpec grid{cli.start, cli.stop > cli.start ? cli.stop : 40.0,
                           cli.points > 0 ? cli.points : 400, false};
      write_output(eemod::cmd_sir_sweep(schemes, grid), cli.out_path);
      return eemod::kExitOk;
    }
    if (delay_sweep->parsed()) {
      eemod::ScenarioConfig config =
          eemod::ScenarioConfig::from_file(cli.config_path);
      if (cli.coded) config.coding_enabled = true;
      eemod::GridSpec grid{cli.start > 0.0 ? cli.start : 1e2,
                           cli.stop > 0.0 ? cli.stop : 1e6,
                           cli.points > 0 ? cli.points : 200, true};
      write_output(eemod::cmd_delay_sweep(config, grid), cli.out_path);
      return eemod::kExitOk;
    }
    if (nash->parsed()) {
      const auto config = eemod::ScenarioConfig::from_file(cli.config_path);
      const eemod::CommandResult result = eemod::cmd_nash(config);
      write_output(result.output, cli.out_path);
      return result.exit_code;
    }
    if (validate->parsed()) {
      const auto config = eemod::ScenarioConfig::from_file(cli.config_path);
      const eemod::CommandResult result =
          eemod::cmd_validate_mg1(config, cli.packets, cli.seed);
      write_output(result.output, cli.out_path);
      return result.exit_code;
    }
  } catch (const eemod::ConfigError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return eemod::kExitUsage;
  } catch (const eemod::DelayInfeasibleError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return eemod::kExitDelayInfeasible;
  } catch (const eemod::InfeasibleTargetError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return eemod::kExitDelayInfeasible;
  } catch (const eemod::SystemInfeasibleError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return eemod::kExitSystemInfeasible;
  } catch (const eemod::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return eemod::kExitNumericFailure;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return eemod::kExitNumericFailure;
  }
  return eemod::kExitUsage;
}

}  // namespace

int main(int argc, char** argv) { return run(argc, argv); }
