#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "eemod/scenario.hpp"

namespace eemod {

// Process exit codes shared by the CLI and the command layer.
enum ExitCode : int {
  kExitOk = 0,
  kExitValidationFailed = 1,  // simulation z-score out of range
  kExitUsage = 2,
  kExitDelayInfeasible = 3,
  kExitSystemInfeasible = 4,
  kExitNumericFailure = 5,
};

// Inclusive grid over [start, stop], linearly or logarithmically spaced.
struct GridSpec {
  double start = 0.0;
  double stop = 1.0;
  int points = 2;
  bool log_spaced = false;
};

std::vector<double> make_grid(const GridSpec& spec);

// '%.*g' with C-locale semantics: '.' decimal separator, byte-stable.
std::string format_sig(double value, int significant = 10);

// Reference table of per-constellation optima: alpha_b, beta_b, the
// energy-optimal SIR in dB, the efficiency there, and the peak utility
// coefficient. CSV, 6 significant digits.
std::string cmd_table1(int packet_bits, const std::vector<int>& b_list);

// Normalized utility b f_b(gamma)/gamma over a dB grid; one row per
// (grid point, scheme). CSV.
std::string cmd_sir_sweep(const std::vector<ModulationScheme>& schemes,
                          const GridSpec& grid_db);

// Single-user best-response sweep over the normalized delay bound D*B.
// Emits uncoded rows always and coded rows too when the config enables
// coding; infeasible grid points keep their row with an explicit marker.
std::string cmd_delay_sweep(const ScenarioConfig& config,
                            const GridSpec& delay_norm_grid);

struct CommandResult {
  std::string output;
  int exit_code = kExitOk;
};

// Multi-user equilibrium report (JSON): per-user strategy, power and utility,
// plus an iterated-vs-closed-form power diagnostic block.
CommandResult cmd_nash(const ScenarioConfig& config);

// Analytic mean delay vs simulation at the configured single user's
// best-response operating point (JSON report with a z-score).
CommandResult cmd_validate_mg1(const ScenarioConfig& config,
                               std::int64_t n_packets, std::uint64_t seed);

}  // namespace eemod
