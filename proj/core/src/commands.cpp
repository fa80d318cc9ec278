#include "eemod/commands.hpp"

#include <cmath>
#include <cstdio>
#include <limits>

#include <json.hpp>

#include "eemod/errors.hpp"

namespace eemod {
namespace {

using ordered_json = nlohmann::ordered_json;

ScenarioConfig single_user_or_throw(const ScenarioConfig& config,
                                    const char* command) {
  if (config.users.size() != 1)
    throw ConfigError(std::string(command) +
                      " requires a config with exactly one user");
  return config;
}

}  // namespace

std::vector<double> make_grid(const GridSpec& spec) {
  if (!(spec.start < spec.stop))
    throw DomainError("grid: start must be below stop");
  if (spec.points < 2) throw DomainError("grid: need at least two points");
  if (spec.log_spaced && !(spec.start > 0.0))
    throw DomainError("grid: log spacing needs a positive start");
  std::vector<double> grid(static_cast<std::size_t>(spec.points));
  const int last = spec.points - 1;
  for (int i = 1; i < last; ++i) {
    const double t = static_cast<double>(i) / last;
    grid[static_cast<std::size_t>(i)] =
        spec.log_spaced
            ? std::exp(std::log(spec.start) +
                       t * (std::log(spec.stop) - std::log(spec.start)))
            : spec.start + t * (spec.stop - spec.start);
  }
  grid.front() = spec.start;
  grid.back() = spec.stop;
  return grid;
}

std::string format_sig(double value, int significant) {
  char buffer[64];
  std::snprintf(buffer, sizeof(buffer), "%.*g", significant, value);
  return buffer;
}

std::string cmd_table1(int packet_bits, const std::vector<int>& b_list) {
  std::string out =
      "b,alpha,beta,gamma_star_db,f_at_star,b_over_gamma_db,coefficient\n";
  for (const int b : b_list) {
    const ModulationScheme scheme = ModulationScheme::uncoded(b, packet_bits);
    const Sir star = optimal_sir(scheme);
    const double f_star = efficiency(scheme, star);
    const double coefficient = b * f_star / star.linear;
    const double b_over_gamma_db = 10.0 * std::log10(b) - star.db();
    out += std::to_string(b);
    out += ',' + format_sig(qam_alpha(b), 6);
    out += ',' + format_sig(qam_beta(b), 6);
    out += ',' + format_sig(star.db(), 6);
    out += ',' + format_sig(f_star, 6);
    out += ',' + format_sig(b_over_gamma_db, 6);
    out += ',' + format_sig(coefficient, 6);
    out += '\n';
  }
  return out;
}

std::string cmd_sir_sweep(const std::vector<ModulationScheme>& schemes,
                          const GridSpec& grid_db) {
  const std::vector<double> grid = make_grid(grid_db);
  std::string out = "sir_db,b,utility_norm\n";
  for (const double sir_db : grid) {
    const Sir gamma = Sir::from_db(sir_db);
    for (const ModulationScheme& scheme : schemes) {
      const double utility_norm =
          scheme.bits_per_symbol * efficiency(scheme, gamma) / gamma.linear;
      out += format_sig(sir_db);
      out += ',' + std::to_string(scheme.bits_per_symbol);
      out += ',' + format_sig(utility_norm);
      out += '\n';
    }
  }
  return out;
}

std::string cmd_delay_sweep(const ScenarioConfig& config,
                            const GridSpec& delay_norm_grid) {
  single_user_or_throw(config, "delay-sweep");
  const std::vector<double> grid = make_grid(delay_norm_grid);
  const double bandwidth = config.bandwidth_hz;

  std::vector<std::optional<CodingGainModel>> modes;
  modes.emplace_back(std::nullopt);
  if (config.coding_enabled) modes.emplace_back(config.coding_gains);

  std::string out =
      "delay_norm,coded,b,rs_over_b,gamma_db,power_norm,throughput_norm,"
      "utility_norm,status\n";
  for (const double delay_norm : grid) {
    for (std::size_t mode = 0; mode < modes.size(); ++mode) {
      UserProfile profile = config.user_profile(0);
      profile.traffic.delay_bound_s = delay_norm / bandwidth;
      out += format_sig(delay_norm);
      out += ',' + std::to_string(mode == 0 ? 0 : 1);
      try {
        const Strategy s =
            best_response(profile, bandwidth, config.policy, modes[mode]);
        const ModulationScheme scheme =
            scheme_for(profile, s.bits_per_symbol, modes[mode]);
        const double rate_share = s.symbol_rate_hz / bandwidth;
        const double f = efficiency(scheme, s.sir_target);
        // Normalizations: delay by 1/B, power by the effective gain
        // (p hhat = gamma R_s / B for one user), throughput by B, utility
        // by B hhat -- so every column is unit-free.
        out += ',' + std::to_string(s.bits_per_symbol);
        out += ',' + format_sig(rate_share);
        out += ',' + format_sig(s.sir_target.db());
        out += ',' + format_sig(s.sir_target.linear * rate_share);
        out += ',' + format_sig(s.bits_per_symbol * rate_share);
        out += ',' + format_sig(s.bits_per_symbol * f / s.sir_target.linear);
        out += ",ok\n";
      } catch (const DelayInfeasibleError&) {
        out += ",,,,,,,infeasible\n";
      }
    }
  }
  return out;
}

CommandResult cmd_nash(const ScenarioConfig& config) {
  const NetworkEnv env = config.to_env();
  ordered_json report;
  report["policy"] =
      config.policy == RatePolicy::ParetoDominant ? "pareto" : "maxrate";
  report["bandwidth_hz"] = env.bandwidth_hz;
  report["noise_w"] = env.noise_w;
  report["coding_enabled"] = config.coding_enabled;

  EquilibriumResult result;
  try {
    result = nash_equilibrium(env, config.policy);
  } catch (const SystemInfeasibleError& e) {
    report["converged"] = false;
    report["error"] = e.what();
    return {report.dump(2) + "\n", kExitSystemInfeasible};
  }

  if (!result.all_users_feasible()) {
    report["converged"] = false;
    ordered_json users = ordered_json::array();
    for (std::size_t k = 0; k < env.users.size(); ++k) {
      ordered_json u;
      u["user"] = k;
      if (!result.user_errors[k].empty()) u["error"] = result.user_errors[k];
      users.push_back(u);
    }
    report["users"] = users;
    return {report.dump(2) + "\n", kExitDelayInfeasible};
  }

  report["converged"] = result.converged;
  report["iterations"] = result.iterations;
  report["sum_size"] = result.sum_size;
  ordered_json users = ordered_json::array();
  for (std::size_t k = 0; k < result.strategies.size(); ++k) {
    const Strategy& s = result.strategies[k];
    ordered_json u;
    u["user"] = k;
    u["b"] = s.bits_per_symbol;
    u["rs_hz"] = s.symbol_rate_hz;
    u["gamma_db"] = s.sir_target.db();
    u["power_w"] = *s.power_w;
    u["utility_bits_per_joule"] = result.utilities_bpj[k];
    users.push_back(u);
  }
  report["users"] = users;

  ordered_json diag;
  ordered_json iterated = ordered_json::array();
  ordered_json closed = ordered_json::array();
  double worst = 0.0;
  for (std::size_t k = 0; k < result.strategies.size(); ++k) {
    const double p = *result.strategies[k].power_w;
    const double c = result.closed_form_power_w[k];
    iterated.push_back(p);
    closed.push_back(c);
    worst = std::max(worst, std::abs(p - c) / c);
  }
  diag["power_iterated_w"] = iterated;
  diag["power_closed_form_w"] = closed;
  diag["max_rel_power_mismatch"] = worst;
  report["diagnostics"] = diag;
  return {report.dump(2) + "\n", kExitOk};
}

CommandResult cmd_validate_mg1(const ScenarioConfig& config,
                               std::int64_t n_packets, std::uint64_t seed) {
  single_user_or_throw(config, "validate-mg1");
  const UserProfile profile = config.user_profile(0);
  const Strategy s =
      best_response(profile, config.bandwidth_hz, config.policy, config.coding());
  const ModulationScheme scheme =
      scheme_for(profile, s.bits_per_symbol, config.coding());
  const LinkOperatingPoint op{scheme, s.symbol_rate_hz, s.sir_target};

  const double analytic = avg_delay_s(op, profile.traffic);
  const SimResult sim = simulate_mg1(op, profile.traffic, n_packets, seed);

  double z = 0.0;
  const double scale = std::max(analytic, sim.mean_delay_s);
  if (sim.stderr_s > 1e-12 * scale) {
    z = (sim.mean_delay_s - analytic) / sim.stderr_s;
  } else if (std::abs(sim.mean_delay_s - analytic) > 1e-9 * analytic) {
    z = std::numeric_limits<double>::infinity();
  }

  ordered_json report;
  report["analytic_delay_s"] = analytic;
  report["simulated_mean_s"] = sim.mean_delay_s;
  report["stderr_s"] = sim.stderr_s;
  if (std::isfinite(z))
    report["z"] = z;
  else
    report["z"] = z > 0.0 ? "inf" : "-inf";
  report["n_packets"] = n_packets;
  report["seed"] = seed;
  ordered_json point;
  point["b"] = s.bits_per_symbol;
  point["rs_hz"] = s.symbol_rate_hz;
  point["gamma_db"] = s.sir_target.db();
  point["efficiency"] = efficiency(scheme, s.sir_target);
  point["tau_s"] = packet_time_s(op);
  point["arrival_pps"] = profile.traffic.arrival_pps;
  point["delay_bound_s"] = profile.traffic.delay_bound_s;
  report["operating_point"] = point;
  const int exit_code = std::abs(z) > 4.0 ? kExitValidationFailed : kExitOk;
  return {report.dump(2) + "\n", exit_code};
}

}  // namespace eemod
