#include "eemod/game.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "eemod/errors.hpp"

namespace eemod {
namespace {

void check_user(const UserProfile& user) {
  if (!std::isfinite(user.gain) || !(user.gain > 0.0))
    throw DomainError("user: channel gain must be finite and > 0");
  if (user.b_max < 2 || user.b_max % 2 != 0)
    throw DomainError("user: b_max must be an even integer >= 2");
  if (user.packet_bits < 1)
    throw DomainError("user: packet size must be >= 1 bit");
}

void check_bandwidth(double bandwidth_hz) {
  if (!std::isfinite(bandwidth_hz) || !(bandwidth_hz > 0.0))
    throw DomainError("bandwidth must be finite and > 0");
}

void check_env(const NetworkEnv& env) {
  check_bandwidth(env.bandwidth_hz);
  if (!std::isfinite(env.noise_w) || !(env.noise_w > 0.0))
    throw DomainError("noise power must be finite and > 0");
  if (env.users.empty()) throw DomainError("network needs at least one user");
  for (const auto& user : env.users) check_user(user);
}

}  // namespace

bool EquilibriumResult::all_users_feasible() const {
  return std::all_of(user_errors.begin(), user_errors.end(),
                     [](const std::string& e) { return e.empty(); });
}

ModulationScheme scheme_for(const UserProfile& user, int bits_per_symbol,
                            const std::optional<CodingGainModel>& coding) {
  if (coding)
    return ModulationScheme::trellis(bits_per_symbol, user.packet_bits, *coding);
  return ModulationScheme::uncoded(bits_per_symbol, user.packet_bits);
}

int select_constellation(const UserProfile& user, double bandwidth_hz,
                         const std::optional<CodingGainModel>& coding) {
  check_user(user);
  check_bandwidth(bandwidth_hz);
  for (int b = 2; b <= user.b_max; b += 2) {
    if (feasible_at_bandwidth(scheme_for(user, b, coding), bandwidth_hz,
                              user.traffic))
      return b;
  }
  const ModulationScheme top = scheme_for(user, user.b_max, coding);
  std::ostringstream msg;
  msg << "delay bound unreachable for any constellation up to b="
      << user.b_max << ": at full rate the required efficiency is "
      << required_efficiency(top, bandwidth_hz, user.traffic)
      << " but packet success stays below " << top.efficiency_sup();
  throw DelayInfeasibleError(msg.str());
}

Strategy best_response(const UserProfile& user, double bandwidth_hz,
                       RatePolicy policy,
                       const std::optional<CodingGainModel>& coding) {
  const int b = select_constellation(user, bandwidth_hz, coding);
  const ModulationScheme scheme = scheme_for(user, b, coding);
  const double rate_floor = omega_star_bps(scheme, user.traffic) / b;
  Strategy s;
  s.bits_per_symbol = b;
  if (rate_floor <= bandwidth_hz) {
    // Any rate in [rate_floor, B] at the energy-optimal SIR meets the bound.
    s.sir_target = optimal_sir(scheme);
    s.symbol_rate_hz =
        policy == RatePolicy::ParetoDominant ? rate_floor : bandwidth_hz;
  } else {
    // Full rate and just enough SIR to hit the delay bound with equality.
    s.symbol_rate_hz = bandwidth_hz;
    s.sir_target = sir_floor(scheme, bandwidth_hz, user.traffic);
  }
  return s;
}

double user_size(double symbol_rate_hz, Sir sir, double bandwidth_hz) {
  check_bandwidth(bandwidth_hz);
  if (!(symbol_rate_hz > 0.0) || !(sir.linear > 0.0))
    throw DomainError("user_size: rate and SIR must be > 0");
  return 1.0 / (1.0 + bandwidth_hz / (symbol_rate_hz * sir.linear));
}

double required_power_w(const NetworkEnv& env, std::size_t k,
                        const std::vector<SirTarget>& targets,
                        const std::vector<double>& power_w) {
  check_env(env);
  const std::size_t n = env.users.size();
  if (targets.size() != n || power_w.size() != n || k >= n)
    throw DomainError("required_power: mismatched sizes or bad user index");
  double interference = env.noise_w;
  for (std::size_t j = 0; j < n; ++j) {
    if (j == k) continue;
    if (!(power_w[j] >= 0.0))
      throw DomainError("required_power: powers must be >= 0");
    interference += power_w[j] * env.users[j].gain;
  }
  const SirTarget& t = targets[k];
  return t.sir.linear * (t.symbol_rate_hz / env.bandwidth_hz) * interference /
         env.users[k].gain;
}

std::vector<double> closed_form_powers_w(const NetworkEnv& env,
                                         const std::vector<SirTarget>& targets) {
  check_env(env);
  const std::size_t n = env.users.size();
  if (targets.size() != n)
    throw DomainError("closed_form_powers: one target per user required");
  std::vector<double> sizes(n);
  double sum = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    sizes[k] = user_size(targets[k].symbol_rate_hz, targets[k].sir,
                         env.bandwidth_hz);
    sum += sizes[k];
  }
  if (sum >= 1.0) {
    std::ostringstream msg;
    msg << "no power vector achieves all SIR targets: user sizes sum to "
        << sum << " (>= 1)";
    throw SystemInfeasibleError(msg.str());
  }
  std::vector<double> powers(n);
  for (std::size_t k = 0; k < n; ++k)
    powers[k] = env.noise_w * sizes[k] / (env.users[k].gain * (1.0 - sum));
  return powers;
}

EquilibriumResult nash_equilibrium(const NetworkEnv& env, RatePolicy policy,
                                   const SolverOptions& options) {
  check_env(env);
  if (!(options.power_rel_tol > 0.0) || options.max_iter < 1)
    throw DomainError("nash_equilibrium: invalid solver options");
  const std::size_t n = env.users.size();

  EquilibriumResult result;
  result.user_errors.assign(n, "");

  // SIR-domain best responses decouple: each depends only on the user's own
  // traffic and the bandwidth. Only the powers need iterating.
  std::vector<Strategy> strategies(n);
  bool any_infeasible = false;
  for (std::size_t k = 0; k < n; ++k) {
    try {
      strategies[k] = best_response(env.users[k], env.bandwidth_hz, policy,
                                    env.coding);
    } catch (const DelayInfeasibleError& e) {
      result.user_errors[k] = e.what();
      any_infeasible = true;
    }
  }
  if (any_infeasible) return result;  // converged stays false

  std::vector<SirTarget> targets(n);
  for (std::size_t k = 0; k < n; ++k)
    targets[k] = {strategies[k].symbol_rate_hz, strategies[k].sir_target};

  double sum_size = 0.0;
  for (std::size_t k = 0; k < n; ++k)
    sum_size += user_size(targets[k].symbol_rate_hz, targets[k].sir,
                          env.bandwidth_hz);
  result.sum_size = sum_size;
  if (sum_size >= 1.0) {
    std::ostringstream msg;
    msg << "system infeasible before iteration: user sizes sum to " << sum_size;
    throw SystemInfeasibleError(msg.str());
  }

  result.closed_form_power_w = closed_form_powers_w(env, targets);

  // Sequential (Gauss-Seidel) SIR-targeting updates from zero powers; this is
  // a standard interference function, so the iterates rise monotonically to
  // the fixed point whenever the sizes sum below 1.
  std::vector<double> powers(n, 0.0);
  bool converged = false;
  int iter = 0;
  while (iter < options.max_iter) {
    ++iter;
    double worst_change = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
      const double next = required_power_w(env, k, targets, powers);
      const double rel = std::abs(next - powers[k]) /
                         std::max(next, std::numeric_limits<double>::min());
      worst_change = std::max(worst_change, rel);
      powers[k] = next;
    }
    if (worst_change < options.power_rel_tol) {
      converged = true;
      break;
    }
  }
  if (!converged)
    throw ConvergenceError("nash_equilibrium: power iteration hit max_iter");

  for (std::size_t k = 0; k < n; ++k) {
    const double rel = std::abs(powers[k] - result.closed_form_power_w[k]) /
                       result.closed_form_power_w[k];
    if (!(rel <= 1e-8)) {
      std::ostringstream msg;
      msg << "nash_equilibrium: iterated power for user " << k
          << " disagrees with the closed form by rel " << rel;
      throw ConvergenceError(msg.str());
    }
  }

  result.iterations = iter;
  result.converged = true;
  result.strategies = std::move(strategies);
  result.utilities_bpj.resize(n);
  for (std::size_t k = 0; k < n; ++k) {
    Strategy& s = result.strategies[k];
    s.power_w = powers[k];
    const ModulationScheme scheme =
        scheme_for(env.users[k], s.bits_per_symbol, env.coding);
    // bits/joule: goodput b R_s f over transmit power
    result.utilities_bpj[k] = s.bits_per_symbol * s.symbol_rate_hz *
                              efficiency(scheme, s.sir_target) / powers[k];
  }
  return result;
}

}  // namespace eemod
