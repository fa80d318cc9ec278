#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "eemod/queueing.hpp"

namespace eemod {

// How a best response picks the symbol rate inside its optimal interval.
// ParetoDominant takes the smallest rate (the equilibrium every user prefers);
// MaxRate takes the full bandwidth.
enum class RatePolicy { ParetoDominant, MaxRate };

struct UserProfile {
  double gain = 1.0;   // channel power gain h to the access point
  TrafficQos traffic;
  int packet_bits = 100;
  int b_max = 10;      // highest constellation size the search may use
};

struct NetworkEnv {
  double bandwidth_hz = 1.0;  // B
  double noise_w = 1.0;       // receiver noise power sigma^2
  std::vector<UserProfile> users;
  std::optional<CodingGainModel> coding;  // applied to every user when set
};

// One user's action. The power is filled in by the equilibrium solver;
// SIR-domain best responses leave it empty.
struct Strategy {
  int bits_per_symbol = 2;
  double symbol_rate_hz = 0.0;
  Sir sir_target;
  std::optional<double> power_w;
};

// Per-user (rate, SIR) targets for the power-control operations.
struct SirTarget {
  double symbol_rate_hz = 0.0;
  Sir sir;
};

struct EquilibriumResult {
  std::vector<Strategy> strategies;        // with powers, when solved
  std::vector<double> utilities_bpj;       // bits per joule
  std::vector<double> closed_form_power_w; // independent power solution
  std::vector<std::string> user_errors;    // per user; empty string = fine
  double sum_size = 0.0;                   // sum of user sizes Phi_j
  int iterations = 0;
  bool converged = false;

  bool all_users_feasible() const;
};

// Scheme a user runs at a given constellation size, honoring the shared
// coding model when present.
ModulationScheme scheme_for(const UserProfile& user, int bits_per_symbol,
                            const std::optional<CodingGainModel>& coding);

// Smallest even b <= b_max whose delay bound is reachable within bandwidth B
// (search order 2, 4, 6, ...). Throws DelayInfeasibleError naming the binding
// required efficiency at b_max when none qualifies.
int select_constellation(const UserProfile& user, double bandwidth_hz,
                         const std::optional<CodingGainModel>& coding = {});

// SIR-domain best response: the selected constellation, a symbol rate, and a
// target SIR. Depends only on this user's traffic and B, not on other users.
// When the critical rate fits under B the SIR is the energy optimum and the
// policy picks the rate; otherwise the user runs at full bandwidth with the
// SIR floor. The returned point always meets the delay bound.
Strategy best_response(const UserProfile& user, double bandwidth_hz,
                       RatePolicy policy,
                       const std::optional<CodingGainModel>& coding = {});

// User "size" Phi = (1 + B / (R_s gamma))^{-1}, the fractional resource
// footprint of a matched-filter user. System feasibility needs sum < 1.
double user_size(double symbol_rate_hz, Sir sir, double bandwidth_hz);

// Exact SIR-targeting power update for user k against the current powers:
//   p_k = gamma_k (R_k / B) (sigma^2 + sum_{j != k} p_j h_j) / h_k.
double required_power_w(const NetworkEnv& env, std::size_t k,
                        const std::vector<SirTarget>& targets,
                        const std::vector<double>& power_w);

// Unique simultaneous solution p_k = sigma^2 Phi_k / (h_k (1 - sum_j Phi_j)).
// Throws SystemInfeasibleError when the sizes sum to 1 or more.
std::vector<double> closed_form_powers_w(const NetworkEnv& env,
                                         const std::vector<SirTarget>& targets);

struct SolverOptions {
  double power_rel_tol = 1e-12;
  int max_iter = 100000;
};

// Full equilibrium: per-user SIR-domain best responses, then sequential
// (fixed user order) power iteration from all-zero powers, cross-checked
// against the closed-form power vector to 1e-8. Per-user delay infeasibility
// is reported inside the result; an infeasible system throws.
EquilibriumResult nash_equilibrium(const NetworkEnv& env, RatePolicy policy,
                                   const SolverOptions& options = {});

}  // namespace eemod
