#pragma once

#include <cstdint>

#include "eemod/modulation.hpp"

namespace eemod {

// One user's traffic contract: Poisson packet arrivals and an upper bound on
// the average packet delay (queueing plus transmission).
struct TrafficQos {
  double arrival_pps = 0.0;    // lambda
  double delay_bound_s = 1.0;  // D
};

// A concrete link configuration: scheme, symbol rate and operating SIR.
struct LinkOperatingPoint {
  ModulationScheme scheme;
  double symbol_rate_hz = 0.0;  // R_s
  Sir sir;
};

// Packet transmission time tau = L / (b R_s).
double packet_time_s(const LinkOperatingPoint& op);

// ARQ service rate f_b(gamma) / tau = R_s b f_b(gamma) / L, packets per second.
double service_rate_pps(const LinkOperatingPoint& op);

// Mean M/G/1 sojourn time tau (1 - lambda tau / 2) / (f_b(gamma) - lambda tau).
// Throws InstabilityError unless f_b(gamma) > lambda tau.
double avg_delay_s(const LinkOperatingPoint& op, const TrafficQos& traffic);

// Minimum packet success probability that meets the delay bound at this rate:
//   eta_b = L l / (b R) + L / (b R D) - L^2 l / (2 b^2 R^2 D),
// algebraically lambda tau + tau (1 - lambda tau / 2) / D.
double required_efficiency(const ModulationScheme& scheme, double symbol_rate_hz,
                           const TrafficQos& traffic);

// SIR floor implied by the delay bound at this rate, f_b^{-1}(eta_b). Throws
// DelayInfeasibleError when eta_b is at/above the efficiency supremum.
Sir sir_floor(const ModulationScheme& scheme, double symbol_rate_hz,
              const TrafficQos& traffic);

// Critical total bit rate: transmitting at symbol rate omega_star / b and the
// energy-optimal SIR meets the delay bound with equality.
double omega_star_bps(const ModulationScheme& scheme, const TrafficQos& traffic);

// Whether the delay bound is reachable at all with symbol rate up to B.
bool feasible_at_bandwidth(const ModulationScheme& scheme, double bandwidth_hz,
                           const TrafficQos& traffic);

struct SimResult {
  double mean_delay_s = 0.0;
  double stderr_s = 0.0;
  std::int64_t n_packets = 0;
};

// Simulates the FIFO ARQ queue packet by packet: Poisson arrivals, each packet
// served in a geometric number of tau-long transmission attempts with success
// probability f_b(gamma). Returns the sample mean sojourn time with a batch-
// means standard error (up to 100 batches), which absorbs the autocorrelation
// of successive sojourns. Deterministic for a fixed seed (SplitMix64 stream;
// per packet: one interarrival draw when lambda > 0, then one attempt draw).
SimResult simulate_mg1(const LinkOperatingPoint& op, const TrafficQos& traffic,
                       std::int64_t n_packets, std::uint64_t seed);

}  // namespace eemod
