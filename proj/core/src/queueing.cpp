#include "eemod/queueing.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <vector>

#include "eemod/errors.hpp"
#include "eemod/numerics.hpp"

namespace eemod {
namespace {

void check_traffic(const TrafficQos& t) {
  if (!std::isfinite(t.arrival_pps) || t.arrival_pps < 0.0)
    throw DomainError("traffic: arrival rate must be finite and >= 0");
  if (!std::isfinite(t.delay_bound_s) || !(t.delay_bound_s > 0.0))
    throw DomainError("traffic: delay bound must be finite and > 0");
}

void check_rate(double symbol_rate_hz) {
  if (!std::isfinite(symbol_rate_hz) || !(symbol_rate_hz > 0.0))
    throw DomainError("symbol rate must be finite and > 0");
}

double tau_of(const ModulationScheme& scheme, double symbol_rate_hz) {
  return scheme.packet_bits /
         (scheme.bits_per_symbol * symbol_rate_hz);
}

}  // namespace

double packet_time_s(const LinkOperatingPoint& op) {
  check_rate(op.symbol_rate_hz);
  return tau_of(op.scheme, op.symbol_rate_hz);
}

double service_rate_pps(const LinkOperatingPoint& op) {
  return efficiency(op.scheme, op.sir) / packet_time_s(op);
}

double avg_delay_s(const LinkOperatingPoint& op, const TrafficQos& traffic) {
  check_traffic(traffic);
  const double tau = packet_time_s(op);
  const double f = efficiency(op.scheme, op.sir);
  const double load = traffic.arrival_pps * tau;  // lambda tau
  if (!(f > load)) {
    std::ostringstream msg;
    msg << "queue unstable: packet success " << f
        << " does not exceed per-transmission load " << load;
    throw InstabilityError(msg.str());
  }
  return tau * (1.0 - 0.5 * load) / (f - load);
}

double required_efficiency(const ModulationScheme& scheme, double symbol_rate_hz,
                           const TrafficQos& traffic) {
  check_traffic(traffic);
  check_rate(symbol_rate_hz);
  const double l = static_cast<double>(scheme.packet_bits);
  const double b = static_cast<double>(scheme.bits_per_symbol);
  const double r = symbol_rate_hz;
  const double lambda = traffic.arrival_pps;
  const double d = traffic.delay_bound_s;
  return l * lambda / (b * r) + l / (b * r * d) -
         l * l * lambda / (2.0 * b * b * r * r * d);
}

Sir sir_floor(const ModulationScheme& scheme, double symbol_rate_hz,
              const TrafficQos& traffic) {
  check_traffic(traffic);
  check_rate(symbol_rate_hz);
  const double sup = scheme.efficiency_sup();
  const double tau = tau_of(scheme, symbol_rate_hz);
  if (traffic.arrival_pps * tau >= sup) {
    std::ostringstream msg;
    msg << "delay bound unreachable at this rate: per-transmission load "
        << traffic.arrival_pps * tau << " reaches the packet success supremum "
        << sup;
    throw DelayInfeasibleError(msg.str());
  }
  const double eta = required_efficiency(scheme, symbol_rate_hz, traffic);
  if (eta >= sup) {
    std::ostringstream msg;
    msg << "delay bound unreachable at this rate: required efficiency " << eta
        << " >= supremum " << sup;
    throw DelayInfeasibleError(msg.str());
  }
  // In the stable region the two positive terms dominate, so eta > 0 here.
  return efficiency_inverse(scheme, eta);
}

double omega_star_bps(const ModulationScheme& scheme, const TrafficQos& traffic) {
  check_traffic(traffic);
  const Sir star = optimal_sir(scheme);
  const double f_star = efficiency(scheme, star);
  const double l = static_cast<double>(scheme.packet_bits);
  const double d = traffic.delay_bound_s;
  const double dl = d * traffic.arrival_pps;
  return (l / d) * (1.0 + dl + std::sqrt(1.0 + dl * dl + 2.0 * (1.0 - f_star) * dl)) /
         (2.0 * f_star);
}

bool feasible_at_bandwidth(const ModulationScheme& scheme, double bandwidth_hz,
                           const TrafficQos& traffic) {
  check_traffic(traffic);
  check_rate(bandwidth_hz);
  const double sup = scheme.efficiency_sup();
  // Past lambda tau >= sup no SIR stabilizes the queue even though the
  // required-efficiency polynomial can fall back below the supremum.
  if (traffic.arrival_pps * tau_of(scheme, bandwidth_hz) >= sup) return false;
  return required_efficiency(scheme, bandwidth_hz, traffic) < sup;
}

SimResult simulate_mg1(const LinkOperatingPoint& op, const TrafficQos& traffic,
                       std::int64_t n_packets, std::uint64_t seed) {
  check_traffic(traffic);
  if (n_packets < 1) throw DomainError("simulate_mg1: need at least one packet");
  const double tau = packet_time_s(op);
  const double f = efficiency(op.scheme, op.sir);
  const double load = traffic.arrival_pps * tau;
  if (!(f > load))
    throw InstabilityError("simulate_mg1: operating point is unstable");

  numerics::SplitMix64 rng(seed);
  const double log_fail = std::log1p(-f);  // log(1 - f) < 0, -inf when f == 1

  const std::int64_t n_batches = std::min<std::int64_t>(100, n_packets);
  const std::int64_t base = n_packets / n_batches;
  const std::int64_t extra = n_packets % n_batches;

  std::vector<double> batch_means;
  batch_means.reserve(static_cast<std::size_t>(n_batches));
  double total = 0.0;
  // Waiting times evolve by the Lindley recursion on interarrival gaps;
  // keeping everything relative avoids losing tau-scale precision against an
  // ever-growing absolute clock. Per packet: one interarrival draw (when
  // lambda > 0), then one attempt draw.
  double wait = 0.0;
  double prev_service = 0.0;
  bool first = true;
  for (std::int64_t b = 0; b < n_batches; ++b) {
    const std::int64_t batch_size = base + (b < extra ? 1 : 0);
    double batch_sum = 0.0;
    for (std::int64_t i = 0; i < batch_size; ++i) {
      if (traffic.arrival_pps > 0.0) {
        const double gap = -std::log(rng.uniform()) / traffic.arrival_pps;
        wait = first ? 0.0 : std::max(0.0, wait + prev_service - gap);
      } else {
        wait = 0.0;  // lambda -> 0 limit: every packet finds the server idle
      }
      const double u = rng.uniform();
      const double attempts = 1.0 + std::floor(std::log(u) / log_fail);
      prev_service = tau * attempts;
      first = false;
      batch_sum += wait + prev_service;
    }
    total += batch_sum;
    batch_means.push_back(batch_sum / static_cast<double>(batch_size));
  }

  SimResult result;
  result.n_packets = n_packets;
  result.mean_delay_s = total / static_cast<double>(n_packets);
  if (n_batches >= 2) {
    double mm = 0.0;
    for (const double m : batch_means) mm += m;
    mm /= static_cast<double>(n_batches);
    double ss = 0.0;
    for (const double m : batch_means) ss += (m - mm) * (m - mm);
    result.stderr_s =
        std::sqrt(ss / (static_cast<double>(n_batches - 1) *
                        static_cast<double>(n_batches)));
  }
  return result;
}

}  // namespace eemod
