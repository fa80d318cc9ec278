#include "eemod/modulation.hpp"

#include <cmath>
#include <sstream>

#include "eemod/errors.hpp"
#include "eemod/numerics.hpp"

namespace eemod {
namespace {

constexpr double kLn2 = 0.6931471805599453094172321214581766;

void check_bits_per_symbol(int b) {
  if (b < 2 || b % 2 != 0)
    throw DomainError("constellation size must be an even integer >= 2, got b=" +
                      std::to_string(b));
}

void check_scheme(const ModulationScheme& s) {
  check_bits_per_symbol(s.bits_per_symbol);
  if (s.packet_bits < 1)
    throw DomainError("packet size must be a positive bit count, got L=" +
                      std::to_string(s.packet_bits));
}

// Rejects negative SIR and NaN; +inf passes through as the saturation limit.
double checked_sir(Sir gamma, const char* who) {
  if (std::isnan(gamma.linear) || gamma.linear < 0.0)
    throw DomainError(std::string(who) + ": SIR must be >= 0");
  return gamma.linear;
}

double effective_sir(const ModulationScheme& s, double gamma_linear) {
  if (!s.coding) return gamma_linear;
  return gamma_linear * s.coding->gain_linear(s.bits_per_symbol);
}

}  // namespace

Sir Sir::from_db(double db) { return Sir{std::pow(10.0, db / 10.0)}; }

double Sir::db() const { return 10.0 * std::log10(linear); }

double CodingGainModel::gain_db(int bits_per_symbol) const {
  const auto it = gains_db.find(bits_per_symbol);
  if (it == gains_db.end())
    throw ConfigError("no coding gain configured for b=" +
                      std::to_string(bits_per_symbol) +
                      (info.empty() ? "" : " (" + info + ")"));
  return it->second;
}

double CodingGainModel::gain_linear(int bits_per_symbol) const {
  return std::pow(10.0, gain_db(bits_per_symbol) / 10.0);
}

ModulationScheme ModulationScheme::uncoded(int bits_per_symbol, int packet_bits) {
  ModulationScheme s{bits_per_symbol, packet_bits, std::nullopt};
  check_scheme(s);
  return s;
}

ModulationScheme ModulationScheme::trellis(int bits_per_symbol, int packet_bits,
                                           CodingGainModel model) {
  for (const auto& [b, gain] : model.gains_db) {
    check_bits_per_symbol(b);
    if (!(gain >= 0.0))
      throw ConfigError("coding gain for b=" + std::to_string(b) +
                        " must be >= 0 dB");
  }
  ModulationScheme s{bits_per_symbol, packet_bits, std::move(model)};
  check_scheme(s);
  s.coding->gain_db(bits_per_symbol);  // must be present for our own b
  return s;
}

double ModulationScheme::efficiency_sup() const {
  return 1.0 - std::exp(-static_cast<double>(packet_bits) * kLn2);
}

double qam_alpha(int bits_per_symbol) {
  check_bits_per_symbol(bits_per_symbol);
  return 2.0 * (1.0 - std::ldexp(1.0, -bits_per_symbol / 2));
}

double qam_beta(int bits_per_symbol) {
  check_bits_per_symbol(bits_per_symbol);
  return 3.0 / (std::ldexp(1.0, bits_per_symbol) - 1.0);
}

double packet_success(const ModulationScheme& scheme, Sir gamma) {
  check_scheme(scheme);
  const double g = effective_sir(scheme, checked_sir(gamma, "packet_success"));
  if (std::isinf(g)) return 1.0;
  const double u = std::sqrt(qam_beta(scheme.bits_per_symbol) * g);
  const double q = numerics::q_function(u);
  const double exponent =
      2.0 * scheme.packet_bits / static_cast<double>(scheme.bits_per_symbol);
  return std::exp(exponent * std::log1p(-qam_alpha(scheme.bits_per_symbol) * q));
}

double efficiency(const ModulationScheme& scheme, Sir gamma) {
  check_scheme(scheme);
  if (checked_sir(gamma, "efficiency") == 0.0) return 0.0;
  return packet_success(scheme, gamma) -
         std::exp(-static_cast<double>(scheme.packet_bits) * kLn2);
}

double efficiency_derivative(const ModulationScheme& scheme, Sir gamma) {
  check_scheme(scheme);
  if (!std::isfinite(gamma.linear) || !(gamma.linear > 0.0))
    throw DomainError("efficiency_derivative: SIR must be finite and > 0");
  const double coding_gain =
      scheme.coding ? scheme.coding->gain_linear(scheme.bits_per_symbol) : 1.0;
  const double g = gamma.linear * coding_gain;
  const double alpha = qam_alpha(scheme.bits_per_symbol);
  const double beta = qam_beta(scheme.bits_per_symbol);
  const double u = std::sqrt(beta * g);
  const double q = numerics::q_function(u);
  const double exponent =
      2.0 * scheme.packet_bits / static_cast<double>(scheme.bits_per_symbol);
  // chain rule through u = sqrt(beta g G):
  //   f' = m (1 - a Q(u))^{m-1} a phi(u) beta G / (2u)
  const double pow_factor = std::exp((exponent - 1.0) * std::log1p(-alpha * q));
  return exponent * pow_factor * alpha * numerics::gaussian_pdf(u) *
         (beta / (2.0 * u)) * coding_gain;
}

Sir efficiency_inverse(const ModulationScheme& scheme, double eta) {
  check_scheme(scheme);
  if (!std::isfinite(eta) || eta < 0.0)
    throw DomainError("efficiency_inverse: target must be finite and >= 0");
  const double sup = scheme.efficiency_sup();
  if (eta >= sup) {
    std::ostringstream msg;
    msg << "efficiency_inverse: target " << eta
        << " is not reachable; packet success saturates below " << sup;
    throw InfeasibleTargetError(msg.str());
  }
  if (eta == 0.0) return Sir{0.0};
  const auto g = [&](double x) { return efficiency(scheme, Sir{x}) - eta; };
  const auto [lo, hi] = numerics::expand_bracket(g, 1.0);
  double x = numerics::find_root(g, lo, hi);
  // Newton polish: the bisection answer is good to ~1e-12 in x; a couple of
  // derivative steps push the residual in f down to machine precision so the
  // delay round-trips downstream hold even where the curve is steep.
  for (int i = 0; i < 4; ++i) {
    const double r = efficiency(scheme, Sir{x}) - eta;
    const double d = efficiency_derivative(scheme, Sir{x});
    if (!(d > 0.0) || !std::isfinite(d)) break;
    const double step = r / d;
    const double next = x - step;
    if (!(next > 0.0) || !std::isfinite(next)) break;
    x = next;
    if (std::abs(step) <= 1e-15 * x) break;
  }
  return Sir{x};
}

Sir optimal_sir(const ModulationScheme& scheme) {
  check_scheme(scheme);
  const auto g = [&](double x) {
    return x * efficiency_derivative(scheme, Sir{x}) - efficiency(scheme, Sir{x});
  };
  // g is positive between a vanishing residual bump near zero (a side effect
  // of subtracting 2^-L) and the energy optimum, negative beyond it. Expand
  // upward only from 1 so the bracket cannot land on the residual crossing.
  double lo = 1.0;
  double g_lo = g(lo);
  if (g_lo == 0.0) return Sir{lo};
  if (g_lo < 0.0)
    throw BracketingError(
        "optimal_sir: utility has no interior maximum above SIR 1 for this "
        "scheme (packet too short for the constellation)");
  for (int k = 0; k < 200; ++k) {
    const double hi = lo * 2.0;
    const double g_hi = g(hi);
    if (!(g_hi > 0.0)) return Sir{numerics::find_root(g, lo, hi)};
    lo = hi;
    g_lo = g_hi;
  }
  throw BracketingError("optimal_sir: no sign change within expansion cap");
}

double peak_utility_coefficient(const ModulationScheme& scheme) {
  const Sir star = optimal_sir(scheme);
  return scheme.bits_per_symbol * efficiency(scheme, star) / star.linear;
}

}  // namespace eemod
