#pragma once

#include <map>
#include <optional>
#include <string>

namespace eemod {

// Symbol-level SIR. Stored linear; convert to/from dB only at interfaces.
struct Sir {
  double linear = 0.0;

  static Sir from_db(double db);
  double db() const;
};

// Effective TCM coding gain per constellation size, in dB. The gain is a
// constant per b (no SIR dependence); swap the table to model another code.
struct CodingGainModel {
  std::map<int, double> gains_db;
  std::string info;

  double gain_db(int bits_per_symbol) const;  // ConfigError if b is absent
  double gain_linear(int bits_per_symbol) const;
};

// Square M-QAM transmission scheme: b information bits per symbol (b = log2 M,
// even), packets of L bits, optionally trellis-coded.
struct ModulationScheme {
  int bits_per_symbol = 2;  // b
  int packet_bits = 100;    // L
  std::optional<CodingGainModel> coding;

  static ModulationScheme uncoded(int bits_per_symbol, int packet_bits);
  static ModulationScheme trellis(int bits_per_symbol, int packet_bits,
                                  CodingGainModel model);

  bool coded() const { return coding.has_value(); }

  // Supremum of the efficiency function, 1 - 2^-L.
  double efficiency_sup() const;
};

// alpha_b = 2 (1 - 2^{-b/2})
double qam_alpha(int bits_per_symbol);

// beta_b = 3 / (2^b - 1)
double qam_beta(int bits_per_symbol);

// Packet success probability (1 - alpha_b Q(sqrt(beta_b g)))^{2L/b}, evaluated
// in the log domain so large L does not lose accuracy. The scheme's coding
// gain (if any) multiplies the SIR first.
double packet_success(const ModulationScheme& scheme, Sir gamma);

// Efficiency function: packet success shifted to be exactly zero at zero SIR.
// Strictly increasing, with supremum 1 - 2^-L.
double efficiency(const ModulationScheme& scheme, Sir gamma);

// Analytic d(efficiency)/d(gamma); gamma must be strictly positive.
double efficiency_derivative(const ModulationScheme& scheme, Sir gamma);

// Inverse of the efficiency function on [0, 1 - 2^-L). Bisection plus a few
// Newton polish steps; InfeasibleTargetError when eta is at/above the sup.
Sir efficiency_inverse(const ModulationScheme& scheme, double eta);

// Energy-optimal SIR: the unique positive root of f_b(g) = g f_b'(g),
// bracketed geometrically from g = 1.
Sir optimal_sir(const ModulationScheme& scheme);

// b f_b(g*) / g*. Peak utility is bandwidth * effective gain * coefficient.
double peak_utility_coefficient(const ModulationScheme& scheme);

}  // namespace eemod
