#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "eemod/game.hpp"

namespace eemod {

struct UserConfig {
  double gain = 1.0;
  std::optional<double> arrival_rate_pps;      // lambda, packets/s
  std::optional<double> source_rate_fraction;  // lambda = fraction * B / L
  double delay_bound_s = 1.0;
};

// On-disk scenario description. JSON with an explicit "version" field (must
// be 1); unknown keys are rejected at every level so golden scenarios cannot
// drift silently.
struct ScenarioConfig {
  double bandwidth_hz = 1.0;
  double noise_w = 1.0;
  int packet_bits = 100;
  int b_max = 10;
  bool coding_enabled = false;
  CodingGainModel coding_gains;
  RatePolicy policy = RatePolicy::ParetoDominant;
  std::vector<UserConfig> users;

  // Constant-gain table the CLI starts from; quantitative coded claims need a
  // caller-supplied table for the actual code.
  static CodingGainModel default_coding_gains();

  static ScenarioConfig from_json_text(std::string_view text);
  static ScenarioConfig from_file(const std::string& path);

  ScenarioConfig() : coding_gains(default_coding_gains()) {}

  double user_arrival_pps(const UserConfig& user) const;
  TrafficQos user_traffic(std::size_t i) const;
  UserProfile user_profile(std::size_t i) const;

  // Coding model as the game modules expect it: present only when enabled.
  std::optional<CodingGainModel> coding() const;
  NetworkEnv to_env() const;
};

}  // namespace eemod
