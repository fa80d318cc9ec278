#include "eemod/scenario.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "eemod/errors.hpp"

namespace eemod {
namespace {

using nlohmann::json;

void reject_unknown_keys(const json& j, std::initializer_list<const char*> allowed,
                         const std::string& where) {
  for (const auto& item : j.items()) {
    bool known = false;
    for (const char* key : allowed) {
      if (item.key() == key) {
        known = true;
        break;
      }
    }
    if (!known)
      throw ConfigError("unknown field '" + item.key() + "' in " + where);
  }
}

double require_number(const json& j, const char* key, const std::string& where) {
  if (!j.contains(key))
    throw ConfigError("missing field '" + std::string(key) + "' in " + where);
  if (!j.at(key).is_number())
    throw ConfigError("field '" + std::string(key) + "' in " + where +
                      " must be a number");
  return j.at(key).get<double>();
}

double optional_number(const json& j, const char* key, double fallback,
                       const std::string& where) {
  if (!j.contains(key)) return fallback;
  if (!j.at(key).is_number())
    throw ConfigError("field '" + std::string(key) + "' in " + where +
                      " must be a number");
  return j.at(key).get<double>();
}

int as_int(double v, const char* key, const std::string& where) {
  if (std::floor(v) != v)
    throw ConfigError("field '" + std::string(key) + "' in " + where +
                      " must be an integer");
  return static_cast<int>(v);
}

UserConfig parse_user(const json& j, std::size_t index) {
  const std::string where = "users[" + std::to_string(index) + "]";
  if (!j.is_object()) throw ConfigError(where + " must be an object");
  reject_unknown_keys(
      j, {"gain", "arrival_rate_pps", "source_rate_fraction", "delay_bound_s"},
      where);
  UserConfig user;
  user.gain = optional_number(j, "gain", 1.0, where);
  if (!(user.gain > 0.0)) throw ConfigError(where + ": gain must be > 0");
  user.delay_bound_s = require_number(j, "delay_bound_s", where);
  if (!(user.delay_bound_s > 0.0))
    throw ConfigError(where + ": delay_bound_s must be > 0");
  const bool has_rate = j.contains("arrival_rate_pps");
  const bool has_fraction = j.contains("source_rate_fraction");
  if (has_rate == has_fraction)
    throw ConfigError(where +
                      ": exactly one of arrival_rate_pps or "
                      "source_rate_fraction is required");
  if (has_rate) {
    user.arrival_rate_pps = require_number(j, "arrival_rate_pps", where);
    if (!(*user.arrival_rate_pps >= 0.0))
      throw ConfigError(where + ": arrival_rate_pps must be >= 0");
  } else {
    user.source_rate_fraction = require_number(j, "source_rate_fraction", where);
    if (!(*user.source_rate_fraction >= 0.0))
      throw ConfigError(where + ": source_rate_fraction must be >= 0");
  }
  return user;
}

}  // namespace

CodingGainModel ScenarioConfig::default_coding_gains() {
  CodingGainModel model;
  model.gains_db = {{2, 3.0}, {4, 3.6}, {6, 3.6}, {8, 3.6}, {10, 3.6}};
  model.info =
      "placeholder constant-gain TCM table (8-state rate-2/3 style); override "
      "for quantitative coded results";
  return model;
}

ScenarioConfig ScenarioConfig::from_json_text(std::string_view text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw ConfigError(std::string("invalid JSON: ") + e.what());
  }
  if (!j.is_object()) throw ConfigError("config must be a JSON object");
  reject_unknown_keys(j,
                      {"version", "bandwidth_hz", "noise_w", "packet_bits",
                       "b_max", "coding", "policy", "users"},
                      "config");
  if (!j.contains("version"))
    throw ConfigError("config: missing required field 'version'");
  if (!j.at("version").is_number_integer() || j.at("version").get<int>() != 1)
    throw ConfigError("config: unsupported schema version (expected 1)");

  ScenarioConfig config;
  config.bandwidth_hz = optional_number(j, "bandwidth_hz", 1.0, "config");
  if (!(config.bandwidth_hz > 0.0))
    throw ConfigError("config: bandwidth_hz must be > 0");
  config.noise_w = optional_number(j, "noise_w", 1.0, "config");
  if (!(config.noise_w > 0.0)) throw ConfigError("config: noise_w must be > 0");
  config.packet_bits =
      as_int(optional_number(j, "packet_bits", 100.0, "config"), "packet_bits",
             "config");
  if (config.packet_bits < 1)
    throw ConfigError("config: packet_bits must be >= 1");
  config.b_max =
      as_int(optional_number(j, "b_max", 10.0, "config"), "b_max", "config");
  if (config.b_max < 2 || config.b_max % 2 != 0)
    throw ConfigError("config: b_max must be an even integer >= 2");

  if (j.contains("policy")) {
    const auto& p = j.at("policy");
    if (!p.is_string()) throw ConfigError("config: policy must be a string");
    const std::string name = p.get<std::string>();
    if (name == "pareto")
      config.policy = RatePolicy::ParetoDominant;
    else if (name == "maxrate")
      config.policy = RatePolicy::MaxRate;
    else
      throw ConfigError("config: policy must be 'pareto' or 'maxrate'");
  }

  if (j.contains("coding")) {
    const auto& c = j.at("coding");
    if (!c.is_object()) throw ConfigError("config: coding must be an object");
    reject_unknown_keys(c, {"enabled", "gains_db"}, "coding");
    if (c.contains("enabled")) {
      if (!c.at("enabled").is_boolean())
        throw ConfigError("coding: enabled must be a boolean");
      config.coding_enabled = c.at("enabled").get<bool>();
    }
    if (c.contains("gains_db")) {
      if (!c.at("gains_db").is_object())
        throw ConfigError("coding: gains_db must map b to a gain in dB");
      CodingGainModel model;
      model.info = "user-supplied constant-gain table";
      for (const auto& item : c.at("gains_db").items()) {
        int b = 0;
        try {
          std::size_t used = 0;
          b = std::stoi(item.key(), &used);
          if (used != item.key().size()) throw std::invalid_argument(item.key());
        } catch (const std::exception&) {
          throw ConfigError("coding: gains_db key '" + item.key() +
                            "' is not an integer constellation size");
        }
        if (b < 2 || b % 2 != 0)
          throw ConfigError("coding: gains_db key '" + item.key() +
                            "' must be an even integer >= 2");
        if (!item.value().is_number())
          throw ConfigError("coding: gain for b=" + item.key() +
                            " must be a number (dB)");
        const double gain = item.value().get<double>();
        if (!(gain >= 0.0))
          throw ConfigError("coding: gain for b=" + item.key() +
                            " must be >= 0 dB");
        model.gains_db[b] = gain;
      }
      config.coding_gains = std::move(model);
    }
  }
  if (config.coding_enabled) {
    for (int b = 2; b <= config.b_max; b += 2) {
      if (!config.coding_gains.gains_db.count(b))
        throw ConfigError("coding enabled but gains_db has no entry for b=" +
                          std::to_string(b));
    }
  }

  if (!j.contains("users") || !j.at("users").is_array() || j.at("users").empty())
    throw ConfigError("config: users must be a non-empty array");
  std::size_t index = 0;
  for (const auto& u : j.at("users")) config.users.push_back(parse_user(u, index++));
  return config;
}

ScenarioConfig ScenarioConfig::from_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file: " + path);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return from_json_text(buffer.str());
}

double ScenarioConfig::user_arrival_pps(const UserConfig& user) const {
  if (user.arrival_rate_pps) return *user.arrival_rate_pps;
  return *user.source_rate_fraction * bandwidth_hz / packet_bits;
}

TrafficQos ScenarioConfig::user_traffic(std::size_t i) const {
  const UserConfig& user = users.at(i);
  return TrafficQos{user_arrival_pps(user), user.delay_bound_s};
}

UserProfile ScenarioConfig::user_profile(std::size_t i) const {
  UserProfile profile;
  profile.gain = users.at(i).gain;
  profile.traffic = user_traffic(i);
  profile.packet_bits = packet_bits;
  profile.b_max = b_max;
  return profile;
}

std::optional<CodingGainModel> ScenarioConfig::coding() const {
  if (!coding_enabled) return std::nullopt;
  return coding_gains;
}

NetworkEnv ScenarioConfig::to_env() const {
  NetworkEnv env;
  env.bandwidth_hz = bandwidth_hz;
  env.noise_w = noise_w;
  env.coding = coding();
  for (std::size_t i = 0; i < users.size(); ++i)
    env.users.push_back(user_profile(i));
  return env;
}

}  // namespace eemod
