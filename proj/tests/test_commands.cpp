#include <doctest.h>

#include <json.hpp>

#include <cmath>
#include <sstream>
#include <string>
#include <vector>

#include "eemod/commands.hpp"
#include "eemod/errors.hpp"
#include "eemod/numerics.hpp"

using namespace eemod;

namespace {

std::vector<std::string> split(const std::string& line, char sep = ',') {
  std::vector<std::string> fields;
  std::string field;
  std::istringstream in(line);
  while (std::getline(in, field, sep)) fields.push_back(field);
  return fields;
}

std::vector<std::vector<std::string>> parse_csv(const std::string& text) {
  std::vector<std::vector<std::string>> rows;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) rows.push_back(split(line));
  return rows;
}

const char* kLooseSingleUser = R"({
  "version": 1,
  "bandwidth_hz": 1.0,
  "noise_w": 1e-13,
  "packet_bits": 100,
  "users": [{"gain": 1.0, "source_rate_fraction": 0.1, "delay_bound_s": 1000.0}]
})";

}  // namespace

TEST_CASE("make_grid") {
  const auto lin = make_grid({0.0, 40.0, 5, false});
  CHECK(lin.size() == 5);
  CHECK(lin.front() == 0.0);
  CHECK(lin.back() == 40.0);
  CHECK(lin[2] == doctest::Approx(20.0));
  const auto log = make_grid({1e2, 1e6, 5, true});
  CHECK(log.front() == 1e2);
  CHECK(log.back() == 1e6);
  CHECK(log[1] == doctest::Approx(1e3).epsilon(1e-12));
  CHECK_THROWS_AS(make_grid({1.0, 1.0, 5, false}), DomainError);
  CHECK_THROWS_AS(make_grid({0.0, 1.0, 1, false}), DomainError);
  CHECK_THROWS_AS(make_grid({0.0, 1.0, 5, true}), DomainError);
}

TEST_CASE("config parsing happy path") {
  const auto config = ScenarioConfig::from_json_text(R"({
    "version": 1,
    "bandwidth_hz": 1e6,
    "noise_w": 1e-13,
    "packet_bits": 100,
    "b_max": 8,
    "policy": "maxrate",
    "coding": {"enabled": true, "gains_db": {"2": 3.0, "4": 3.6, "6": 3.6, "8": 3.6}},
    "users": [
      {"gain": 1e-4, "arrival_rate_pps": 500.0, "delay_bound_s": 0.01},
      {"gain": 2e-4, "source_rate_fraction": 0.1, "delay_bound_s": 0.02}
    ]
  })");
  CHECK(config.bandwidth_hz == 1e6);
  CHECK(config.b_max == 8);
  CHECK(config.policy == RatePolicy::MaxRate);
  CHECK(config.coding_enabled);
  CHECK(config.user_arrival_pps(config.users[0]) == 500.0);
  // fraction resolves against B and L: 0.1 * 1e6 / 100
  CHECK(config.user_arrival_pps(config.users[1]) == doctest::Approx(1000.0));
  const NetworkEnv env = config.to_env();
  CHECK(env.users.size() == 2);
  CHECK(env.coding.has_value());
  CHECK(env.coding->gain_db(4) == 3.6);
}

TEST_CASE("config parsing rejects malformed input") {
  CHECK_THROWS_AS(ScenarioConfig::from_json_text("not json"), ConfigError);
  CHECK_THROWS_AS(ScenarioConfig::from_json_text("{}"), ConfigError);
  CHECK_THROWS_AS(ScenarioConfig::from_json_text(
                      R"({"version": 2, "users": [{"arrival_rate_pps": 1, "delay_bound_s": 1}]})"),
                  ConfigError);
  // unknown field
  CHECK_THROWS_AS(ScenarioConfig::from_json_text(
                      R"({"version": 1, "bandwith_hz": 1,
                          "users": [{"arrival_rate_pps": 1, "delay_bound_s": 1}]})"),
                  ConfigError);
  // both rate descriptors
  CHECK_THROWS_AS(ScenarioConfig::from_json_text(
                      R"({"version": 1, "users": [{"arrival_rate_pps": 1,
                          "source_rate_fraction": 0.1, "delay_bound_s": 1}]})"),
                  ConfigError);
  // neither rate descriptor
  CHECK_THROWS_AS(ScenarioConfig::from_json_text(
                      R"({"version": 1, "users": [{"delay_bound_s": 1}]})"),
                  ConfigError);
  // bad policy
  CHECK_THROWS_AS(ScenarioConfig::from_json_text(
                      R"({"version": 1, "policy": "fastest",
                          "users": [{"arrival_rate_pps": 1, "delay_bound_s": 1}]})"),
                  ConfigError);
  // coding enabled but missing an entry for b <= b_max
  CHECK_THROWS_AS(ScenarioConfig::from_json_text(
                      R"({"version": 1, "b_max": 4,
                          "coding": {"enabled": true, "gains_db": {"2": 3.0}},
                          "users": [{"arrival_rate_pps": 1, "delay_bound_s": 1}]})"),
                  ConfigError);
  CHECK_THROWS_AS(ScenarioConfig::from_file("/nonexistent/path.json"), ConfigError);
}

TEST_CASE("cmd_table1 reproduces the reference table") {
  const std::string csv = cmd_table1(100, {2, 4, 6, 8, 10});
  const auto rows = parse_csv(csv);
  REQUIRE(rows.size() == 6);
  CHECK(rows[0] == split("b,alpha,beta,gamma_star_db,f_at_star,b_over_gamma_db,"
                         "coefficient"));
  const struct {
    int b;
    double alpha, beta, gamma_db, f, b_over_gamma_db, coeff;
  } expected[] = {
      {2, 1.0, 1.0, 9.1, 0.801, -6.1, 0.1978},
      {4, 1.5, 0.2, 15.7, 0.785, -9.7, 0.0846},
      {6, 1.75, 0.0476, 21.6, 0.771, -13.8, 0.0322},
      {8, 1.875, 0.0118, 27.3, 0.757, -18.3, 0.0112},
      {10, 1.9375, 0.0029, 33.0, 0.743, -23.0, 0.0037},
  };
  for (int i = 0; i < 5; ++i) {
    const auto& row = rows[static_cast<std::size_t>(i + 1)];
    REQUIRE(row.size() == 7);
    CHECK(std::stoi(row[0]) == expected[i].b);
    CHECK(std::stod(row[1]) == doctest::Approx(expected[i].alpha));
    CHECK(std::stod(row[2]) == doctest::Approx(expected[i].beta).epsilon(0.02));
    CHECK(std::abs(std::stod(row[3]) - expected[i].gamma_db) < 0.1);
    CHECK(std::abs(std::stod(row[4]) - expected[i].f) < 0.005);
    CHECK(std::abs(std::stod(row[5]) - expected[i].b_over_gamma_db) < 0.1);
    CHECK(std::abs(std::stod(row[6]) - expected[i].coeff) < 5e-4);
    // column self-consistency up to the 6-digit print rounding
    CHECK(std::abs(std::stod(row[5]) -
                   (10.0 * std::log10(expected[i].b) - std::stod(row[3]))) <
          2e-4);
  }
  CHECK(cmd_table1(100, {2, 4, 6, 8, 10}) == csv);  // byte-stable
}

TEST_CASE("cmd_sir_sweep peaks where the optimizer says") {
  std::vector<ModulationScheme> schemes;
  for (int b = 2; b <= 10; b += 2) schemes.push_back(ModulationScheme::uncoded(b, 100));
  const GridSpec grid{0.0, 40.0, 400, false};
  const std::string csv = cmd_sir_sweep(schemes, grid);
  const auto rows = parse_csv(csv);
  REQUIRE(rows.size() == 1 + 400 * 5);
  CHECK(rows[0] == split("sir_db,b,utility_norm"));

  // per-b argmax sits at the grid point nearest the optimum
  for (int b = 2; b <= 10; b += 2) {
    double best = -1.0, best_db = 0.0;
    for (std::size_t r = 1; r < rows.size(); ++r) {
      if (std::stoi(rows[r][1]) != b) continue;
      const double v = std::stod(rows[r][2]);
      if (v > best) {
        best = v;
        best_db = std::stod(rows[r][0]);
      }
    }
    const double star_db = optimal_sir(ModulationScheme::uncoded(b, 100)).db();
    CHECK(std::abs(best_db - star_db) <= 0.5 * 40.0 / 399.0 + 1e-9);
    if (b == 2) CHECK(std::abs(best - 0.1978) < 0.001);
  }

  // utility collapses at both ends of the grid
  CHECK(std::stod(rows[1][2]) < 0.02);                // 0 dB, b=2
  CHECK(std::stod(rows[rows.size() - 5][2]) < 1e-3);  // 40 dB, b=2
  CHECK(cmd_sir_sweep(schemes, grid) == csv);
}

TEST_CASE("cmd_delay_sweep staircase matches the model boundaries") {
  const auto config = ScenarioConfig::from_json_text(kLooseSingleUser);
  const GridSpec grid{5.0, 1e4, 240, true};
  const std::string csv = cmd_delay_sweep(config, grid);
  const auto rows = parse_csv(csv);
  REQUIRE(rows.size() == 241);
  CHECK(rows[0] == split("delay_norm,coded,b,rs_over_b,gamma_db,power_norm,"
                         "throughput_norm,utility_norm,status"));

  struct Row {
    double delay_norm = 0.0;
    bool ok = false;
    int b = 0;
    double rs_over_b = 0.0, gamma_db = 0.0, power = 0.0, util = 0.0;
  };
  std::vector<Row> sweep;
  for (std::size_t r = 1; r < rows.size(); ++r) {
    REQUIRE(rows[r].size() == 9);
    Row row;
    row.delay_norm = std::stod(rows[r][0]);
    row.ok = rows[r][8] == "ok";
    if (row.ok) {
      row.b = std::stoi(rows[r][2]);
      row.rs_over_b = std::stod(rows[r][3]);
      row.gamma_db = std::stod(rows[r][4]);
      row.power = std::stod(rows[r][5]);
      row.util = std::stod(rows[r][7]);
    } else {
      CHECK(rows[r][8] == "infeasible");
    }
    sweep.push_back(row);
  }

  // very tight bounds are marked infeasible, not dropped
  CHECK_FALSE(sweep.front().ok);
  CHECK(sweep.back().ok);

  // loose region: QPSK at the tabulated optimum
  for (const Row& row : sweep)
    if (row.ok && row.delay_norm > 1e3) {
      CHECK(row.b == 2);
      CHECK(std::abs(row.gamma_db - 9.1) < 0.1);
    }

  // constellation is non-increasing in the delay bound
  for (std::size_t i = 0; i + 1 < sweep.size(); ++i)
    if (sweep[i].ok && sweep[i + 1].ok) CHECK(sweep[i].b >= sweep[i + 1].b);

  // the 2->4 jump happens at the feasibility wall eta_2(B) = sup...
  const auto scheme2 = ModulationScheme::uncoded(2, 100);
  const double lambda = config.user_arrival_pps(config.users[0]);
  const auto eta_gap = [&](double d) {
    return required_efficiency(scheme2, 1.0, TrafficQos{lambda, d}) -
           scheme2.efficiency_sup();
  };
  const auto wall_bracket = numerics::expand_bracket(eta_gap, 100.0);
  const double wall =
      numerics::find_root(eta_gap, wall_bracket.first, wall_bracket.second);
  std::size_t jump = 0;  // first b=2 row on the ascending grid
  for (std::size_t i = 1; i < sweep.size(); ++i)
    if (sweep[i].ok && sweep[i].b == 2 && sweep[i - 1].ok &&
        sweep[i - 1].b == 4) {
      jump = i;
      break;
    }
  REQUIRE(jump > 0);
  CHECK(sweep[jump - 1].delay_norm < wall);
  CHECK(sweep[jump].delay_norm >= wall);

  // ...and the SIR leaves the optimum plateau where the critical rate
  // first exceeds the bandwidth
  const auto omega_gap = [&](double d) {
    return omega_star_bps(scheme2, TrafficQos{lambda, d}) / 2.0 - 1.0;
  };
  const auto crossing_bracket = numerics::expand_bracket(omega_gap, 100.0);
  const double crossing = numerics::find_root(omega_gap, crossing_bracket.first,
                                              crossing_bracket.second);
  std::size_t saturated = 0;  // last b=2 row running at full rate
  for (std::size_t i = 0; i + 1 < sweep.size(); ++i)
    if (sweep[i].ok && sweep[i].b == 2 && sweep[i].rs_over_b >= 1.0 - 1e-12 &&
        sweep[i + 1].rs_over_b < 1.0 - 1e-12) {
      saturated = i;
      break;
    }
  REQUIRE(saturated > 0);
  CHECK(sweep[saturated].delay_norm <= crossing);
  CHECK(sweep[saturated + 1].delay_norm > crossing);

  // utility is non-increasing as the bound tightens inside each b-plateau
  for (std::size_t i = 0; i + 1 < sweep.size(); ++i)
    if (sweep[i].ok && sweep[i + 1].ok && sweep[i].b == sweep[i + 1].b)
      CHECK(sweep[i].util <= sweep[i + 1].util * (1.0 + 1e-9));

  CHECK(cmd_delay_sweep(config, grid) == csv);
}

TEST_CASE("cmd_delay_sweep coded rows beat uncoded rows") {
  auto config = ScenarioConfig::from_json_text(kLooseSingleUser);
  config.coding_enabled = true;
  const GridSpec grid{20.0, 2e3, 60, true};
  const auto rows = parse_csv(cmd_delay_sweep(config, grid));
  int compared = 0;
  for (std::size_t r = 1; r + 1 < rows.size(); r += 2) {
    const auto& uncoded = rows[r];
    const auto& coded = rows[r + 1];
    REQUIRE(uncoded[1] == "0");
    REQUIRE(coded[1] == "1");
    CHECK(uncoded[0] == coded[0]);
    if (uncoded[8] != "ok" || coded[8] != "ok") continue;
    if (uncoded[2] != coded[2]) continue;  // compare only at equal b
    CHECK(std::stod(coded[5]) < std::stod(uncoded[5]));  // power_norm
    CHECK(std::stod(coded[7]) > std::stod(uncoded[7]));  // utility_norm
    ++compared;
  }
  CHECK(compared > 30);
}

TEST_CASE("cmd_delay_sweep rejects multi-user configs") {
  auto config = ScenarioConfig::from_json_text(kLooseSingleUser);
  config.users.push_back(config.users[0]);
  CHECK_THROWS_AS(cmd_delay_sweep(config, {1e2, 1e4, 10, true}), ConfigError);
}

TEST_CASE("cmd_nash symmetric users get identical rows") {
  const auto config = ScenarioConfig::from_json_text(R"({
    "version": 1,
    "bandwidth_hz": 1e6,
    "noise_w": 1e-13,
    "users": [
      {"gain": 1e-4, "source_rate_fraction": 0.05, "delay_bound_s": 0.1},
      {"gain": 1e-4, "source_rate_fraction": 0.05, "delay_bound_s": 0.1},
      {"gain": 1e-4, "source_rate_fraction": 0.05, "delay_bound_s": 0.1}
    ]
  })");
  const CommandResult result = cmd_nash(config);
  CHECK(result.exit_code == kExitOk);
  const auto report = nlohmann::json::parse(result.output);
  CHECK(report.at("converged").get<bool>());
  CHECK(report.at("sum_size").get<double>() < 1.0);
  const auto& users = report.at("users");
  REQUIRE(users.size() == 3);
  for (const auto& u : users) {
    CHECK(u.at("b").get<int>() == users[0].at("b").get<int>());
    CHECK(u.at("gamma_db").get<double>() ==
          doctest::Approx(users[0].at("gamma_db").get<double>()).epsilon(1e-12));
    CHECK(u.at("power_w").get<double>() ==
          doctest::Approx(users[0].at("power_w").get<double>()).epsilon(1e-10));
    CHECK(u.at("utility_bits_per_joule").get<double>() > 0.0);
  }
  const auto& diag = report.at("diagnostics");
  CHECK(diag.at("max_rel_power_mismatch").get<double>() <= 1e-8);
  REQUIRE(diag.at("power_iterated_w").size() == 3);
  for (std::size_t k = 0; k < 3; ++k) {
    const double it = diag.at("power_iterated_w")[k].get<double>();
    const double cf = diag.at("power_closed_form_w")[k].get<double>();
    CHECK(it == doctest::Approx(cf).epsilon(1e-8));
  }
  CHECK(cmd_nash(config).output == result.output);  // byte-stable
}

TEST_CASE("cmd_nash single user agrees with the delay sweep") {
  const auto config = ScenarioConfig::from_json_text(R"({
    "version": 1,
    "bandwidth_hz": 1e6,
    "noise_w": 1e-13,
    "users": [{"gain": 1e-4, "source_rate_fraction": 0.1, "delay_bound_s": 0.01}]
  })");
  const auto report = nlohmann::json::parse(cmd_nash(config).output);
  const auto& user = report.at("users")[0];

  // same point recomputed through the sweep path at D*B = 1e4
  ScenarioConfig sweep_config = config;
  sweep_config.bandwidth_hz = 1.0;  // sweep output is normalized anyway
  const auto rows =
      parse_csv(cmd_delay_sweep(sweep_config, {1e4 - 1.0, 1e4 + 1.0, 3, false}));
  const auto& mid = rows[2];  // the exact D*B = 1e4 grid point
  CHECK(std::stod(mid[0]) == doctest::Approx(1e4));
  CHECK(std::stoi(mid[2]) == user.at("b").get<int>());
  CHECK(std::stod(mid[4]) ==
        doctest::Approx(user.at("gamma_db").get<double>()).epsilon(1e-9));
  CHECK(std::stod(mid[3]) ==
        doctest::Approx(user.at("rs_hz").get<double>() / 1e6).epsilon(1e-9));
  // normalized power p * h / sigma^2 equals gamma * Rs / B
  const double p_norm = user.at("power_w").get<double>() * 1e-4 / 1e-13;
  CHECK(p_norm == doctest::Approx(std::stod(mid[5])).epsilon(1e-8));
}

TEST_CASE("cmd_nash maps infeasibility to exit codes") {
  // delay-infeasible user -> exit 3 with a per-user error entry
  const auto infeasible = ScenarioConfig::from_json_text(R"({
    "version": 1,
    "bandwidth_hz": 1.0,
    "noise_w": 1e-13,
    "users": [
      {"gain": 1.0, "source_rate_fraction": 0.1, "delay_bound_s": 1000.0},
      {"gain": 1.0, "source_rate_fraction": 0.1, "delay_bound_s": 5.0}
    ]
  })");
  const CommandResult bad_delay = cmd_nash(infeasible);
  CHECK(bad_delay.exit_code == kExitDelayInfeasible);
  const auto report = nlohmann::json::parse(bad_delay.output);
  CHECK_FALSE(report.at("converged").get<bool>());
  CHECK_FALSE(report.at("users")[0].contains("error"));
  CHECK(report.at("users")[1].contains("error"));

  // two saturated users -> system-infeasible -> exit 4
  const auto saturated = ScenarioConfig::from_json_text(R"({
    "version": 1,
    "bandwidth_hz": 1.0,
    "noise_w": 1e-13,
    "users": [
      {"gain": 1.0, "source_rate_fraction": 0.1, "delay_bound_s": 55.0},
      {"gain": 1.0, "source_rate_fraction": 0.1, "delay_bound_s": 55.0}
    ]
  })");
  const CommandResult bad_system = cmd_nash(saturated);
  CHECK(bad_system.exit_code == kExitSystemInfeasible);
  CHECK(nlohmann::json::parse(bad_system.output).contains("error"));
}

TEST_CASE("cmd_validate_mg1 reports a sane z-score and is deterministic") {
  const auto config = ScenarioConfig::from_json_text(R"({
    "version": 1,
    "bandwidth_hz": 1e6,
    "noise_w": 1e-13,
    "users": [{"gain": 1e-4, "arrival_rate_pps": 2000.0, "delay_bound_s": 5e-4}]
  })");
  const CommandResult result = cmd_validate_mg1(config, 200000, 1);
  CHECK(result.exit_code == kExitOk);
  const auto report = nlohmann::json::parse(result.output);
  CHECK(std::abs(report.at("z").get<double>()) <= 4.0);
  CHECK(report.at("analytic_delay_s").get<double>() > 0.0);
  CHECK(report.at("operating_point").at("b").get<int>() == 2);
  CHECK(cmd_validate_mg1(config, 200000, 1).output == result.output);
  CHECK(cmd_validate_mg1(config, 200000, 2).output != result.output);
}

TEST_CASE("cmd_validate_mg1 near the loss-free limit") {
  // lambda tiny and a bound just above one transmission time: the floor sits
  // deep in the saturation tail, so virtually every transmission succeeds and
  // each sojourn is one packet time
  const auto config = ScenarioConfig::from_json_text(R"({
    "version": 1,
    "bandwidth_hz": 1e6,
    "noise_w": 1e-13,
    "users": [{"gain": 1e-4, "arrival_rate_pps": 1e-6,
               "delay_bound_s": 5.000000001e-5}]
  })");
  const CommandResult result = cmd_validate_mg1(config, 10000, 3);
  CHECK(result.exit_code == kExitOk);
  const auto report = nlohmann::json::parse(result.output);
  const double tau = report.at("operating_point").at("tau_s").get<double>();
  CHECK(report.at("operating_point").at("efficiency").get<double>() >
        1.0 - 1e-8);
  CHECK(report.at("simulated_mean_s").get<double>() ==
        doctest::Approx(tau).epsilon(1e-6));
  CHECK(report.at("z").get<double>() == 0.0);
}

TEST_CASE("format_sig is plain C-locale text") {
  CHECK(format_sig(0.19784, 6) == "0.19784");
  CHECK(format_sig(1.0) == "1");
  CHECK(format_sig(1e6) == "1000000");
  CHECK(format_sig(-6.06381, 6) == "-6.06381");
}
