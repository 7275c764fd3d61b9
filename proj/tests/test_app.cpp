#include <doctest.h>

#include "biquad/app.hpp"
#include "helpers.hpp"

using namespace bq;

TEST_CASE("run config validation") {
  RunConfig d = RunConfig::from_json(nlohmann::json::object());
  CHECK(d.curve.q() == 5);
  CHECK(d.tolerance == 1e-9);
  CHECK(RunConfig::from_json(d.to_json()).to_json() == d.to_json());
  CHECK_THROWS_AS(RunConfig::from_json({{"colour", 1}}), ConfigError);
  CHECK_THROWS_AS(RunConfig::from_json({{"curve", {{"q", 5}, {"lambda", 3}, {"extra", 1}}}}), ConfigError);
  CHECK_THROWS_AS(RunConfig::from_json({{"tolerance", -1}}), ConfigError);
  CHECK_THROWS_AS(RunConfig::from_json({{"tolerance", "small"}}), ConfigError);
  CHECK_THROWS_AS(RunConfig::from_json({{"reps_max_d", 5}}), ConfigError);
  CHECK_THROWS_AS(RunConfig::from_json({{"divisors", nlohmann::json::array()}}), ConfigError);
  CHECK_THROWS_AS(RunConfig::from_json({{"spectral", {{"gap_bound", 0}}}}), ConfigError);
  CHECK_THROWS_AS(RunConfig::from_json({{"seed", -3}}), ConfigError);
  CHECK_THROWS_AS(RunConfig::from_json(nlohmann::json::array()), ConfigError);
}

TEST_CASE("divisor syntax") {
  Curve C(bqtest::config(5, 3));
  ClosedPoint P1 = two_torsion(C, 1), P2 = two_torsion(C, 2);
  CHECK(parse_divisor(C, "2*(P1)") == Divisor::point(P1, 2));
  CHECK(parse_divisor(C, "(P1)+(P2)") == Divisor::point(P1) + Divisor::point(P2));
  CHECK(parse_divisor(C, " (P1) - (O) ") == Divisor::point(P1) - Divisor::point(ClosedPoint::origin()));
  auto deg2 = closed_points_of_degree(C, 2);
  CHECK(parse_divisor(C, "3*(2,1)") == Divisor::point(deg2[1], 3));
  CHECK(parse_divisor(C, "(1,0) - (1,0)").is_zero());
  for (auto& x : closed_points_of_degree(C, 1)) {
    std::string s = "(1," + std::to_string(point_index(C, x)) + ")";
    CHECK(parse_divisor(C, s) == Divisor::point(x));
  }
  for (const char* bad : {"", "P1", "(Q)", "(P1)(P2)", "2*(9,0)", "(1,99)", "(P1) +", "2 (P1)"})
    CHECK_THROWS_AS(parse_divisor(C, bad), ConfigError);
}

TEST_CASE("commands on q = 3") {
  RunConfig cfg = RunConfig::from_json({{"curve", {{"q", 3}, {"lambda", 2}, {"e1", 0}, {"e2", 1}}}, {"divisors", {"2*(P1)", "(2,0)"}}});
  for (auto& name : command_names()) {
    if (name == "reps" || name == "census-invariants") continue;
    CommandResult r = run_command(name, cfg);
    CHECK_MESSAGE(r.passed(), name);
    CHECK(r.artifact["command"] == name);
    CHECK(r.artifact["passed"] == true);
    // artifacts are deterministic
    CHECK(run_command(name, cfg).artifact == r.artifact);
  }
  CommandResult o = cmd_orbital(cfg);
  for (auto& t : o.artifact["tables"])
    for (auto& row : t["per_xi"]) CHECK(row["equal"] == true);
  CHECK_THROWS_AS(run_command("nope", cfg), ConfigError);
  RunConfig neg = cfg;
  neg.divisors = {"(P1) - (P2)"};
  CHECK_THROWS_AS(cmd_orbital(neg), ConfigError);
}

TEST_CASE("optimal artifact") {
  RunConfig cfg = RunConfig::from_json({{"curve", {{"q", 3}, {"lambda", 2}, {"e1", 0}, {"e2", 1}}}});
  auto r = cmd_optimal(cfg);
  CHECK(r.artifact["is_optimal"] == true);
  CHECK(r.artifact["invariant"] == "1/2");
  CHECK(r.artifact["nonconstant_pairs"]["tested"] == 20);
  CHECK(r.artifact["nonconstant_pairs"]["failing"] == 20);
}

TEST_CASE("failing checks are reported") {
  // a tolerance of zero cannot be met by the floating eigenform computation at q = 7
  RunConfig cfg = RunConfig::from_json({{"curve", {{"q", 7}, {"lambda", 3}, {"e1", 0}, {"e2", 1}}}, {"tolerance", 1e-300}});
  auto r = cmd_verify_jpi(cfg);
  bool any_noise = false;
  for (auto& e : r.artifact["elements"]) any_noise = any_noise || e["residual"].get<double>() > 1e-300;
  CHECK(r.passed() == !any_noise);
  CHECK(r.artifact["passed"] == r.passed());
}
