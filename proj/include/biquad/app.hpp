#pragma once

#include <json.hpp>

#include <string>
#include <vector>

#include "biquad/orbital.hpp"
#include "biquad/spectral.hpp"

namespace bq {

// Options shared by all commands; see docs/run_config.schema.json.
struct RunConfig {
  CurveConfig curve;
  SpectralConfig spectral;
  std::vector<std::string> divisors{"(P1)"};
  int span_degree = 2;  // Eisenstein span: f_D with deg D <= span_degree
  std::vector<int> r_values{0, 1, 2, 3, 4};
  std::vector<uint32_t> census_fields{3, 5, 7};
  int reps_max_d = 3;
  int random_trials = 20;
  double tolerance = 1e-9;
  uint64_t seed = 1;

  // Rejects unknown keys and ill-typed values with ConfigError.
  static RunConfig from_json(const nlohmann::json& j);
  nlohmann::json to_json() const;
};

// Divisor syntax: sum of terms [k*](name), names O, P1, P2, P3 (the
// 2-torsion points) or d,i (the i-th closed point of degree d, from 0).
// Example: "2*(P1) + (2,3) - (O)".
Divisor parse_divisor(const Curve& C, const std::string& s);

struct CommandResult {
  nlohmann::json artifact;
  std::vector<std::string> failures;
  bool passed() const { return failures.empty(); }
};

const std::vector<std::string>& command_names();
// Runs a command; the artifact records the config, the checks and "passed".
CommandResult run_command(const std::string& name, const RunConfig& cfg);

CommandResult cmd_tower_check(const RunConfig& cfg);
CommandResult cmd_census_invariants(const RunConfig& cfg);
CommandResult cmd_orbital(const RunConfig& cfg);
CommandResult cmd_spectral(const RunConfig& cfg);
CommandResult cmd_verify_theorem_d(const RunConfig& cfg);
CommandResult cmd_verify_jpi(const RunConfig& cfg);
CommandResult cmd_reps(const RunConfig& cfg);
CommandResult cmd_optimal(const RunConfig& cfg);

// Floating values rounded to 12 significant digits for stable artifacts.
nlohmann::json stable_number(long double v);
nlohmann::json hecke_element_json(const Curve& C, const HeckeElement& f);

// Exact checks of T_x for the degree-1 points x on the basis forms with gap
// <= gap_bound - 1, where truncation does not reach the values compared.
struct HygieneReport {
  bool commute = true;
  bool self_adjoint = true;
  int points = 0;
  int forms = 0;
};
HygieneReport hecke_hygiene(Spectral& sp);

// Scale of the periods identity: max(1, |P1 P2|, |P0(0) P3|).
long double theorem_d_scale(const EigenformPackage& pkg);

}  // namespace bq
