#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <map>

#include "biquad/app.hpp"

namespace {

enum Exit { kPassed = 0, kCheckFailed = 1, kConfigError = 2, kComputationFailed = 3 };

nlohmann::json load_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw bq::ConfigError("cannot open config '" + path + "'");
  try {
    return nlohmann::json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw bq::ConfigError("config '" + path + "' is not valid JSON: " + e.what());
  }
}

const std::map<std::string, std::string> kAbout = {
    {"tower-check", "randomized checks of the field tower, norms and Frobenius"},
    {"census-invariants", "quaternion pair census and invariant bijectivity"},
    {"orbital", "orbital integrals for each divisor, both routes"},
    {"spectral", "bundle census, Hecke matrices, cusp eigenforms and periods"},
    {"verify-theorem-d", "periods identity P1 P2 = P0(0) P3 per eigenform"},
    {"verify-jpi", "orbital side against the spectral side on the Eisenstein span"},
    {"reps", "signed permutation representation, summands and induced characters"},
    {"optimal", "optimal embedding pair and non-constant pairs"},
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Arithmetic checks for a biquadratic tower over an elliptic function field"};
  app.require_subcommand(1);
  std::string config_path, out_path;
  std::optional<double> tolerance;
  std::optional<int> degree_bound;
  std::optional<uint64_t> seed;
  std::vector<std::string> divisors;
  std::optional<int> reps_d;
  for (auto& name : bq::command_names()) {
    auto* sub = app.add_subcommand(name, kAbout.at(name));
    sub->add_option("--config", config_path, "JSON run configuration")->check(CLI::ExistingFile);
    sub->add_option("--out", out_path, "write the JSON artifact here instead of stdout");
    sub->add_option("--tolerance", tolerance, "numeric tolerance for floating checks");
    sub->add_option("--degree-bound", degree_bound, "largest closed-point degree");
    sub->add_option("--seed", seed, "seed for randomized checks");
    if (name == "orbital") sub->add_option("--D", divisors, "divisor, e.g. \"2*(P1) + (2,0)\"");
    if (name == "reps") sub->add_option("--d", reps_d, "largest d");
  }
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? kPassed : kConfigError;
  }
  const std::string name = app.get_subcommands().front()->get_name();

  try {
    nlohmann::json j = config_path.empty() ? nlohmann::json::object() : load_json(config_path);
    if (degree_bound) {
      if (!j.contains("curve")) j["curve"] = bq::RunConfig::from_json(nlohmann::json::object()).to_json()["curve"];
      j["curve"]["degree_bound"] = *degree_bound;
    }
    if (tolerance) j["tolerance"] = *tolerance;
    if (seed) j["seed"] = *seed;
    if (!divisors.empty()) j["divisors"] = divisors;
    if (reps_d) j["reps_max_d"] = *reps_d;
    bq::RunConfig cfg = bq::RunConfig::from_json(j);

    bq::CommandResult r = bq::run_command(name, cfg);
    std::string text = r.artifact.dump(2) + "\n";
    if (out_path.empty()) {
      std::cout << text;
    } else {
      std::ofstream out(out_path);
      if (!out) throw bq::ConfigError("cannot write '" + out_path + "'");
      out << text;
    }
    for (auto& f : r.failures) std::cerr << name << ": FAILED " << f << "\n";
    return r.passed() ? kPassed : kCheckFailed;
  } catch (const bq::ConfigError& e) {
    std::cerr << name << ": configuration error: " << e.what() << "\n";
    return kConfigError;
  } catch (const std::exception& e) {
    std::cerr << name << ": computation failed: " << e.what() << "\n";
    return kComputationFailed;
  }
}
