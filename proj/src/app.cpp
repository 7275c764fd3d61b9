#include "biquad/app.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <random>
#include <regex>
#include <set>

#include "biquad/sym_reps.hpp"

namespace bq {

namespace {

using nlohmann::json;

template <class T>
T get_typed(const json& j, const char* key, T fallback, bool (json::*is)() const) {
  if (!j.contains(key)) return fallback;
  if (!(j.at(key).*is)()) throw ConfigError(std::string("config: '") + key + "' has the wrong type");
  return j.at(key).get<T>();
}

int get_int(const json& j, const char* key, int fallback, int lo, int hi) {
  int v = get_typed<int>(j, key, fallback, &json::is_number_integer);
  if (v < lo || v > hi)
    throw ConfigError(std::string("config: '") + key + "' must lie in [" + std::to_string(lo) + ", " + std::to_string(hi) + "]");
  return v;
}

template <class T>
std::vector<T> get_int_list(const json& j, const char* key, std::vector<T> fallback, int lo, int hi) {
  if (!j.contains(key)) return fallback;
  const json& a = j.at(key);
  if (!a.is_array() || a.empty()) throw ConfigError(std::string("config: '") + key + "' must be a nonempty array");
  std::vector<T> out;
  for (auto& v : a) {
    if (!v.is_number_integer() || v.get<int>() < lo || v.get<int>() > hi)
      throw ConfigError(std::string("config: entries of '") + key + "' must be integers in [" + std::to_string(lo) + ", " +
                        std::to_string(hi) + "]");
    out.push_back(static_cast<T>(v.get<int>()));
  }
  return out;
}

json base_artifact(const std::string& name, const RunConfig& cfg) {
  return {{"schema", "biquad/" + name + "/1"}, {"command", name}, {"config", cfg.to_json()}};
}

CommandResult finish(json a, std::vector<std::string> failures) {
  a["passed"] = failures.empty();
  a["failures"] = failures;
  return {std::move(a), std::move(failures)};
}

json point_json(const Curve& C, const ClosedPoint& x) { return place_json(C, CurveName::X, Place::of(x)); }

json real_laurent(const RealLaurent& p) {
  json j = json::object();
  for (auto& [n, v] : p) j[std::to_string(n)] = stable_number(v);
  return j;
}

long double at_one(const RealLaurent& p) {
  long double s = 0;
  for (auto& [n, v] : p) s += v;
  return s;
}

Poly random_poly(const GF* F, int deg, std::mt19937_64& rng) {
  std::uniform_int_distribution<uint32_t> d(0, F->size() - 1);
  std::vector<uint32_t> c(deg + 1);
  for (auto& v : c) v = d(rng);
  return Poly(F, c);
}

FElem random_felem(const Curve& C, std::mt19937_64& rng) {
  const GF* F = C.base_ptr().get();
  Poly den = random_poly(F, 1, rng);
  if (den.is_zero()) den = Poly::constant(F, 1);
  return FElem(&C, RatFn(random_poly(F, 2, rng), den), RatFn(random_poly(F, 1, rng)));
}

TowerElement random_tower(const Curve& C, Level l, std::mt19937_64& rng) {
  std::vector<FElem> c;
  for (int i = 0; i < level_dim(l); ++i) c.push_back(random_felem(C, rng));
  return TowerElement(l, c);
}

json check_json(const std::string& name, int trials, int bad) {
  return {{"name", name}, {"trials", trials}, {"failures", bad}, {"passed", bad == 0}};
}

int64_t binom(int n, int k) {
  int64_t r = 1;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

}  // namespace

RunConfig RunConfig::from_json(const json& j) {
  static const std::set<std::string> keys = {"curve", "spectral", "divisors", "span_degree", "r_values", "census_fields",
                                             "reps_max_d", "random_trials", "tolerance", "seed"};
  if (!j.is_object()) throw ConfigError("config: top level must be an object");
  for (auto& [k, v] : j.items())
    if (!keys.count(k)) throw ConfigError("config: unknown key '" + k + "'");
  RunConfig c;
  if (j.contains("curve")) {
    if (!j["curve"].is_object()) throw ConfigError("config: 'curve' must be an object");
    static const std::set<std::string> ck = {"q", "lambda", "e1", "e2", "degree_bound"};
    for (auto& [k, v] : j["curve"].items())
      if (!ck.count(k)) throw ConfigError("config: unknown curve key '" + k + "'");
    c.curve = CurveConfig::from_json(j["curve"]);
  } else {
    c.curve = CurveConfig::from_json(json{{"q", 5}, {"lambda", 3}, {"e1", 0}, {"e2", 1}});
  }
  if (j.contains("spectral")) {
    if (!j["spectral"].is_object()) throw ConfigError("config: 'spectral' must be an object");
    static const std::set<std::string> sk = {"gap_bound", "constant_depth", "hecke_degree"};
    for (auto& [k, v] : j["spectral"].items()) {
      if (!sk.count(k)) throw ConfigError("config: unknown spectral key '" + k + "'");
      if (!v.is_number_integer()) throw ConfigError("config: spectral '" + k + "' must be an integer");
    }
    c.spectral = SpectralConfig::from_json(j["spectral"]);
  }
  if (j.contains("divisors")) {
    const json& d = j["divisors"];
    if (!d.is_array() || d.empty()) throw ConfigError("config: 'divisors' must be a nonempty array of strings");
    c.divisors.clear();
    for (auto& s : d) {
      if (!s.is_string()) throw ConfigError("config: 'divisors' must be a nonempty array of strings");
      c.divisors.push_back(s.get<std::string>());
    }
  }
  c.span_degree = get_int(j, "span_degree", c.span_degree, 0, 3);
  c.r_values = get_int_list<int>(j, "r_values", c.r_values, 0, 12);
  c.census_fields = get_int_list<uint32_t>(j, "census_fields", c.census_fields, 3, 9);
  c.reps_max_d = get_int(j, "reps_max_d", c.reps_max_d, 1, 4);
  c.random_trials = get_int(j, "random_trials", c.random_trials, 1, 10000);
  if (j.contains("tolerance")) {
    if (!j["tolerance"].is_number() || j["tolerance"].get<double>() <= 0)
      throw ConfigError("config: 'tolerance' must be a positive number");
    c.tolerance = j["tolerance"].get<double>();
  }
  if (j.contains("seed")) {
    if (!j["seed"].is_number_unsigned()) throw ConfigError("config: 'seed' must be a nonnegative integer");
    c.seed = j["seed"].get<uint64_t>();
  }
  return c;
}

json RunConfig::to_json() const {
  return {{"curve", curve.to_json()},       {"spectral", spectral.to_json()},   {"divisors", divisors},
          {"span_degree", span_degree},     {"r_values", r_values},             {"census_fields", census_fields},
          {"reps_max_d", reps_max_d},       {"random_trials", random_trials},   {"tolerance", tolerance},
          {"seed", seed}};
}

Divisor parse_divisor(const Curve& C, const std::string& s) {
  static const std::regex term(R"(\s*([+-])?\s*(?:(\d+)\s*\*\s*)?\(\s*([^)]*?)\s*\)\s*)");
  static const std::regex pair(R"((\d+)\s*,\s*(\d+))");
  Divisor D;
  auto it = s.cbegin();
  bool first = true;
  std::smatch m;
  while (it != s.cend()) {
    if (!std::regex_search(it, s.cend(), m, term, std::regex_constants::match_continuous))
      throw ConfigError("divisor: cannot parse '" + std::string(it, s.cend()) + "'");
    if (!first && !m[1].matched) throw ConfigError("divisor: missing '+' or '-' before '" + m[0].str() + "'");
    int n = m[2].matched ? std::stoi(m[2].str()) : 1;
    if (m[1].matched && m[1].str() == "-") n = -n;
    std::string name = m[3].str();
    ClosedPoint P;
    std::smatch pm;
    if (name == "O") {
      P = ClosedPoint::origin();
    } else if (name == "P1" || name == "P2" || name == "P3") {
      P = two_torsion(C, name[1] - '0');
    } else if (std::regex_match(name, pm, pair)) {
      int d = std::stoi(pm[1].str()), i = std::stoi(pm[2].str());
      if (d < 1 || d > C.config().degree_bound)
        throw ConfigError("divisor: degree " + std::to_string(d) + " outside [1, degree_bound]");
      const auto& pts = closed_points_of_degree(C, d);
      if (i >= static_cast<int>(pts.size()))
        throw ConfigError("divisor: only " + std::to_string(pts.size()) + " closed points of degree " + std::to_string(d));
      P = pts[i];
    } else {
      throw ConfigError("divisor: unknown point '" + name + "'");
    }
    D.add(Place::of(P), n);
    it = m[0].second;
    first = false;
  }
  if (first) throw ConfigError("divisor: empty expression");
  return D;
}

json stable_number(long double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12Lg", v);
  double d = std::strtod(buf, nullptr);
  return d == 0 ? 0.0 : d;
}

json hecke_element_json(const Curve& C, const HeckeElement& f) {
  json a = json::array();
  for (auto& t : f) a.push_back({{"coef", rational_json(t.coef)}, {"D", divisor_json(C, t.D)}});
  return a;
}

long double theorem_d_scale(const EigenformPackage& pkg) {
  return std::max({1.0L, std::fabs(pkg.P1 * pkg.P2), std::fabs(at_one(pkg.P0) * pkg.P3)});
}

HygieneReport hecke_hygiene(Spectral& sp) {
  HygieneReport r;
  int G = sp.config().gap_bound;
  std::vector<QVec> basis;
  for (int i = 0; i < sp.size(); ++i)
    if (sp.classes()[i].gap <= G - 1) {
      QVec e(sp.size(), 0);
      e[i] = 1;
      basis.push_back(e);
    }
  auto inner = [&](QVec v) {
    for (int i = 0; i < sp.size(); ++i)
      if (sp.classes()[i].gap > G - 1) v[i] = 0;
    return v;
  };
  auto pts = closed_points_of_degree(sp.curve(), 1);
  r.points = static_cast<int>(pts.size());
  r.forms = static_cast<int>(basis.size());
  std::vector<std::vector<QVec>> images(pts.size());
  for (size_t a = 0; a < pts.size(); ++a)
    for (auto& e : basis) images[a].push_back(sp.hecke_apply(pts[a], e));
  for (size_t a = 0; a < pts.size(); ++a)
    for (size_t k = 0; k < basis.size(); ++k) {
      for (size_t l = 0; l < basis.size(); ++l)
        if (sp.petersson(images[a][k], basis[l]) != sp.petersson(basis[k], images[a][l])) r.self_adjoint = false;
      for (size_t b = a + 1; b < pts.size(); ++b)
        if (inner(sp.hecke_apply(pts[a], images[b][k])) != inner(sp.hecke_apply(pts[b], images[a][k]))) r.commute = false;
    }
  return r;
}

const std::vector<std::string>& command_names() {
  static const std::vector<std::string> names = {"tower-check",      "census-invariants", "orbital", "spectral",
                                                 "verify-theorem-d", "verify-jpi",        "reps",    "optimal"};
  return names;
}

CommandResult run_command(const std::string& name, const RunConfig& cfg) {
  if (name == "tower-check") return cmd_tower_check(cfg);
  if (name == "census-invariants") return cmd_census_invariants(cfg);
  if (name == "orbital") return cmd_orbital(cfg);
  if (name == "spectral") return cmd_spectral(cfg);
  if (name == "verify-theorem-d") return cmd_verify_theorem_d(cfg);
  if (name == "verify-jpi") return cmd_verify_jpi(cfg);
  if (name == "reps") return cmd_reps(cfg);
  if (name == "optimal") return cmd_optimal(cfg);
  throw ConfigError("unknown command '" + name + "'");
}

CommandResult cmd_tower_check(const RunConfig& cfg) {
  Curve C(cfg.curve);
  std::mt19937_64 rng(cfg.seed);
  json a = base_artifact("tower-check", cfg);
  json checks = json::array();
  std::vector<std::string> failures;
  auto record = [&](const std::string& name, int trials, int bad) {
    checks.push_back(check_json(name, trials, bad));
    if (bad) failures.push_back(name);
  };
  int n = cfg.random_trials;

  for (uint32_t deg : {1u, 2u}) {
    auto F = C.tower().ext(deg);
    std::uniform_int_distribution<uint32_t> d(0, F->size() - 1);
    int bad = 0;
    for (int t = 0; t < n; ++t) {
      uint32_t x = d(rng), y = d(rng), z = d(rng);
      bad += F->mul(x, F->add(y, z)) != F->add(F->mul(x, y), F->mul(x, z));
      bad += F->mul(F->mul(x, y), z) != F->mul(x, F->mul(y, z));
      bad += F->add(x, F->neg(x)) != 0;
      if (x) bad += F->mul(x, F->inv(x)) != 1;
      bad += F->pow(x, F->size()) != x;
    }
    record("field_axioms_degree_" + std::to_string(deg), n, bad);
  }
  {
    auto F1 = C.tower().ext(1), F2 = C.tower().ext(2);
    const Embedding& e = C.tower().emb(1, 2);
    std::uniform_int_distribution<uint32_t> d(0, F1->size() - 1);
    int bad = 0;
    for (int t = 0; t < n; ++t) {
      uint32_t x = d(rng), y = d(rng);
      bad += e(F1->mul(x, y)) != F2->mul(e(x), e(y));
      bad += e(F1->add(x, y)) != F2->add(e(x), e(y));
    }
    record("embedding_ring_map", n, bad);
  }
  {
    int bad = 0;
    for (int t = 0; t < n; ++t) {
      TowerElement z = random_tower(C, Level::K, rng), w = random_tower(C, Level::K, rng);
      for (Aut g : {Aut::tau1, Aut::tau2, Aut::tau3}) {
        bad += apply_automorphism(apply_automorphism(z, g), g) != z;
        bad += apply_automorphism(z * w, g) != apply_automorphism(z, g) * apply_automorphism(w, g);
      }
      bad += apply_automorphism(apply_automorphism(z, Aut::tau1), Aut::tau2) != apply_automorphism(z, Aut::tau3);
    }
    for (int i = 1; i <= 3; ++i) {
      Aut g = i == 1 ? Aut::sigma1 : i == 2 ? Aut::sigma2 : Aut::sigma3;
      bad += apply_automorphism(TowerElement::s(&C, i), g) != -TowerElement::s(&C, i);
    }
    record("klein_four_automorphisms", n, bad);
  }
  {
    int bad = 0;
    for (int t = 0; t < n; ++t) {
      TowerElement x = random_tower(C, Level::K3, rng), y = random_tower(C, Level::K3, rng);
      bad += norm(x, Level::F) * norm(y, Level::F) != norm(x * y, Level::F);
      bad += trace(x + y, Level::F) != trace(x, Level::F) + trace(y, Level::F);
      TowerElement z = random_tower(C, Level::K, rng);
      bad += trace(z, Level::F) != trace(trace(z, Level::K3), Level::F);
      bad += norm(z, Level::F) != norm(norm(z, Level::K3), Level::F);
    }
    record("trace_norm", n, bad);
  }
  {
    int bad = 0, trials = 0;
    int64_t q = C.q();
    int top = std::min(3, C.config().degree_bound);
    for (int m = 1; m <= top; ++m) {
      int64_t sum = 0;
      for (int d = 1; d <= m; ++d)
        if (m % d == 0) sum += d * static_cast<int64_t>(closed_points_of_degree(C, d).size());
      int64_t cnt = static_cast<int64_t>(count_points(C, m));
      long double qm = std::pow(static_cast<long double>(q), m);
      bad += sum != cnt;
      bad += std::fabs(static_cast<long double>(cnt) - qm - 1) > 2 * std::sqrt(qm);
      ++trials;
    }
    record("point_counts_and_hasse", trials, bad);
  }
  a["checks"] = checks;
  json counts = json::object();
  for (int m = 1; m <= std::min(3, C.config().degree_bound); ++m) counts[std::to_string(m)] = count_points(C, m);
  a["point_counts"] = counts;
  return finish(std::move(a), std::move(failures));
}

CommandResult cmd_census_invariants(const RunConfig& cfg) {
  json a = base_artifact("census-invariants", cfg);
  json out = json::array();
  std::vector<std::string> failures;
  for (uint32_t q0 : cfg.census_fields)
    for (auto [t1, t2] : {std::pair{AlgType::split, AlgType::split}, std::pair{AlgType::split, AlgType::field},
                          std::pair{AlgType::field, AlgType::field}}) {
      Census cs = enumerate_cosets_finite(q0, t1, t2);
      std::string tag = "F" + std::to_string(q0) + " " + alg_type_name(t1) + "/" + alg_type_name(t2);
      if (cs.regular_count != cs.trace1_units) failures.push_back(tag + ": regular count != trace-1 unit count");
      if (!cs.injective) failures.push_back(tag + ": inv not injective");
      if (!cs.surjective) failures.push_back(tag + ": inv not surjective");
      if (!cs.three_way) failures.push_back(tag + ": regularity criteria disagree");
      if (t1 == AlgType::split && t2 == AlgType::split && cs.nonregular_count != 6)
        failures.push_back(tag + ": non-regular count != 6");
      out.push_back(cs.to_json());
    }
  a["censuses"] = out;
  return finish(std::move(a), std::move(failures));
}

CommandResult cmd_orbital(const RunConfig& cfg) {
  Curve C(cfg.curve);
  json a = base_artifact("orbital", cfg);
  json tables = json::array();
  std::vector<std::string> failures;
  for (auto& s : cfg.divisors) {
    Divisor D = parse_divisor(C, s);
    if (!D.effective()) throw ConfigError("orbital: divisor '" + s + "' is not effective");
    json t = orbital_table_json(C, D, cfg.r_values);
    t["expression"] = s;
    for (auto& row : t["per_xi"])
      if (!row["equal"].get<bool>()) failures.push_back(s + ": routes differ at xi = " + row["xi"].get<std::string>());
    LaurentPoly j = j_total(C, D);
    if (!(j == j.reflected())) failures.push_back(s + ": j_total not symmetric under s -> -s");
    for (int r : {1, 3, 5})
      if (j_derivative(j, r) != 0) failures.push_back(s + ": odd derivative r = " + std::to_string(r) + " nonzero");
    tables.push_back(t);
  }
  a["tables"] = tables;
  return finish(std::move(a), std::move(failures));
}

CommandResult cmd_spectral(const RunConfig& cfg) {
  Curve C(cfg.curve);
  Spectral sp(C, cfg.spectral);
  auto& eng = sp.engine();
  json a = base_artifact("spectral", cfg);
  std::vector<std::string> failures;

  json classes = json::array();
  json by_kind = json::object();
  for (auto& c : sp.classes()) {
    classes.push_back(bundle_class_json(C, eng, c));
    std::string k = bundle_kind_name(c.kind);
    by_kind[k] = by_kind.value(k, 0) + 1;
  }
  a["bundle_census"] = {{"total", sp.size()}, {"by_kind", by_kind}, {"classes", classes}};

  json mats = json::array();
  for (auto& x : sp.hecke_points()) {
    QMat A = sp.hecke_matrix(x);
    json trip = json::array();
    for (int i = 0; i < sp.size(); ++i)
      for (int j = 0; j < sp.size(); ++j)
        if (A[i][j] != 0) trip.push_back({i, j, A[i][j].get_num().get_si()});
    mats.push_back({{"point", point_json(C, x)}, {"triplets", trip}});
  }
  a["hecke_matrices"] = mats;

  HygieneReport h = hecke_hygiene(sp);
  a["hecke_hygiene"] = {{"commute", h.commute}, {"self_adjoint", h.self_adjoint}, {"points", h.points}, {"forms", h.forms}};
  if (!h.commute) failures.push_back("degree-1 Hecke operators do not commute");
  if (!h.self_adjoint) failures.push_back("degree-1 Hecke operators are not Petersson self-adjoint");

  const auto& cusp = sp.cusp_basis();
  json ops = json::array();
  for (auto& x : sp.hecke_points()) {
    json m = json::array();
    for (auto& row : sp.cusp_operator(x)) {
      json r = json::array();
      for (auto& v : row) r.push_back(rational_json(v));
      m.push_back(r);
    }
    ops.push_back({{"point", point_json(C, x)}, {"matrix", m}});
  }
  a["cusp"] = {{"dimension", cusp.size()}, {"operators", ops}};

  auto forms = cusp_eigenforms(sp);
  json ef = json::array();
  std::map<int, std::map<int, long double>> sums;
  std::map<int, QVec> polys;
  for (auto& f : forms) {
    json ev = json::array();
    for (size_t k = 0; k < f.eigenvalues.size(); ++k)
      ev.push_back({{"point", point_json(C, sp.hecke_points()[k])}, {"value", stable_number(f.eigenvalues[k])}});
    json cr = json::object();
    for (int r : cfg.r_values) cr[std::to_string(r)] = stable_number(c_pi(f, r));
    for (int r : {0, 2}) sums[f.orbit][r] += c_pi(f, r);
    polys[f.orbit] = f.orbit_poly;
    long double res = verify_theorem_d(f), scale = theorem_d_scale(f);
    if (res > cfg.tolerance * scale) failures.push_back("periods identity residual above tolerance");
    json poly = json::array();
    for (auto& c : f.orbit_poly) poly.push_back(rational_json(c));
    json phi = json::array();
    for (auto v : f.phi) phi.push_back(stable_number(v));
    ef.push_back({{"orbit", f.orbit},
                  {"orbit_poly", poly},
                  {"eigenvalues", ev},
                  {"phi", phi},
                  {"petersson", stable_number(f.petersson)},
                  {"periods",
                   {{"P0", real_laurent(f.P0)},
                    {"P1", stable_number(f.P1)},
                    {"P2", stable_number(f.P2)},
                    {"P3", stable_number(f.P3)}}},
                  {"C_r", cr},
                  {"theorem_d_residual", stable_number(res)}});
  }
  a["eigenforms"] = ef;
  json os = json::array();
  for (auto& [orbit, m] : sums)
    for (auto& [r, v] : m) {
      mpq_class ex = orbit_c_r_exact(sp, polys[orbit], r);
      long double diff = std::fabs(v - static_cast<long double>(ex.get_d()));
      if (diff > cfg.tolerance * std::max(1.0L, std::fabs(v)))
        failures.push_back("orbit " + std::to_string(orbit) + " C_" + std::to_string(r) + " is not rational");
      os.push_back({{"orbit", orbit}, {"r", r}, {"numeric", stable_number(v)}, {"exact", rational_json(ex)}});
    }
  a["orbit_sums"] = os;
  return finish(std::move(a), std::move(failures));
}

CommandResult cmd_verify_theorem_d(const RunConfig& cfg) {
  Curve C(cfg.curve);
  Spectral sp(C, cfg.spectral);
  json a = base_artifact("verify-theorem-d", cfg);
  std::vector<std::string> failures;
  auto forms = cusp_eigenforms(sp);
  a["cusp_dimension"] = sp.cusp_basis().size();
  json rows = json::array();
  for (size_t k = 0; k < forms.size(); ++k) {
    auto& f = forms[k];
    long double res = verify_theorem_d(f), scale = theorem_d_scale(f);
    bool ok = res <= cfg.tolerance * scale;
    if (!ok) failures.push_back("eigenform " + std::to_string(k) + ": residual above tolerance");
    rows.push_back({{"eigenform", k},
                    {"orbit", f.orbit},
                    {"P0_at_0", stable_number(at_one(f.P0))},
                    {"P1", stable_number(f.P1)},
                    {"P2", stable_number(f.P2)},
                    {"P3", stable_number(f.P3)},
                    {"lhs", stable_number(f.P1 * f.P2)},
                    {"rhs", stable_number(at_one(f.P0) * f.P3)},
                    {"residual", stable_number(res)},
                    {"scale", stable_number(scale)},
                    {"passed", ok}});
  }
  a["eigenforms"] = rows;
  a["vacuous"] = forms.empty();
  return finish(std::move(a), std::move(failures));
}

CommandResult cmd_verify_jpi(const RunConfig& cfg) {
  Curve C(cfg.curve);
  Spectral sp(C, cfg.spectral);
  json a = base_artifact("verify-jpi", cfg);
  std::vector<std::string> failures;
  auto forms = cusp_eigenforms(sp);
  auto span = effective_divisors(C, cfg.span_degree);
  a["span_size"] = span.size();
  json rows = json::array();
  int nontrivial = 0;
  try {
    auto elems = eis_elements(C, span);
    for (size_t k = 0; k < elems.size(); ++k) {
      JpiCheck r = verify_jpi(sp, forms, elems[k]);
      bool ok = r.residual <= cfg.tolerance;
      if (!ok) failures.push_back("element " + std::to_string(k) + ": residual above tolerance");
      if (!r.j.is_zero()) ++nontrivial;
      rows.push_back({{"f", hecke_element_json(C, r.f)},
                      {"j_total", r.j.to_json()},
                      {"spectral", real_laurent(r.spectral)},
                      {"residual", stable_number(r.residual)},
                      {"passed", ok}});
    }
  } catch (const EmptySpan&) {
    failures.push_back("the Eisenstein ideal meets the span only in 0");
  }
  a["elements"] = rows;
  a["nontrivial_elements"] = nontrivial;
  a["cusp_dimension"] = sp.cusp_basis().size();
  return finish(std::move(a), std::move(failures));
}

CommandResult cmd_reps(const RunConfig& cfg) {
  json a = base_artifact("reps", cfg);
  std::vector<std::string> failures;
  json out = json::array();
  for (int d = 1; d <= cfg.reps_max_d; ++d) {
    json c = reps_census(d);
    std::string tag = "d = " + std::to_string(d);
    if (!c["eigenvectors_verified"].get<bool>()) failures.push_back(tag + ": Psi basis is not an H-eigenbasis");
    for (int k = 0; k <= 2 * d; ++k) {
      if (c["eigenvalues"][k].get<int>() != 2 * k - 2 * d) failures.push_back(tag + ": unexpected eigenvalue");
      if (c["multiplicities"][k].get<int64_t>() != binom(2 * d, k)) failures.push_back(tag + ": unexpected multiplicity");
    }
    for (auto& n : c["character_norms"])
      if (n["norm"] != "1") failures.push_back(tag + ": character norm != 1");
    for (auto& i : c["induced_checks"])
      if (!i["equal"].get<bool>()) failures.push_back(tag + ": induced character mismatch");
    out.push_back(c);
  }
  a["censuses"] = out;
  return finish(std::move(a), std::move(failures));
}

CommandResult cmd_optimal(const RunConfig& cfg) {
  Curve C(cfg.curve);
  const GF* F = C.base_ptr().get();
  json a = base_artifact("optimal", cfg);
  std::vector<std::string> failures;
  auto p = canonical_optimal_pair(C);
  auto inv = inv_embedding(p);
  bool half = inv.xi.a == FElem::constant(&C, F, F->inv(F->from_int(2))) && inv.xi.b.is_zero();
  bool opt = is_optimal_pair(C, p);
  if (!half) failures.push_back("canonical pair invariant is not 1/2");
  if (!opt) failures.push_back("canonical pair is not optimal");
  auto mat = [](const Mat2<FElem>& m) { return json::array({m.a.str(), m.b.str(), m.c.str(), m.d.str()}); };
  a["canonical_pair"] = {{"m1", mat(p.m1)}, {"m2", mat(p.m2)}};
  a["is_optimal"] = opt;
  a["invariant"] = half ? std::string("1/2") : to_tower(inv.xi).str();

  std::mt19937_64 rng(cfg.seed);
  std::uniform_int_distribution<uint32_t> d(0, F->size() - 1);
  auto small = [&]() { return FElem(&C, RatFn(random_poly(F, 1, rng)), RatFn::constant(F, d(rng))); };
  int tested = 0, failing = 0, attempts = 0;
  json pairs = json::array();
  while (tested < cfg.random_trials && attempts < 100 * cfg.random_trials) {
    ++attempts;
    FElem x = small(), c = small();
    if (c.is_zero()) continue;
    auto pr = pair_from_entries(C, x, c);
    auto iv = inv_embedding(pr);
    if (iv.xi.b.is_zero() || !iv.regular) continue;
    ++tested;
    bool o = is_optimal_pair(C, pr, false);
    if (!o) ++failing;
    pairs.push_back({{"invariant", to_tower(iv.xi).str()}, {"is_optimal", o}});
  }
  if (tested < cfg.random_trials) failures.push_back("could not construct enough non-constant pairs");
  if (failing != tested) failures.push_back("a pair with non-constant invariant passed the optimality test");
  a["nonconstant_pairs"] = {{"tested", tested}, {"failing", failing}, {"pairs", pairs}};
  // the unique optimal class matches the single element 1/2 of A_0
  auto A0 = enumerate_A_D(C, Divisor());
  bool count_one = A0.size() == 1 && A0[0] == inv.xi && j_total(C, Divisor()) == LaurentPoly::one();
  if (!count_one) failures.push_back("A_0 is not the single class of the canonical pair");
  a["unit_count_consistent"] = count_one;
  return finish(std::move(a), std::move(failures));
}

}  // namespace bq
