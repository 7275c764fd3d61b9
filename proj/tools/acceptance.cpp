#include <chrono>
#include <cmath>
#include <fstream>
#include <functional>
#include <iostream>
#include <random>
#include <set>
#include <sstream>

#include "biquad/app.hpp"
#include "biquad/sym_reps.hpp"

using namespace bq;

namespace {

constexpr double kTheoremDTol = 1e-9;     // relative to max(1, |P1 P2|, |P0(0) P3|)
constexpr double kJpiTol = 1e-9;          // absolute, per Laurent coefficient
constexpr double kRationalityTol = 1e-9;  // relative to max(1, |sum|)
constexpr double kCensusSeconds = 60;     // per field, all type pairs
constexpr int kNonconstantPairs = 20;
constexpr uint64_t kSeed = 20240611;

CurveConfig curve(uint32_t q, uint32_t lambda) {
  return CurveConfig::from_json({{"q", q}, {"lambda", lambda}, {"e1", 0}, {"e2", 1}, {"degree_bound", 4}});
}

struct Outcome {
  bool ok = true;
  std::ostringstream detail;
  void fail(const std::string& why) {
    if (ok) detail.str("");
    ok = false;
    detail << why << "; ";
  }
};

Outcome invariant_bijectivity() {
  Outcome o;
  for (uint32_t q0 : {3u, 5u, 7u}) {
    auto t0 = std::chrono::steady_clock::now();
    for (auto [t1, t2] : {std::pair{AlgType::split, AlgType::split}, std::pair{AlgType::split, AlgType::field},
                          std::pair{AlgType::field, AlgType::field}}) {
      Census cs = enumerate_cosets_finite(q0, t1, t2);
      std::string tag = "F" + std::to_string(q0) + " " + alg_type_name(t1) + "/" + alg_type_name(t2);
      if (cs.regular_count != cs.trace1_units) o.fail(tag + " regular != trace-1 units");
      if (!cs.injective) o.fail(tag + " inv not injective");
      if (t1 == AlgType::split && t2 == AlgType::split && cs.nonregular_count != 6) o.fail(tag + " non-regular != 6");
    }
    double sec = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (sec > kCensusSeconds) o.fail("F" + std::to_string(q0) + " took " + std::to_string(sec) + " s");
  }
  if (o.ok) o.detail << "F3, F5, F7 x 3 type pairs";
  return o;
}

Outcome route_equality() {
  Outcome o;
  int instances = 0;
  for (auto [q, lam] : {std::pair{3u, 2u}, std::pair{5u, 2u}, std::pair{5u, 3u}}) {
    Curve C(curve(q, lam));
    for (const Divisor& D : effective_divisors(C, 2))
      for (auto& xi : enumerate_A_D(C, D)) {
        OrbitalInstance inst = make_instance(C, xi, D);
        if (!(orbital_route_split(C, inst) == orbital_route_adelic(C, inst)))
          o.fail("q=" + std::to_string(q) + " xi=" + to_tower(xi).str());
        ++instances;
      }
  }
  if (o.ok) o.detail << instances << " (D, xi) instances, exact";
  return o;
}

Outcome unit_element() {
  Outcome o;
  std::mt19937_64 rng(kSeed);
  int products = 0;
  for (auto [q, lam] : {std::pair{3u, 2u}, std::pair{5u, 3u}, std::pair{7u, 3u}}) {
    Curve C(curve(q, lam));
    const GF* F = C.base_ptr().get();
    if (!(j_total(C, Divisor()) == LaurentPoly::one())) o.fail("j_total(f0) != 1 at q=" + std::to_string(q));
    std::uniform_int_distribution<uint32_t> d(0, F->size() - 1);
    TowerElement s3 = TowerElement::s(&C, 3);
    for (int t = 0; t < 6; ++t) {
      FElem b(&C, RatFn(Poly(F, {d(rng), d(rng)})), RatFn(F));
      if (b.is_zero()) continue;
      TowerElement eps = s3 * TowerElement::from_f(b);
      std::set<ClosedPoint> supp;
      for (auto& [w, n] : divisor_of(eps).m) supp.insert(w.base);
      LaurentPoly prod = LaurentPoly::one();
      for (auto& x : supp) prod = prod * local_orbital_unit(C, x, eps);
      if (!(prod == LaurentPoly::one())) o.fail("local product != 1 at q=" + std::to_string(q));
      ++products;
    }
  }
  if (o.ok) o.detail << "q = 3, 5, 7; " << products << " local products";
  return o;
}

Outcome functional_equation() {
  Outcome o;
  int checked = 0;
  for (auto [q, lam] : {std::pair{3u, 2u}, std::pair{5u, 3u}}) {
    Curve C(curve(q, lam));
    for (const Divisor& D : effective_divisors(C, 2)) {
      LaurentPoly total;
      for (auto& xi : enumerate_A_D(C, D)) {
        LaurentPoly j = orbital_route_split(C, make_instance(C, xi, D));
        if (!(j == j.reflected())) o.fail("J(xi) not even at q=" + std::to_string(q));
        total = total + j;
        ++checked;
      }
      if (!(total == total.reflected())) o.fail("J(f_D) not even");
      for (int r = 1; r <= 5; r += 2)
        if (j_derivative(total, r) != 0) o.fail("odd derivative r=" + std::to_string(r) + " nonzero");
    }
  }
  if (o.ok) o.detail << checked << " xi-terms even; odd r <= 5 vanish; values exact rationals";
  return o;
}

Outcome representation_theory() {
  Outcome o;
  for (int d = 1; d <= 3; ++d) {
    IMat H = h_operator(d);
    int N = static_cast<int>(H.size());
    int total = 0;
    for (int k = 0; k <= 2 * d; ++k) {
      int lambda = 2 * k - 2 * d;
      QMat M(N, QVec(N));
      for (int i = 0; i < N; ++i)
        for (int j = 0; j < N; ++j) M[i][j] = H[i][j] - (i == j ? lambda : 0);
      int mult = N - q_rank(M);
      int64_t c = 1;
      for (int i = 1; i <= k; ++i) c = c * (2 * d - k + i) / i;
      if (mult != c) o.fail("d=" + std::to_string(d) + " multiplicity of " + std::to_string(lambda));
      total += mult;
      if (character_norm(d, k) != 1) o.fail("d=" + std::to_string(d) + " norm of V_" + std::to_string(k));
      if (!verify_induced(d, k)) o.fail("d=" + std::to_string(d) + " induced d1=" + std::to_string(k));
    }
    if (total != N) o.fail("d=" + std::to_string(d) + " eigenvalues outside {d1 - d2}");
  }
  if (o.ok) o.detail << "d <= 3: spectra, norms and induced characters exact";
  return o;
}

Outcome theorem_d(const std::string& source_dir) {
  Outcome o;
  int forms_checked = 0;
  long double worst = 0;
  for (auto [q, lam] : {std::pair{3u, 2u}, std::pair{5u, 3u}}) {
    Curve C(curve(q, lam));
    Spectral sp(C);
    for (auto& f : cusp_eigenforms(sp)) {
      long double r = verify_theorem_d(f) / theorem_d_scale(f);
      worst = std::max(worst, r);
      if (r > kTheoremDTol) o.fail("q=" + std::to_string(q) + " residual " + std::to_string(static_cast<double>(r)));
      ++forms_checked;
    }
  }
  std::ifstream in(source_dir + "/configs/default.json");
  RunConfig def = RunConfig::from_json(nlohmann::json::parse(in));
  Curve C(def.curve);
  Spectral sp(C, def.spectral);
  size_t dim = sp.cusp_basis().size();
  if (dim == 0) o.fail("default config has no cusp forms");
  std::ifstream g(source_dir + "/tests/golden/default/verify-theorem-d.json");
  if (!g || nlohmann::json::parse(g).value("cusp_dimension", 0) != static_cast<int>(dim))
    o.fail("golden file does not pin the default cusp dimension");
  if (o.ok) o.detail << forms_checked << " eigenforms (q=3 has none), max scaled residual " << static_cast<double>(worst)
                     << "; default cusp dim " << dim;
  return o;
}

Outcome jpi_decomposition() {
  Outcome o;
  int nontrivial = 0, elements = 0;
  long double worst = 0;
  for (auto [q, lam] : {std::pair{5u, 3u}, std::pair{7u, 3u}}) {
    Curve C(curve(q, lam));
    Spectral sp(C);
    auto forms = cusp_eigenforms(sp);
    for (auto& f : eis_elements(C, effective_divisors(C, 2))) {
      JpiCheck r = verify_jpi(sp, forms, f);
      worst = std::max(worst, r.residual);
      if (r.residual > kJpiTol) o.fail("q=" + std::to_string(q) + " residual " + std::to_string(static_cast<double>(r.residual)));
      if (!r.j.is_zero()) ++nontrivial;
      ++elements;
    }
  }
  if (nontrivial == 0) o.fail("no element with nonzero j_total");
  if (o.ok) o.detail << elements << " Eisenstein-ideal elements, " << nontrivial << " with j != 0, max residual "
                     << static_cast<double>(worst);
  return o;
}

Outcome rationality() {
  Outcome o;
  int sums = 0;
  for (auto [q, lam] : {std::pair{5u, 3u}, std::pair{7u, 3u}}) {
    Curve C(curve(q, lam));
    Spectral sp(C);
    auto forms = cusp_eigenforms(sp);
    std::map<int, QVec> polys;
    std::map<std::pair<int, int>, long double> acc;
    for (auto& f : forms) {
      polys[f.orbit] = f.orbit_poly;
      for (int r : {0, 2}) acc[{f.orbit, r}] += c_pi(f, r);
    }
    for (auto& [key, v] : acc) {
      mpq_class ex = orbit_c_r_exact(sp, polys[key.first], key.second);
      if (std::fabs(v - static_cast<long double>(ex.get_d())) > kRationalityTol * std::max(1.0L, std::fabs(v)))
        o.fail("q=" + std::to_string(q) + " orbit " + std::to_string(key.first));
      ++sums;
    }
  }
  if (o.ok) o.detail << sums << " orbit sums (r = 0, 2) match exact rationals";
  return o;
}

Outcome optimal_embeddings() {
  Outcome o;
  for (auto [q, lam] : {std::pair{3u, 2u}, std::pair{5u, 3u}, std::pair{7u, 3u}}) {
    RunConfig cfg = RunConfig::from_json(
        {{"curve", curve(q, lam).to_json()}, {"random_trials", kNonconstantPairs}, {"seed", kSeed}});
    CommandResult r = cmd_optimal(cfg);
    auto& a = r.artifact;
    std::string tag = "q=" + std::to_string(q);
    if (a["is_optimal"] != true || a["invariant"] != "1/2") o.fail(tag + " canonical pair");
    if (a["nonconstant_pairs"]["tested"] != kNonconstantPairs || a["nonconstant_pairs"]["failing"] != kNonconstantPairs)
      o.fail(tag + " non-constant pairs");
    if (a["unit_count_consistent"] != true) o.fail(tag + " count-1 identity");
  }
  if (o.ok) o.detail << "q = 3, 5, 7: inv 1/2 optimal, " << kNonconstantPairs << " non-constant pairs fail, A_0 = {1/2}";
  return o;
}

Outcome hecke_hygiene_q3() {
  Outcome o;
  Curve C(curve(3, 2));
  Spectral sp(C);
  HygieneReport h = hecke_hygiene(sp);
  if (!h.commute) o.fail("T_x T_y != T_y T_x");
  if (!h.self_adjoint) o.fail("T_x not self-adjoint");
  if (o.ok) o.detail << h.points << " degree-1 points, " << h.forms << " basis forms, exact";
  return o;
}

}  // namespace

int main(int argc, char** argv) {
  std::string source_dir = argc > 1 ? argv[1] : BQ_SOURCE_DIR;
  std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
      {"invariant bijectivity", invariant_bijectivity},
      {"route equality", route_equality},
      {"unit element", unit_element},
      {"functional equation and parity", functional_equation},
      {"representation theory", representation_theory},
      {"periods identity", [&] { return theorem_d(source_dir); }},
      {"spectral decomposition", jpi_decomposition},
      {"rationality", rationality},
      {"optimal embeddings", optimal_embeddings},
      {"Hecke algebra hygiene", hecke_hygiene_q3},
  };
  int failed = 0;
  for (size_t i = 0; i < criteria.size(); ++i) {
    auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o.fail(std::string("exception: ") + e.what());
    }
    double sec = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (!o.ok) ++failed;
    std::printf("%s %2zu %-32s %.1fs  %s\n", o.ok ? "PASS" : "FAIL", i + 1, criteria[i].first.c_str(), sec,
                o.detail.str().c_str());
    std::fflush(stdout);
  }
  return failed ? 1 : 0;
}
