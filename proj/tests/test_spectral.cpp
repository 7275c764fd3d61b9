#include <doctest.h>

#include <set>

#include "biquad/spectral.hpp"
#include "helpers.hpp"

using namespace bq;

namespace {

PicElement line(const BundleEngine& eng, int d, const GeoPt& P) {
  PicElement L;
  L.degree = d;
  L.point = eng.to_base(P);
  return L;
}

}  // namespace

TEST_CASE("h0 of split bundles") {
  for (auto [q, lam] : {std::pair{3u, 2u}, std::pair{5u, 3u}}) {
    Curve C(bqtest::config(q, lam));
    BundleEngine eng(C);
    for (auto& P : eng.B())
      for (int d = -2; d <= 3; ++d) {
        Bundle E = eng.line_plus_trivial(line(eng, d, P));
        CHECK(eng.degree(E) == d);
        int hl = d > 0 ? d : (d == 0 && P.inf ? 1 : 0);
        CHECK(eng.h0(E) == hl + 1);
        CHECK(eng.det_point(E) == P);
      }
  }
}

TEST_CASE("h1 of line bundles") {
  Curve C(bqtest::config(5, 3));
  BundleEngine eng(C);
  for (auto& P : eng.B())
    for (int d = -3; d <= 2; ++d) {
      int expect = d < 0 ? -d : (d == 0 && P.inf ? 1 : 0);
      CHECK(eng.h1(line(eng, d, P)) == expect);
    }
}

TEST_CASE("classification of representatives") {
  for (auto [q, lam] : {std::pair{3u, 2u}, std::pair{5u, 3u}}) {
    Curve C(bqtest::config(q, lam));
    BundleEngine eng(C);
    const GeoPt O = eng.origin();
    std::set<BundleClass> seen;
    auto check = [&](const Bundle& E, BundleKind kind) {
      BundleClass c = eng.classify(E);
      CHECK(c.kind == kind);
      seen.insert(c);
      CHECK(eng.classify(eng.representative(c)) == c);
      // twisting by line bundles does not change the class
      CHECK(eng.classify(eng.twist(E, eng.B().back(), 1)) == c);
      CHECK(eng.classify(eng.twist(E, O, -3)) == c);
      return c;
    };
    for (int g = 1; g <= 3; ++g)
      for (auto& P : eng.B()) {
        BundleClass c = check(eng.line_plus_trivial(line(eng, g, P)), BundleKind::Split);
        CHECK(c.gap == g);
        CHECK(c.label == P);
        for (auto& e : eng.extension_classes(line(eng, g, P))) CHECK(eng.classify(eng.extension(e)) == c);
      }
    for (auto& P : eng.B()) {
      if (P.inf)
        check(eng.line_plus_trivial(line(eng, 0, P)), BundleKind::Trivial2);
      else
        check(eng.line_plus_trivial(line(eng, 0, P)), BundleKind::SplitSS);
      auto st = eng.extension_classes(line(eng, -1, P));
      REQUIRE(st.size() == 1);
      check(eng.extension(st[0]), BundleKind::Stable);
    }
    auto at = eng.extension_classes(line(eng, 0, O));
    REQUIRE(at.size() == 1);
    check(eng.extension(at[0]), BundleKind::Atiyah);
    for (auto& P : eng.A()) {
      if (std::find(eng.B().begin(), eng.B().end(), P) != eng.B().end()) continue;
      Bundle E = eng.res_bundle(P);
      CHECK(eng.degree(E) == 0);
      check(E, BundleKind::Res);
    }
    int nB = static_cast<int>(eng.B().size());
    std::map<BundleKind, int> count;
    for (auto& c : seen) count[c.kind] += 1;
    CHECK(count[BundleKind::Split] == 3 * nB);
    CHECK(count[BundleKind::Stable] == 4);
    CHECK(count[BundleKind::SplitSS] + 1 == (nB + 4) / 2);
    int nA = static_cast<int>(eng.A().size());
    int quot = nA / nB;
    // all of A/B is 2-torsion-free or not; count via the invariant directly
    std::set<GeoPt, GeoLess> nus;
    for (auto& P : eng.A()) {
      if (std::find(eng.B().begin(), eng.B().end(), P) != eng.B().end()) continue;
      nus.insert(eng.canon_pm(point_add(C, P, point_neg(C, eng.sigma(P)))));
    }
    CHECK(count[BundleKind::Res] == static_cast<int>(nus.size()));
    CHECK(static_cast<int>(nus.size()) <= quot);
  }
}

TEST_CASE("lower modifications") {
  Curve C(bqtest::config(5, 3));
  BundleEngine eng(C);
  Bundle E = eng.res_bundle(eng.A().back());
  for (int deg = 1; deg <= 2; ++deg)
    for (auto& x : closed_points_of_degree(C, deg)) {
      auto mods = eng.lower_modifications(E, x);
      uint64_t qx = deg == 1 ? 5 : 25;
      CHECK(mods.size() == qx + 1);
      for (auto& F : mods) CHECK(eng.degree(F) == -deg);
    }
}

TEST_CASE("pushforwards from the covers") {
  Curve C(bqtest::config(5, 3));
  BundleEngine eng(C);
  for (int i = 1; i <= 3; ++i)
    for (auto& e : pic_quotient_reps(C, i)) {
      Bundle E = eng.pushforward(e);
      CHECK(eng.degree(E) == e.degree);
      CHECK_NOTHROW(eng.classify(E));
    }
}

namespace {

std::map<BundleClass, int> row_of(Spectral& sp, const BundleClass& c, const ClosedPoint& x) {
  int i = sp.index(c);
  REQUIRE(i >= 0);
  return sp.hecke_row(i, x);
}

BundleClass split(int g, const GeoPt& P) { return BundleClass{BundleKind::Split, g, P}; }

}  // namespace

TEST_CASE("class census") {
  for (auto [q, lam] : {std::pair{3u, 2u}, std::pair{5u, 3u}, std::pair{5u, 2u}}) {
    Curve C(bqtest::config(q, lam));
    Spectral sp(C);
    auto& eng = sp.engine();
    int nB = static_cast<int>(eng.B().size()), nA = static_cast<int>(eng.A().size());
    std::map<BundleKind, int> count;
    for (auto& c : sp.classes()) count[c.kind] += 1;
    int tors = 0, tors_ab = 0;
    for (auto& P : eng.B()) tors += point_add(C, P, P).inf ? 1 : 0;
    // |(A/B)[2]|: points P of A with 2P in B, counted per coset
    for (auto& P : eng.A()) {
      GeoPt D = point_add(C, P, P);
      if (std::find(eng.B().begin(), eng.B().end(), D) != eng.B().end()) tors_ab += 1;
    }
    tors_ab /= nB;
    CHECK(count[BundleKind::Split] == sp.config().gap_bound * nB);
    CHECK(count[BundleKind::SplitSS] + count[BundleKind::Trivial2] == (nB + tors) / 2);
    CHECK(count[BundleKind::Atiyah] == 1);
    CHECK(count[BundleKind::Res] == (nA / nB + tors_ab) / 2 - 1);
    CHECK(count[BundleKind::Stable] == tors);
    // the O + O class is present with the trivial label
    CHECK(sp.index(BundleClass{BundleKind::Trivial2, 0, eng.origin()}) >= 0);
  }
}

TEST_CASE("degree-1 Hecke rows against the split formulas") {
  Curve C(bqtest::config(5, 3));
  Spectral sp(C);
  auto& eng = sp.engine();
  const int64_t q = 5;
  for (auto& x : closed_points_of_degree(C, 1)) {
    GeoPt X = eng.to_S(x.geo());
    GeoPt mX = point_neg(C, X);
    for (auto& c : sp.classes()) {
      auto row = row_of(sp, c, x);
      int total = 0;
      for (auto& [k, n] : row) total += n;
      CHECK(total == q + 1);
      if (c.kind == BundleKind::Split && c.gap >= 2) {
        CHECK(row[split(c.gap - 1, point_add(C, c.label, mX))] == q);
        CHECK(row[split(c.gap + 1, point_add(C, c.label, X))] == 1);
      }
      if (c.kind == BundleKind::Split && c.gap == 1 && c.label == X) {
        CHECK(row[split(2, point_add(C, X, X))] == 1);
        CHECK(row[BundleClass{BundleKind::Trivial2, 0, eng.origin()}] == 1);
        CHECK(row[BundleClass{BundleKind::Atiyah, 0, eng.origin()}] == q - 1);
      }
      if (c.kind == BundleKind::SplitSS) {
        const GeoPt& N = c.label;
        GeoPt a = point_add(C, N, X), b = point_add(C, point_neg(C, N), X);
        if (a == b) {
          CHECK(row[split(1, a)] == 2);
        } else {
          CHECK(row[split(1, a)] == 1);
          CHECK(row[split(1, b)] == 1);
        }
        CHECK(row[BundleClass{BundleKind::Stable, 0, eng.canon_mod2(point_add(C, N, mX))}] == q - 1);
      }
      if (c.kind == BundleKind::Trivial2) CHECK(row[split(1, X)] == q + 1);
      if (c.kind == BundleKind::Atiyah) {
        CHECK(row[split(1, X)] == 1);
        CHECK(row[BundleClass{BundleKind::Stable, 0, eng.canon_mod2(mX)}] == q);
      }
      if (c.kind == BundleKind::Res) {
        int st = 0;
        for (auto& [k, n] : row)
          if (k.kind == BundleKind::Stable) st += n;
        CHECK(st == q + 1);
      }
    }
  }
}

TEST_CASE("degree-2 Hecke row of O(x) + O") {
  Curve C(bqtest::config(5, 3));
  Spectral sp(C);
  auto& eng = sp.engine();
  for (auto& x : closed_points_of_degree(C, 2)) {
    GeoPt T = eng.to_S(trace_point(C, x));
    auto row = row_of(sp, split(2, T), x);
    CHECK(row[split(4, point_add(C, T, T))] == 1);
    CHECK(row[BundleClass{BundleKind::Trivial2, 0, eng.origin()}] == 5);
    CHECK(row[BundleClass{BundleKind::Atiyah, 0, eng.origin()}] == 20);
  }
}

TEST_CASE("Hecke hygiene at q = 3") {
  Curve C(bqtest::config(3, 2));
  Spectral sp(C);
  int G = sp.config().gap_bound;
  std::mt19937_64 rng(7);
  std::uniform_int_distribution<int> dist(-5, 5);
  auto random_form = [&]() {
    QVec v(sp.size(), 0);
    for (int i = 0; i < sp.size(); ++i)
      if (sp.classes()[i].gap <= G - 1) v[i] = dist(rng);
    return v;
  };
  auto inner = [&](const QVec& v) {
    QVec r = v;
    for (int i = 0; i < sp.size(); ++i)
      if (sp.classes()[i].gap > G - 1) r[i] = 0;
    return r;
  };
  auto pts = closed_points_of_degree(C, 1);
  for (int t = 0; t < 10; ++t) {
    QVec phi = random_form(), psi = random_form();
    CHECK(phi == inner(phi));
    for (auto& x : pts) {
      CHECK(sp.hecke_apply(x, phi) == sp.hecke_apply_adjoint(x, phi));
      CHECK(sp.petersson(sp.hecke_apply(x, phi), psi) == sp.petersson(phi, sp.hecke_apply(x, psi)));
      for (auto& y : pts) {
        if (x == y) continue;
        CHECK(inner(sp.hecke_apply(x, sp.hecke_apply(y, phi))) == inner(sp.hecke_apply(y, sp.hecke_apply(x, phi))));
      }
    }
  }
  // adjointness of every matrix entry inside the truncation
  for (auto& x : pts) {
    QMat A = sp.hecke_matrix(x);
    for (int i = 0; i < sp.size(); ++i)
      for (int j = 0; j < sp.size(); ++j)
        if (sp.classes()[i].gap < G && sp.classes()[j].gap < G)
          CHECK(A[i][j] * sp.aut(j) == A[j][i] * sp.aut(i));
  }
  CHECK(sp.cusp_basis().empty());
  CHECK(cusp_eigenforms(sp).empty());
}

TEST_CASE("cusp space and eigenforms at q = 5") {
  Curve C(bqtest::config(5, 3));
  Spectral sp(C);
  REQUIRE(sp.cusp_basis().size() == 2);
  SpectralConfig big;
  big.gap_bound = 4;
  big.constant_depth = 4;
  Spectral sp2(C, big);
  CHECK(sp2.cusp_basis().size() == 2);
  for (auto& x : sp.hecke_points()) CHECK_NOTHROW(sp.cusp_operator(x));
  // T_x T_y = T_y T_x on the cusp space
  std::vector<QMat> ops;
  for (auto& x : sp.hecke_points()) ops.push_back(sp.cusp_operator(x));
  for (auto& a : ops)
    for (auto& b : ops) CHECK(q_mul(a, b) == q_mul(b, a));
  auto forms = cusp_eigenforms(sp);
  REQUIRE(forms.size() == 2);
  for (size_t i = 0; i < forms.size(); ++i) {
    auto& f = forms[i];
    CHECK(f.petersson > 0);
    CHECK(verify_theorem_d(f) <= 1e-12L);
    CHECK(f.P0.size() == 1);
    for (int r = 1; r <= 5; r += 2) CHECK(std::fabs(c_pi(f, r)) < 1e-12L);
    for (auto lam : f.eigenvalues) CHECK(std::fabs(lam) <= 2 * 25 + 1e-9L);
    for (size_t j = i + 1; j < forms.size(); ++j) {
      long double s = 0;
      for (int k = 0; k < sp.size(); ++k) s += f.phi[k] * forms[j].phi[k] / sp.aut(k);
      CHECK(std::fabs(s) < 1e-12L);
    }
  }
  // Galois-orbit sums of C_r match the exact rational value
  std::map<int, long double> sums;
  for (auto& f : forms) sums[f.orbit] += c_pi(f, 0);
  for (auto& f : forms) {
    mpq_class ex = orbit_c_r_exact(sp, f.orbit_poly, 0);
    CHECK(std::fabs(sums[f.orbit] - ex.get_d()) < 1e-9L);
  }
}

TEST_CASE("P0 is even and periods of zero vanish") {
  Curve C(bqtest::config(5, 3));
  Spectral sp(C);
  std::mt19937_64 rng(3);
  std::uniform_int_distribution<int> dist(-9, 9);
  for (int t = 0; t < 5; ++t) {
    QVec phi(sp.size());
    for (auto& v : phi) v = dist(rng);
    LaurentPoly p = period_p0_exact(sp, phi);
    CHECK(p == p.reflected());
  }
  QVec zero(sp.size(), 0);
  CHECK(period_p0_exact(sp, zero).is_zero());
  for (auto k : {PeriodKind::P1, PeriodKind::P2, PeriodKind::P3}) CHECK(period_exact(sp, zero, k) == 0);
}

TEST_CASE("Satake transform and the Eisenstein ideal") {
  Curve C(bqtest::config(5, 3));
  auto chars = quadratic_characters(C);
  CHECK(chars.size() == 4);
  HeckeElement unit{HeckeTerm{1, Divisor(CurveName::X)}};
  for (auto& chi : chars)
    for (int eps : {1, -1}) {
      CHECK(satake_eigenvalue(C, unit, eps, chi) == 1);
      for (auto& D : effective_divisors(C, 2)) {
        // chi(D) prod_x (1 + q_x + ... + q_x^(n_x))
        mpq_class expect = 1;
        int sign = 1;
        GeoPt P{1, true, 0, 0};
        for (auto& [w, n] : D.m) {
          int64_t qx = w.base.deg == 1 ? 5 : 25;
          int64_t s = 0, pw = 1;
          for (int k = 0; k <= n; ++k, pw *= qx) s += pw;
          expect *= s;
          P = point_add(C, P, point_mul(C, trace_point(C, w.base), n));
        }
        if (D.degree() % 2 && eps == -1) sign = -sign;
        if (!P.inf) sign *= chi.at({P.x, P.y});
        CHECK(satake_eigenvalue(C, HeckeElement{HeckeTerm{1, D}}, eps, chi) == expect * sign);
      }
    }
  CHECK_THROWS_AS(eis_element(C, {Divisor(CurveName::X)}), EmptySpan);
  auto span = effective_divisors(C, 2);
  for (auto& f : eis_elements(C, span)) {
    CHECK(satake_transform(C, f).empty());
    for (auto& chi : chars)
      for (int eps : {1, -1}) CHECK(satake_eigenvalue(C, f, eps, chi) == 0);
  }
}

TEST_CASE("spectral decomposition of J on the Eisenstein ideal") {
  Curve C(bqtest::config(5, 3));
  Spectral sp(C);
  auto forms = cusp_eigenforms(sp);
  int nontrivial = 0;
  for (auto& f : eis_elements(C, effective_divisors(C, 2))) {
    auto r = verify_jpi(sp, forms, f);
    CHECK(r.residual <= 1e-9L);
    // the orbital side is constant in z
    for (auto& [n, c] : r.j.c) CHECK(n == 0);
    if (!r.j.is_zero()) ++nontrivial;
  }
  CHECK(nontrivial > 0);
}
