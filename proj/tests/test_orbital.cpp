#include <doctest.h>

#include <set>

#include "biquad/orbital.hpp"
#include "biquad/pic.hpp"
#include "biquad/rr.hpp"
#include "helpers.hpp"

using namespace bq;

namespace {

std::vector<Divisor> test_divisors(const Curve& C, int max_deg) {
  std::vector<Divisor> out{Divisor()};
  auto d1 = closed_points_of_degree(C, 1);
  for (auto& P : d1) out.push_back(Divisor::point(P));
  if (max_deg < 2) return out;
  for (size_t i = 0; i < d1.size(); ++i)
    for (size_t j = i; j < d1.size(); ++j) out.push_back(Divisor::point(d1[i]) + Divisor::point(d1[j]));
  for (auto& P : closed_points_of_degree(C, 2)) out.push_back(Divisor::point(P));
  return out;
}

// sum over xi in A_D and sub-divisors Theta1 of D_xi of (d1 - d2)^r eta(Theta1)
mpq_class resum(const Curve& C, const Divisor& D, int r) {
  mpq_class total = 0;
  int d = D.degree();
  for (auto& xi : enumerate_A_D(C, D)) {
    Divisor Dxi = xi_divisor(C, make_instance(C, xi, D));
    std::vector<std::pair<Place, int>> terms(Dxi.m.begin(), Dxi.m.end());
    std::function<void(size_t, Divisor)> rec = [&](size_t i, Divisor theta) {
      if (i == terms.size()) {
        int d1 = theta.degree(), d2 = 2 * d - d1;
        mpz_class p = 1;
        for (int k = 0; k < r; ++k) p *= (d1 - d2);
        total += p * quadratic_character(C, QChar::eta, theta);
        return;
      }
      for (int k = 0; k <= terms[i].second; ++k) {
        Divisor t = theta;
        if (k) t.add(terms[i].first, k);
        rec(i + 1, t);
      }
    };
    rec(0, Divisor(CurveName::Y3));
  }
  return total;
}

}  // namespace

TEST_CASE("A_D for D = 0 is the single constant 1/2") {
  Curve C(bqtest::config(3, 2));
  auto A = enumerate_A_D(C, Divisor());
  REQUIRE(A.size() == 1);
  const GF* F = C.base_ptr().get();
  CHECK(A[0].a == FElem::constant(&C, F, F->inv(F->from_int(2))));
  CHECK(A[0].b.is_zero());
}

TEST_CASE("A_D agrees with the trace-1 slice of L(f3^* D) on Y3") {
  for (uint32_t q : {3u, 5u}) {
    Curve C(bqtest::config(q, 2));
    const GF* F = C.base_ptr().get();
    for (auto& P : closed_points_of_degree(C, 1)) {
      Divisor D = Divisor::point(P);
      auto A = enumerate_A_D(C, D);
      CHECK(A.size() == q);
      for (auto& xi : A) {
        CHECK(xi.trace() == FElem::from_int(&C, F, 1));
        CHECK(in_A_D(C, xi, D));
      }
      auto basis = riemann_roch_basis(C, pullback(C, D, CurveName::Y3));
      REQUIRE(basis.size() == 2);
      size_t hits = 0;
      for (uint32_t c0 = 0; c0 < q; ++c0)
        for (uint32_t c1 = 0; c1 < q; ++c1) {
          TowerElement z = basis[0] * TowerElement::from_f(FElem::constant(&C, F, c0)) +
                           basis[1] * TowerElement::from_f(FElem::constant(&C, F, c1));
          if (z.is_zero()) continue;
          K3Global xi = k3_of(C, z);
          if (!(xi.trace() == FElem::from_int(&C, F, 1))) continue;
          ++hits;
          CHECK(std::find(A.begin(), A.end(), xi) != A.end());
        }
      CHECK(hits == A.size());
    }
    for (auto& P : closed_points_of_degree(C, 2)) CHECK(enumerate_A_D(C, Divisor::point(P)).size() == q * q);
  }
}

TEST_CASE("route split equals route adelic for deg D <= 2, q in {3, 5}") {
  for (uint32_t q : {3u, 5u}) {
    Curve C(bqtest::config(q, 2));
    int compared = 0;
    for (const Divisor& D : test_divisors(C, 2)) {
      int d = D.degree();
      for (auto& xi : enumerate_A_D(C, D)) {
        OrbitalInstance inst = make_instance(C, xi, D);
        LaurentPoly b = orbital_route_split(C, inst);
        LaurentPoly a = orbital_route_adelic(C, inst);
        CHECK_MESSAGE(a == b, "D deg " << d << " xi " << to_tower(xi).str() << ": " << a.str() << " vs " << b.str());
        CHECK(b == b.reflected());
        CHECK(b.integral());
        CHECK(b.coef(d) == 1);
        CHECK(b.coef(-d) == 1);
        for (auto& [n, v] : b.c) CHECK(std::abs(n) <= d);
        ++compared;
      }
    }
    MESSAGE("q=" << q << " instances compared: " << compared);
  }
}

TEST_CASE("xi outside A_D") {
  Curve C(bqtest::config(3, 2));
  const GF* F = C.base_ptr().get();
  K3Global xi{FElem::constant(&C, F, F->inv(F->from_int(2))), FElem::from_int(&C, F, 1), FElem::u(&C, F, 3)};
  CHECK_FALSE(in_A_D(C, xi, Divisor()));
  OrbitalInstance inst = make_instance(C, xi, Divisor());
  CHECK(orbital_route_adelic(C, inst).is_zero());
  CHECK_THROWS_AS(orbital_route_split(C, inst), NotInDomain);
  K3Global bad{FElem::from_int(&C, F, 1), FElem::from_int(&C, F, 1), FElem::u(&C, F, 3)};
  CHECK_THROWS_AS(make_instance(C, bad, Divisor()), NotInDomain);
}

TEST_CASE("j_total: unit, symmetry, support and derivatives") {
  for (uint32_t q : {3u, 5u}) {
    Curve C(bqtest::config(q, 2));
    CHECK(j_total(C, Divisor()) == LaurentPoly::one());
    CHECK(j_derivative(C, HeckeElement{{1, Divisor()}}, 0) == 1);
    for (const Divisor& D : test_divisors(C, q == 3 ? 2 : 1)) {
      LaurentPoly j = j_total(C, D);
      CHECK(j == j.reflected());
      for (auto& [n, v] : j.c) CHECK(std::abs(n) <= D.degree());
      for (int r : {1, 3, 5}) CHECK(j_derivative(j, r) == 0);
      CHECK(j_derivative(j, 2) == resum(C, D, 2));
      CHECK(j_derivative(j, 0) == resum(C, D, 0));
    }
    auto P = closed_points_of_degree(C, 1).back();
    HeckeElement f{{2, Divisor()}, {mpq_class(3, 2), Divisor::point(P)}};
    CHECK(j_total(C, f) == LaurentPoly::one().scaled(2) + j_total(C, Divisor::point(P)).scaled(mpq_class(3, 2)));
  }
}

TEST_CASE("local unit orbital factors") {
  std::mt19937_64 rng(3);
  for (uint32_t q : {3u, 5u}) {
    Curve C(bqtest::config(q, 2));
    const GF* F = C.base_ptr().get();
    TowerElement s3 = TowerElement::s(&C, 3);
    for (int t = 0; t < 8; ++t) {
      FElem b = bqtest::small_felem(C, rng);
      if (b.is_zero()) continue;
      TowerElement eps = s3 * TowerElement::from_f(b);
      std::set<ClosedPoint> supp;
      for (auto& [w, n] : divisor_of(eps).m) supp.insert(w.base);
      LaurentPoly prod = LaurentPoly::one();
      for (auto& x : supp) prod = prod * local_orbital_unit(C, x, eps);
      CHECK(prod == LaurentPoly::one());
      for (auto& x : closed_points_of_degree(C, 1))
        if (!supp.count(x)) CHECK(local_orbital_unit(C, x, eps) == LaurentPoly::one());
    }
    // a simple pole of eps at x gives |c|^{2s} = z^{-deg x}
    int seen_split = 0, seen_inert = 0;
    for (int deg : {1, 2, 3})
      for (auto& x : closed_points_of_degree(C, deg)) {
        if (x.inf || x.y == 0) continue;
        // minimal polynomial over F_q of the x-coordinate
        const GF* G = C.tower().ext(deg).get();
        Poly full = Poly::constant(G, 1);
        std::vector<uint32_t> orbit;
        for (int j = 0; j < deg; ++j) {
          uint32_t xc = G->frob(x.x, j);
          if (std::find(orbit.begin(), orbit.end(), xc) != orbit.end()) continue;
          orbit.push_back(xc);
          full = full * Poly::linear(G, xc);
        }
        std::vector<uint32_t> cs;
        for (uint32_t v : full.c)
          for (uint32_t a = 0; a < F->size(); ++a)
            if (C.emb(F, G)(a) == v) cs.push_back(a);
        FElem l(&C, RatFn(Poly(F, cs)), RatFn(F));
        TowerElement eps = s3 * TowerElement::from_f(l.inv());
        CHECK(local_orbital_unit(C, x, eps) == LaurentPoly::monomial(-deg));
        (chi(C, 3, x) == 1 ? seen_split : seen_inert)++;
      }
    CHECK(seen_split > 0);
    CHECK(seen_inert > 0);
    CHECK_THROWS_AS(local_orbital_unit(C, ClosedPoint::origin(), TowerElement::constant(&C, 1)), BadEpsilon);
    CHECK_THROWS_AS(local_orbital_unit(C, ClosedPoint::origin(), TowerElement(Level::K3, {FElem(&C, F), FElem(&C, F)})),
                    BadEpsilon);
  }
}

TEST_CASE("optimal pairs") {
  std::mt19937_64 rng(11);
  for (uint32_t q : {3u, 5u, 7u}) {
    Curve C(bqtest::config(q, q == 7 ? 3 : 2));
    const GF* F = C.base_ptr().get();
    auto p = canonical_optimal_pair(C);
    CHECK((p.m2 * p.m2).a == p.d2);
    CHECK((p.m2 * p.m2).b.is_zero());
    auto inv = inv_embedding(p);
    CHECK(inv.xi.a == FElem::constant(&C, F, F->inv(F->from_int(2))));
    CHECK(inv.xi.b.is_zero());
    CHECK(is_optimal_pair(C, p));
    FElem x = FElem::x(&C, F), one = FElem::from_int(&C, F, 1), zero(&C, F);
    for (const Mat2<FElem>& g : {Mat2<FElem>{one, x, zero, one}, Mat2<FElem>{x, one, one, zero}}) {
      EmbeddingPair<FElem> pg{p.d1, p.d2, g * p.m1 * g.inv(), g * p.m2 * g.inv()};
      CHECK(inv_embedding(pg).xi == inv.xi);
      CHECK(is_optimal_pair(C, pg));
    }
    int nonconst = 0;
    for (int t = 0; t < 20; ++t) {
      FElem a = bqtest::small_felem(C, rng), c = bqtest::small_felem(C, rng);
      if (c.is_zero()) continue;
      auto pr = pair_from_entries(C, a, c);
      auto iv = inv_embedding(pr);
      if (iv.xi.b.is_zero() || !iv.regular) continue;
      ++nonconst;
      CHECK_FALSE(is_optimal_pair(C, pr, false));
    }
    CHECK(nonconst > 0);
  }
}
