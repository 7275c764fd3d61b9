#include <doctest.h>

#include <set>

#include "biquad/pic.hpp"
#include "helpers.hpp"

using namespace bq;

namespace {

// #X(F_{q^n}) by brute force over all (x, y) pairs.
uint64_t brute_count(const Curve& C, uint32_t n) {
  auto G = C.tower().ext(n);
  uint64_t cnt = 1;
  for (uint32_t x = 0; x < G->size(); ++x) {
    uint32_t fx = C.cubic_at(G.get(), x);
    for (uint32_t y = 0; y < G->size(); ++y)
      if (G->mul(y, y) == fx) ++cnt;
  }
  return cnt;
}

std::vector<Curve*> curves() {
  static std::vector<std::unique_ptr<Curve>> cs;
  if (cs.empty()) {
    cs.push_back(std::make_unique<Curve>(bqtest::config(3, 2)));
    cs.push_back(std::make_unique<Curve>(bqtest::config(5, 2)));
    cs.push_back(std::make_unique<Curve>(bqtest::config(5, 3, 3, 0)));
    cs.push_back(std::make_unique<Curve>(bqtest::config(7, 3, 1, 3)));
  }
  std::vector<Curve*> out;
  for (auto& c : cs) out.push_back(c.get());
  return out;
}

Divisor random_divisor(const Curve& C, CurveName cv, std::mt19937_64& rng, int npts, int lo, int hi) {
  std::vector<ClosedPoint> pts = enumerate_closed_points(C, 2);
  std::uniform_int_distribution<size_t> pick(0, pts.size() - 1);
  std::uniform_int_distribution<int> mult(lo, hi);
  Divisor D(cv);
  for (int k = 0; k < npts; ++k) {
    auto ws = places_above(C, cv, pts[pick(rng)]);
    D.add(ws[rng() % ws.size()], mult(rng));
  }
  return D;
}

// Largest n with q^n inside the field tables.
int table_degree(const Curve& C) {
  int n = 0;
  for (uint64_t v = C.q(); v <= GF::kMaxSize; v *= C.q()) ++n;
  return n;
}

int positive_degree(const Divisor& D) {
  int d = 0;
  for (auto& [w, n] : D.m)
    if (n > 0) d += n * w.deg;
  return d;
}

void check_in_L(const Curve& C, const TowerElement& f, const Divisor& D) {
  Divisor E = divisor_of(f) + D;
  CHECK(E.effective());
  for (auto& [w, n] : D.m) CHECK(valuation(C, f, D.curve, w) >= -n);
}

}  // namespace

TEST_CASE("degree-1 closed points match brute force counts") {
  for (Curve* C : curves()) CHECK(closed_points_of_degree(*C, 1).size() == brute_count(*C, 1));
}

TEST_CASE("zeta consistency for n <= 3") {
  for (Curve* C : curves()) {
    int64_t q = C->q();
    int64_t a = q + 1 - static_cast<int64_t>(brute_count(*C, 1));
    int64_t s_prev = 2, s = a;
    for (uint32_t n = 1; n <= 3; ++n) {
      int64_t qn = 1;
      for (uint32_t j = 0; j < n; ++j) qn *= q;
      int64_t expect = qn + 1 - s;
      CHECK(static_cast<int64_t>(count_points(*C, n)) == expect);
      if (n <= 2) CHECK(static_cast<int64_t>(brute_count(*C, n)) == expect);
      int64_t sum = 0;
      for (uint32_t d = 1; d <= n; ++d)
        if (n % d == 0) sum += d * static_cast<int64_t>(closed_points_of_degree(*C, d).size());
      CHECK(sum == expect);
      int64_t next = a * s - q * s_prev;
      s_prev = s;
      s = next;
    }
  }
}

TEST_CASE("closed point enumeration is duplicate-free and respects the bound") {
  Curve C(bqtest::config(3, 2, 0, 1, 3));
  auto pts = enumerate_closed_points(C, 3);
  std::set<ClosedPoint> seen(pts.begin(), pts.end());
  CHECK(seen.size() == pts.size());
  for (auto& P : pts) CHECK(closed_point(C, P.geo()) == P);
  CHECK_THROWS_AS(enumerate_closed_points(C, 4), BoundExceeded);
}

TEST_CASE("two-torsion points are rational") {
  for (Curve* C : curves()) {
    auto deg1 = closed_points_of_degree(*C, 1);
    for (int i = 1; i <= 3; ++i) {
      ClosedPoint P = two_torsion(*C, i);
      CHECK(P.deg == 1);
      CHECK(P.y == 0);
      CHECK(std::find(deg1.begin(), deg1.end(), P) != deg1.end());
      CHECK(point_mul(*C, P.geo(), 2).inf);
    }
  }
}

TEST_CASE("divisors of basic functions") {
  for (Curve* C : curves()) {
    const GF* F = C->base_ptr().get();
    Divisor d = divisor_of(FElem::u(C, F, 1));
    Divisor expect = Divisor::point(two_torsion(*C, 1), 2) - Divisor::point(ClosedPoint::origin(), 2);
    CHECK(d == expect);
    Divisor dy = divisor_of(FElem::y(C, F));
    CHECK(dy.degree() == 0);
    CHECK(dy.mult(Place::of(ClosedPoint::origin())) == -3);
    for (int i = 1; i <= 3; ++i) CHECK(dy.mult(Place::of(two_torsion(*C, i))) == 1);
    CHECK_THROWS_AS(divisor_of(FElem(C, F)), ZeroElement);
  }
}

TEST_CASE("div(s3) on Y3 is half the pullback of div(u1 u2)") {
  for (Curve* C : curves()) {
    TowerElement s3 = TowerElement::s(C, 3);
    Divisor d = divisor_of(s3);
    CHECK(d.curve == CurveName::Y3);
    CHECK(d.degree() == 0);
    Divisor pu = pullback(*C, divisor_of(FElem::u(C, C->base_ptr().get(), 3)), CurveName::Y3);
    CHECK(d.scaled(2) == pu);
  }
}

TEST_CASE("divisor_of is multiplicative with degree 0") {
  std::mt19937_64 rng(11);
  for (Curve* C : {curves()[0], curves()[1]}) {
    for (Level l : {Level::F, Level::K1, Level::K3}) {
      for (int t = 0; t < 6; ++t) {
        TowerElement f = l == Level::F ? TowerElement::from_f(bqtest::small_felem(*C, rng)) : bqtest::small_tower(*C, l, rng);
        TowerElement g = l == Level::F ? TowerElement::from_f(bqtest::small_felem(*C, rng)) : bqtest::small_tower(*C, l, rng);
        if (f.is_zero() || g.is_zero()) continue;
        Divisor df = divisor_of(f), dg = divisor_of(g);
        CHECK(df.degree() == 0);
        CHECK(divisor_of(f * g) == df + dg);
      }
    }
  }
}

TEST_CASE("Riemann-Roch on X") {
  std::mt19937_64 rng(5);
  for (Curve* C : curves()) {
    Divisor zero(CurveName::X);
    auto L0 = riemann_roch_basis(*C, zero);
    REQUIRE(L0.size() == 1);
    CHECK(divisor_of(L0[0]).is_zero());
    Divisor three = Divisor::point(ClosedPoint::origin(), 3);
    CHECK(riemann_roch_basis(*C, three).size() == 3);
    for (int t = 0; t < 25; ++t) {
      Divisor D = random_divisor(*C, CurveName::X, rng, 3, -2, 3);
      if (positive_degree(D) > table_degree(*C)) continue;
      auto L = riemann_roch_basis(*C, D);
      int deg = D.degree();
      size_t expect = deg > 0 ? deg : deg < 0 ? 0 : (pic_reduce(*C, D).point.inf ? 1 : 0);
      CHECK(L.size() == expect);
      for (auto& f : L) check_in_L(*C, f, D);
    }
  }
}

TEST_CASE("Riemann-Roch on the covers") {
  std::mt19937_64 rng(9);
  for (Curve* C : {curves()[0], curves()[1]}) {
    for (int i = 1; i <= 3; ++i) {
      CurveName cv = cover_curve(i);
      for (int t = 0; t < 10; ++t) {
        Divisor D = random_divisor(*C, cv, rng, 3, -1, 3);
        if (positive_degree(D) > table_degree(*C) / 2) continue;
        auto L = riemann_roch_basis(*C, D);
        if (D.degree() > 0) CHECK(L.size() == static_cast<size_t>(D.degree()));
        if (D.degree() < 0) CHECK(L.empty());
        for (auto& f : L) check_in_L(*C, f, D);
      }
    }
  }
}

TEST_CASE("pullback and pushforward") {
  std::mt19937_64 rng(3);
  for (Curve* C : curves()) {
    for (auto& P : closed_points_of_degree(*C, 1)) {
      Divisor D = Divisor::point(P);
      Divisor f3 = pullback(*C, D, CurveName::Y3);
      CHECK(f3.degree() == 2);
      uint32_t u3 = C->base().mul(C->base().sub(P.x, C->e(1)), C->base().sub(P.x, C->e(2)));
      if (!P.inf && u3 != 0) {
        bool split = C->base().is_square(u3);
        CHECK(chi(*C, 3, P) == (split ? 1 : -1));
        CHECK(f3.m.size() == (split ? 2u : 1u));
        for (auto& [w, n] : f3.m) CHECK(w.deg == (split ? 1 : 2));
      }
    }
    for (int t = 0; t < 10; ++t) {
      Divisor D = random_divisor(*C, CurveName::X, rng, 3, -2, 2);
      for (CurveName cv : {CurveName::Y1, CurveName::Y2, CurveName::Y3, CurveName::Y}) {
        Divisor up = pullback(*C, D, cv);
        CHECK(up.degree() == (cv == CurveName::Y ? 4 : 2) * D.degree());
        CHECK(pushforward(*C, up, CurveName::X) == D.scaled(cv == CurveName::Y ? 4 : 2));
      }
      CHECK(pushforward(*C, pullback(*C, D, CurveName::Y), CurveName::Y3) ==
            pullback(*C, D, CurveName::Y3).scaled(2));
    }
    CHECK_THROWS_AS(pullback(*C, Divisor(CurveName::Y1), CurveName::Y2), CurveMismatch);
  }
}

TEST_CASE("quadratic characters") {
  std::mt19937_64 rng(21);
  for (Curve* C : curves()) {
    const GF* F = C->base_ptr().get();
    for (int t = 0; t < 30; ++t) {
      FElem f = bqtest::small_felem(*C, rng);
      if (f.is_zero()) continue;
      Divisor d = divisor_of(f);
      CHECK(quadratic_character(*C, QChar::chi1, d) == 1);
      CHECK(quadratic_character(*C, QChar::chi2, d) == 1);
      CHECK(quadratic_character(*C, QChar::eta, pullback(*C, d, CurveName::Y3)) == 1);
    }
    // eta = chi_i o Nm on every place of Y3 of degree <= 2
    for (auto& P : enumerate_closed_points(*C, 2)) {
      for (auto& w : places_above(*C, CurveName::Y3, P)) {
        Divisor M = Divisor::point(CurveName::Y3, w);
        Divisor Nm = pushforward(*C, M, CurveName::X);
        int e = quadratic_character(*C, QChar::eta, M);
        CHECK(e == quadratic_character(*C, QChar::chi1, Nm));
        CHECK(e == quadratic_character(*C, QChar::chi2, Nm));
      }
      CHECK(quadratic_character(*C, QChar::eta, pullback(*C, Divisor::point(P), CurveName::Y3)) == 1);
      // splitting in Y_i agrees with squareness of the unit part of u_i
      if (!P.inf && P.y != 0) {
        auto G = C->tower().ext(P.deg);
        uint32_t ex = C->tower().emb(1, P.deg)(C->e(1));
        CHECK(chi(*C, 1, P) == (G->is_square(G->sub(P.x, ex)) ? 1 : -1));
      }
    }
    CHECK_THROWS_AS(quadratic_character(*C, QChar::eta, Divisor(CurveName::X)), CurveMismatch);
    (void)F;
  }
}

TEST_CASE("pic_reduce is invariant under principal divisors") {
  std::mt19937_64 rng(8);
  for (Curve* C : curves()) {
    for (int t = 0; t < 10; ++t) {
      Divisor D = random_divisor(*C, CurveName::X, rng, 3, -2, 2);
      FElem f = bqtest::small_felem(*C, rng);
      if (f.is_zero()) continue;
      CHECK(pic_reduce(*C, D + divisor_of(f)) == pic_reduce(*C, D));
      CHECK(pic_reduce(*C, pic_divisor(*C, pic_reduce(*C, D))) == pic_reduce(*C, D));
    }
  }
  Curve& C = *curves()[0];
  for (int t = 0; t < 6; ++t) {
    Divisor D = random_divisor(C, CurveName::Y3, rng, 2, -1, 2);
    TowerElement f = bqtest::small_tower(C, Level::K3, rng);
    if (f.is_zero()) continue;
    CHECK(pic_reduce(C, D + divisor_of(f)) == pic_reduce(C, D));
  }
}

TEST_CASE("Picard quotients of the covers have order 4") {
  for (Curve* C : {curves()[0], curves()[1], curves()[2]}) {
    for (int i = 1; i <= 3; ++i) {
      CurveName cv = cover_curve(i);
      auto reps = pic_quotient_reps(*C, i);
      MESSAGE("q=" << C->q() << " i=" << i << " |Pic(Y_i)/f*Pic(X)| = " << reps.size());
      CHECK(reps.size() == 4);
      CHECK(reps[0].degree == 0);
      CHECK(reps[0].place == base_place(*C, cv));
      // distinct cosets: no difference lies in f^* Pic(X)
      for (size_t a = 0; a < reps.size(); ++a)
        for (size_t b = a + 1; b < reps.size(); ++b) {
          Divisor diff = pic_divisor(*C, reps[a]) - pic_divisor(*C, reps[b]);
          if (diff.degree() % 2) continue;
          bool in_image = false;
          for (auto& P : rational_points(*C)) {
            Divisor h = pullback(*C, Divisor::point(closed_point(*C, P)) - Divisor::point(ClosedPoint::origin()), cv);
            Divisor O2 = pullback(*C, Divisor::point(ClosedPoint::origin(), diff.degree() / 2), cv);
            if (is_principal(*C, diff - h - O2)) in_image = true;
          }
          CHECK_FALSE(in_image);
        }
    }
    auto r0 = pic_quotient_reps(*C, 0, 2);
    CHECK(r0.size() == 5);
    for (size_t k = 0; k < r0.size(); ++k) CHECK(r0[k].degree == static_cast<int>(k) - 2);
  }
}
