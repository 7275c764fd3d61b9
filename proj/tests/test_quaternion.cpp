#include <doctest.h>

#include <map>

#include "biquad/quaternion.hpp"
#include "helpers.hpp"

using namespace bq;

namespace {

Fq fq(const GF* F, int64_t n) { return {F, F->from_int(n)}; }

Mat2<Fq> diag(const GF* F, int64_t u, int64_t v) { return {fq(F, u), fq(F, 0), fq(F, 0), fq(F, v)}; }

// Split/split pair (diag, gamma diag gamma^-1) with s_i -> diag(1, -1).
EmbeddingPair<Fq> gamma_pair(const GF* F, const Mat2<Fq>& gamma) {
  Mat2<Fq> d = diag(F, 1, -1);
  return {fq(F, 1), fq(F, 1), d, gamma * d * gamma.inv()};
}

// Coordinates (u, v) of a + b s3 under K3 = F x F, s3 = (1, -1).
std::pair<Fq, Fq> split_coords(const K3Elt<Fq>& xi) { return {xi.a + xi.b, xi.a - xi.b}; }

// All xi in F^2 satisfying the bilinear identity on the full basis, computed
// with the multiplication of K directly.
std::vector<K3Elt<Fq>> brute_force_xi(const EmbeddingPair<Fq>& p) {
  const GF* F = p.d1.F;
  std::vector<K3Elt<Fq>> out;
  Fq zero = fq(F, 0), four = fq(F, 4);
  for (uint32_t x0 = 0; x0 < F->size(); ++x0)
    for (uint32_t x1 = 0; x1 < F->size(); ++x1) {
      std::array<Fq, 4> xi{Fq{F, x0}, zero, zero, Fq{F, x1}};
      bool ok = true;
      for (int i = 0; i < 4 && ok; ++i)
        for (int j = 0; j < 4 && ok; ++j) {
          std::array<Fq, 4> ei{zero, zero, zero, zero}, ej = ei;
          ei[i] = fq(F, 1);
          ej[j] = fq(F, 1);
          Fq lhs = (alpha(p, ei) * alpha(p, ej).iota()).trace();
          auto w = quad_mul(quad_mul(xi, ei, p.d1, p.d2), quad_tau3(ej), p.d1, p.d2);
          ok = lhs == four * w[0];
        }
      if (ok) out.push_back({Fq{F, x0}, Fq{F, x1}, p.d1 * p.d2});
    }
  return out;
}

std::array<Fq, 4> random_quad(const GF* F, std::mt19937_64& rng) {
  std::uniform_int_distribution<uint32_t> d(0, F->size() - 1);
  return {Fq{F, d(rng)}, Fq{F, d(rng)}, Fq{F, d(rng)}, Fq{F, d(rng)}};
}

Mat2<Fq> random_gl2(const GF* F, std::mt19937_64& rng) {
  std::uniform_int_distribution<uint32_t> d(0, F->size() - 1);
  while (true) {
    Mat2<Fq> g{Fq{F, d(rng)}, Fq{F, d(rng)}, Fq{F, d(rng)}, Fq{F, d(rng)}};
    if (!g.det().is_zero()) return g;
  }
}

// Tr_{K3/F}(xi x x^tau3) for x in K.
template <class E>
E nrd_form(const K3Elt<E>& xi, const std::array<E, 4>& x, const E& d1, const E& d2) {
  auto w = quad_mul(x, quad_tau3(x), d1, d2);
  K3Elt<E> w3{w[0], w[3], d1 * d2};
  return (xi * w3).trace();
}

}  // namespace

TEST_CASE("split/split invariant of gamma = (1 x; 1 1) over F7") {
  auto F = GF::get(7, 1);
  const GF* f = F.get();
  Mat2<Fq> gamma{fq(f, 1), fq(f, 2), fq(f, 1), fq(f, 1)};
  auto inv = inv_embedding(gamma_pair(f, gamma));
  auto [u, v] = split_coords(inv.xi);
  CHECK(u == fq(f, 6));
  CHECK(v == fq(f, 2));
  CHECK(inv.regular);
  for (int64_t x = 2; x < 7; ++x) {
    Mat2<Fq> g{fq(f, 1), fq(f, x), fq(f, 1), fq(f, 1)};
    auto [uu, vv] = split_coords(inv_embedding(gamma_pair(f, g)).xi);
    CHECK(uu == fq(f, 1) / fq(f, 1 - x));
    CHECK(vv == fq(f, -x) / fq(f, 1 - x));
  }
}

TEST_CASE("explicit split/split formula (ad, -bc)/(ad - bc) on random gamma") {
  std::mt19937_64 rng(4);
  for (uint32_t q : {3u, 5u, 7u}) {
    auto F = GF::get(q, 1);
    for (int t = 0; t < 40; ++t) {
      Mat2<Fq> g = random_gl2(F.get(), rng);
      auto [u, v] = split_coords(inv_embedding(gamma_pair(F.get(), g)).xi);
      Fq det = g.det();
      CHECK(u == g.a * g.d / det);
      CHECK(v == -(g.b * g.c) / det);
    }
  }
}

TEST_CASE("the six non-regular split/split classes") {
  auto F = GF::get(5, 1);
  const GF* f = F.get();
  std::vector<std::array<int, 4>> reps = {{1, 0, 0, 1}, {0, 1, 1, 0}, {1, 1, 0, 1}, {1, 0, 1, 1}, {0, 1, 1, 1}, {1, 1, 1, 0}};
  for (size_t k = 0; k < reps.size(); ++k) {
    auto& r = reps[k];
    Mat2<Fq> g{fq(f, r[0]), fq(f, r[1]), fq(f, r[2]), fq(f, r[3])};
    auto pair = gamma_pair(f, g);
    auto inv = inv_embedding(pair);
    CHECK_FALSE(inv.regular);
    CHECK(alpha_rank(pair) == (k < 2 ? 2 : 3));
  }
  auto [u, v] = split_coords(inv_embedding(gamma_pair(f, Mat2<Fq>::identity(fq(f, 1)))).xi);
  CHECK(u == fq(f, 1));
  CHECK(v == fq(f, 0));
}

TEST_CASE("nonsplit K1 = K2 = F9 in M2(F3) matches the exhaustive linear solve") {
  auto F = GF::get(3, 1);
  const GF* f = F.get();
  Fq d = fq(f, 2);  // non-square
  Mat2<Fq> m1{fq(f, 0), d, fq(f, 1), fq(f, 0)};
  int checked = 0;
  for (uint32_t a = 0; a < 3; ++a)
    for (uint32_t b = 0; b < 3; ++b)
      for (uint32_t c = 0; c < 3; ++c) {
        Fq A{f, a}, B{f, b}, Cc{f, c};
        if (!(A * A + B * Cc == d)) continue;
        EmbeddingPair<Fq> p{d, d, m1, Mat2<Fq>{A, B, Cc, -A}};
        auto sols = brute_force_xi(p);
        REQUIRE(sols.size() == 1);
        CHECK(inv_embedding(p).xi == sols[0]);
        ++checked;
      }
  CHECK(checked > 0);
}

TEST_CASE("inv satisfies the norm identity and is conjugation invariant") {
  std::mt19937_64 rng(17);
  for (uint32_t q : {3u, 5u, 7u, 9u}) {
    auto F = q == 9 ? GF::get(3, 2) : GF::get(q, 1);
    const GF* f = F.get();
    for (AlgType t1 : {AlgType::split, AlgType::field})
      for (AlgType t2 : {AlgType::split, AlgType::field}) {
        Census cs = enumerate_cosets_finite(q, t1, t2);
        for (auto& cc : cs.classes) {
          EmbeddingPair<Fq> p{cs.d1, cs.d2, cs.m1, cc.m2};
          auto x = random_quad(f, rng);
          CHECK(alpha(p, x).det() == nrd_form(cc.inv.xi, x, p.d1, p.d2));
          Mat2<Fq> g = random_gl2(f, rng);
          EmbeddingPair<Fq> pg{p.d1, p.d2, g * p.m1 * g.inv(), g * p.m2 * g.inv()};
          CHECK(inv_embedding(pg).xi == cc.inv.xi);
        }
      }
  }
}

TEST_CASE("inv is constant on diagonal double cosets") {
  std::mt19937_64 rng(23);
  auto F = GF::get(7, 1);
  const GF* f = F.get();
  std::uniform_int_distribution<int> u(1, 6);
  for (int t = 0; t < 100; ++t) {
    Mat2<Fq> g = random_gl2(f, rng);
    Mat2<Fq> g2 = diag(f, u(rng), u(rng)) * g * diag(f, u(rng), u(rng));
    CHECK(inv_embedding(gamma_pair(f, g)).xi == inv_embedding(gamma_pair(f, g2)).xi);
  }
}

TEST_CASE("coset census over F3, F5, F7, F9") {
  for (uint32_t q : {3u, 5u, 7u, 9u})
    for (AlgType t1 : {AlgType::split, AlgType::field})
      for (AlgType t2 : {AlgType::split, AlgType::field}) {
        Census cs = enumerate_cosets_finite(q, t1, t2);
        MESSAGE("q0=" << q << " " << std::string(alg_type_name(t1)) << "/" << std::string(alg_type_name(t2)) << " regular=" << cs.regular_count
                      << " nonregular=" << cs.nonregular_count);
        CHECK(cs.regular_count == cs.trace1_units);
        CHECK(cs.injective);
        CHECK(cs.surjective);
        CHECK(cs.three_way);
        bool k3_split = (t1 == t2);
        CHECK(cs.trace1_units == static_cast<int>(k3_split ? q - 2 : q));
        if (t1 == AlgType::split && t2 == AlgType::split) CHECK(cs.nonregular_count == 6);
        if (t1 != t2) CHECK(cs.nonregular_count == 0);
      }
  CHECK(enumerate_cosets_finite(3, AlgType::split, AlgType::split).regular_count == 1);
  CHECK_THROWS_AS(enumerate_cosets_finite(11, AlgType::split, AlgType::split), BoundExceeded);
}

TEST_CASE("dual picture over finite fields") {
  for (uint32_t q : {3u, 5u, 7u}) {
    auto F = GF::get(q, 1);
    const GF* f = F.get();
    uint32_t nonsq = 0;
    for (uint32_t a = 1; a < q; ++a)
      if (!f->is_square(a)) nonsq = nonsq ? nonsq : a;
    for (Fq d3 : {fq(f, 1), Fq{f, nonsq}}) {
      Fq one = fq(f, 1), zero = fq(f, 0);
      K3Elt<Fq> s3{zero, one, d3}, unit{one, zero, d3};
      CHECK(inv_dual(DualCosetMap<Fq>{unit, s3}).xi == K3Elt<Fq>{one / fq(f, 2), zero, d3});
      CHECK_THROWS_AS(inv_dual(DualCosetMap<Fq>{s3, s3}), SingularMap);
      auto g = construct_gamma(K3Elt<Fq>{one / fq(f, 2), zero, d3});
      CHECK(g.g2.a.is_zero());
      // every invertible phi with a unit invariant is torus-equivalent to construct_gamma(inv)
      std::map<std::pair<uint32_t, uint32_t>, int> per_xi;
      for (uint32_t a1 = 0; a1 < q; ++a1)
        for (uint32_t b1 = 0; b1 < q; ++b1)
          for (uint32_t a2 = 0; a2 < q; ++a2)
            for (uint32_t b2 = 0; b2 < q; ++b2) {
              DualCosetMap<Fq> phi{{Fq{f, a1}, Fq{f, b1}, d3}, {Fq{f, a2}, Fq{f, b2}, d3}};
              Invariant<Fq> inv;
              try {
                inv = inv_dual(phi);
              } catch (const SingularMap&) {
                continue;
              }
              CHECK(inv.xi.trace() == one);
              if (!inv.regular) continue;
              auto base = construct_gamma(inv.xi);
              CHECK(inv_dual(base).xi == inv.xi);
              auto rel = torus_relation(base, phi);
              REQUIRE(rel.has_value());
              CHECK(phi.g1 == rel->second * base.g1);
              CHECK(phi.g2 == (rel->second * base.g2).scale(rel->first));
              ++per_xi[{inv.xi.a.v, inv.xi.b.v}];
              // the attached (K0, K3) embedding pair has the same invariant
              auto dp = dual_pair(phi);
              auto xi2 = inv_embedding(dp).xi;
              CHECK(xi2 == inv.xi);
            }
      int units = 0;
      for (uint32_t b = 0; b < q; ++b)
        if (K3Elt<Fq>{one / fq(f, 2), Fq{f, b}, d3}.is_unit()) ++units;
      CHECK(per_xi.size() == static_cast<size_t>(units));
    }
  }
}

TEST_CASE("invariants over the global function field") {
  std::mt19937_64 rng(31);
  Curve C(bqtest::config(5, 2));
  const GF* F = C.base_ptr().get();
  FElem u1 = FElem::u(&C, F, 1), u2 = FElem::u(&C, F, 2), u3 = FElem::u(&C, F, 3);
  FElem one = FElem::from_int(&C, F, 1), zero(&C, F);
  Mat2<FElem> m1{zero, u1, one, zero};
  for (int t = 0; t < 20; ++t) {
    FElem a = bqtest::random_felem(C, rng), c = bqtest::random_felem(C, rng);
    if (c.is_zero()) continue;
    Mat2<FElem> m2{a, (u2 - a * a) / c, c, -a};
    EmbeddingPair<FElem> p{u1, u2, m1, m2};
    auto inv = inv_embedding(p);
    FElem tr = (m1 * m2).trace();
    CHECK(inv.xi.a == FElem::from_int(&C, F, 1) / FElem::from_int(&C, F, 2));
    CHECK(inv.xi.b == tr / (u3 * FElem::from_int(&C, F, 4)));
    CHECK(inv.regular == (alpha_rank(p) == 4));
    if (!inv.regular) continue;
    auto phi = construct_gamma(inv.xi);
    CHECK(inv_dual(phi).xi == inv.xi);
    TowerElement xi_t(Level::K3, {inv.xi.a, inv.xi.b});
    CHECK(trace(xi_t, Level::F) == TowerElement::constant(&C, 1));
  }
}
