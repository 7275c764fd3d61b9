#pragma once

#include <optional>
#include <stdexcept>

#include "biquad/felem.hpp"
#include "biquad/tower.hpp"

namespace bq {

struct SingularMap : std::runtime_error {
  SingularMap() : std::runtime_error("dual coset map is not invertible") {}
};
struct NonRegular : std::runtime_error {
  NonRegular() : std::runtime_error("invariant is not a unit") {}
};

// Element of a finite field given by its table.
struct Fq {
  const GF* F = nullptr;
  uint32_t v = 0;
  Fq operator+(const Fq& o) const { return {F, F->add(v, o.v)}; }
  Fq operator-(const Fq& o) const { return {F, F->sub(v, o.v)}; }
  Fq operator-() const { return {F, F->neg(v)}; }
  Fq operator*(const Fq& o) const { return {F, F->mul(v, o.v)}; }
  Fq operator/(const Fq& o) const { return {F, F->div(v, o.v)}; }
  bool operator==(const Fq& o) const { return v == o.v; }
  bool is_zero() const { return v == 0; }
  Fq inv() const { return {F, F->inv(v)}; }
  std::string str() const { return F->str(v); }
};

// Integer constants in the field of a given element.
inline Fq field_int(const Fq& like, int64_t n) { return {like.F, like.F->from_int(n)}; }
inline FElem field_int(const FElem& like, int64_t n) { return FElem::from_int(like.C, like.S, n); }

template <class E>
struct Mat2 {
  E a, b, c, d;
  Mat2 operator*(const Mat2& o) const {
    return {a * o.a + b * o.c, a * o.b + b * o.d, c * o.a + d * o.c, c * o.b + d * o.d};
  }
  Mat2 operator+(const Mat2& o) const { return {a + o.a, b + o.b, c + o.c, d + o.d}; }
  Mat2 scale(const E& k) const { return {k * a, k * b, k * c, k * d}; }
  E det() const { return a * d - b * c; }
  E trace() const { return a + d; }
  // Main involution (adjugate).
  Mat2 iota() const { return {d, -b, -c, a}; }
  Mat2 inv() const {
    E id = det().inv();
    return iota().scale(id);
  }
  bool operator==(const Mat2& o) const { return a == o.a && b == o.b && c == o.c && d == o.d; }
  static Mat2 identity(const E& like) { return {field_int(like, 1), field_int(like, 0), field_int(like, 0), field_int(like, 1)}; }
};

// Element a + b s3 of K3 = F[s3]/(s3^2 - d3).
template <class E>
struct K3Elt {
  E a, b, d3;
  K3Elt operator+(const K3Elt& o) const { return {a + o.a, b + o.b, d3}; }
  K3Elt operator-(const K3Elt& o) const { return {a - o.a, b - o.b, d3}; }
  K3Elt operator*(const K3Elt& o) const { return {a * o.a + b * o.b * d3, a * o.b + b * o.a, d3}; }
  K3Elt scale(const E& k) const { return {k * a, k * b, d3}; }
  K3Elt sigma() const { return {a, -b, d3}; }
  E norm() const { return a * a - b * b * d3; }
  E trace() const { return a + a; }
  bool is_zero() const { return a.is_zero() && b.is_zero(); }
  bool is_unit() const { return !norm().is_zero(); }
  K3Elt inv() const {
    E n = norm();
    if (n.is_zero()) throw DivisionByZero();
    E ni = n.inv();
    return {a * ni, -(b * ni), d3};
  }
  K3Elt operator/(const K3Elt& o) const { return *this * o.inv(); }
  bool operator==(const K3Elt& o) const { return a == o.a && b == o.b; }
  static K3Elt constant(const E& v, const E& d3) { return {v, field_int(v, 0), d3}; }
};

template <class E>
struct EmbeddingPair {
  E d1, d2;  // alg_i = F[s_i]/(s_i^2 - d_i)
  Mat2<E> m1, m2;  // images of s1, s2
};

template <class E>
struct Invariant {
  K3Elt<E> xi;
  bool regular = false;
};

// phi(z) = (Tr(g1 z), Tr(g2 z)) from K3 to K0 = F + F.
template <class E>
struct DualCosetMap {
  K3Elt<E> g1, g2;
};

namespace detail {

// Product of basis vectors e_i e_j of K as (coefficient, index).
template <class E>
std::pair<E, int> basis_product(int i, int j, const E& d1, const E& d2) {
  E one = field_int(d1, 1);
  static const int idx[4][4] = {{0, 1, 2, 3}, {1, 0, 3, 2}, {2, 3, 0, 1}, {3, 2, 1, 0}};
  // s1 s1 = d1, s2 s2 = d2, s1 s2 = s3, s2 s1 = s3, s1 s3 = d1 s2, s3 s1 = d1 s2,
  // s2 s3 = d2 s1, s3 s2 = d2 s1, s3 s3 = d1 d2
  E k = one;
  auto has1 = [](int t) { return t == 1 || t == 3; };
  auto has2 = [](int t) { return t == 2 || t == 3; };
  if (has1(i) && has1(j)) k = k * d1;
  if (has2(i) && has2(j)) k = k * d2;
  return {k, idx[i][j]};
}

template <class E>
Mat2<E> basis_image(const EmbeddingPair<E>& p, int i) {
  switch (i) {
    case 0: return Mat2<E>::identity(p.d1);
    case 1: return p.m1;
    case 2: return p.m2;
    default: return p.m1 * p.m2;
  }
}

}  // namespace detail

// Product in K = F[s1, s2]/(s1^2 - d1, s2^2 - d2), basis {1, s1, s2, s1 s2}.
template <class E>
std::array<E, 4> quad_mul(const std::array<E, 4>& x, const std::array<E, 4>& y, const E& d1, const E& d2) {
  E zero = field_int(d1, 0);
  std::array<E, 4> r{zero, zero, zero, zero};
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) {
      auto [k, t] = detail::basis_product(i, j, d1, d2);
      r[t] = r[t] + k * x[i] * y[j];
    }
  return r;
}

template <class E>
std::array<E, 4> quad_tau3(const std::array<E, 4>& x) {
  return {x[0], -x[1], -x[2], x[3]};
}

// alpha(x) = sum x_i alpha(e_i) with alpha(s1 s2) = alpha_1(s1) alpha_2(s2).
template <class E>
Mat2<E> alpha(const EmbeddingPair<E>& p, const std::array<E, 4>& x) {
  Mat2<E> r = detail::basis_image(p, 0).scale(x[0]);
  for (int i = 1; i < 4; ++i) r = r + detail::basis_image(p, i).scale(x[i]);
  return r;
}

// Tr_{K/F}(xi x y^{tau3}) for xi = xi0 + xi1 s3, as coefficients of (xi0, xi1).
template <class E>
std::pair<E, E> trace_form_coeffs(int i, int j, const E& d1, const E& d2) {
  auto [k, t] = detail::basis_product(i, j, d1, d2);
  if (j == 1 || j == 2) k = -k;
  E four = field_int(d1, 4), zero = field_int(d1, 0);
  if (t == 0) return {four * k, zero};
  if (t == 3) return {zero, four * k * d1 * d2};
  return {zero, zero};
}

// The unique trace-1 xi in K3 with Trd(alpha(x) alpha(y)^iota) = Tr_{K/F}(xi x y^tau3).
template <class E>
Invariant<E> inv_embedding(const EmbeddingPair<E>& p) {
  std::vector<std::array<E, 3>> rows;
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) {
      Mat2<E> m = detail::basis_image(p, i) * detail::basis_image(p, j).iota();
      auto [c0, c1] = trace_form_coeffs(i, j, p.d1, p.d2);
      rows.push_back({c0, c1, m.trace()});
    }
  std::optional<std::pair<E, E>> sol;
  for (size_t r = 0; r < rows.size() && !sol; ++r)
    for (size_t s = r + 1; s < rows.size() && !sol; ++s) {
      E det = rows[r][0] * rows[s][1] - rows[r][1] * rows[s][0];
      if (det.is_zero()) continue;
      E x0 = (rows[r][2] * rows[s][1] - rows[r][1] * rows[s][2]) / det;
      E x1 = (rows[r][0] * rows[s][2] - rows[r][2] * rows[s][0]) / det;
      sol = std::make_pair(x0, x1);
    }
  if (!sol) throw std::logic_error("inv_embedding: degenerate trace form");
  for (auto& r : rows)
    if (!(r[0] * sol->first + r[1] * sol->second == r[2])) throw std::logic_error("inv_embedding: inconsistent trace form");
  K3Elt<E> xi{sol->first, sol->second, p.d1 * p.d2};
  if (!(xi.trace() == field_int(p.d1, 1))) throw std::logic_error("inv_embedding: trace of xi is not 1");
  return {xi, xi.is_unit()};
}

// Dimension of alpha(K) inside M2(F).
template <class E>
int alpha_rank(const EmbeddingPair<E>& p) {
  std::vector<std::array<E, 4>> m;
  for (int i = 0; i < 4; ++i) {
    Mat2<E> a = detail::basis_image(p, i);
    m.push_back({a.a, a.b, a.c, a.d});
  }
  int rank = 0;
  for (int col = 0; col < 4 && rank < 4; ++col) {
    int piv = -1;
    for (int r = rank; r < 4; ++r)
      if (!m[r][col].is_zero()) piv = r;
    if (piv < 0) continue;
    std::swap(m[piv], m[rank]);
    for (int r = 0; r < 4; ++r) {
      if (r == rank || m[r][col].is_zero()) continue;
      E f = m[r][col] / m[rank][col];
      for (int k = 0; k < 4; ++k) m[r][k] = m[r][k] - f * m[rank][k];
    }
    ++rank;
  }
  return rank;
}

template <class E>
Invariant<E> inv_dual(const DualCosetMap<E>& phi) {
  K3Elt<E> ad = phi.g1 * phi.g2.sigma();
  K3Elt<E> det = ad - phi.g1.sigma() * phi.g2;
  if (det.is_zero()) throw SingularMap();
  K3Elt<E> xi = ad / det;
  if (!(xi.trace() == field_int(xi.a, 1))) throw std::logic_error("inv_dual: trace of xi is not 1");
  return {xi, xi.is_unit()};
}

// Representative with g1 = 1 and g2^sigma / g2 = xi / (xi - 1) (Hilbert 90).
template <class E>
DualCosetMap<E> construct_gamma(const K3Elt<E>& xi) {
  if (!xi.is_unit()) throw NonRegular();
  K3Elt<E> one = K3Elt<E>::constant(field_int(xi.a, 1), xi.d3);
  K3Elt<E> beta = xi / (xi - one);
  K3Elt<E> a = beta.inv();
  K3Elt<E> s3{field_int(xi.a, 0), field_int(xi.a, 1), xi.d3};
  for (const K3Elt<E>& c : {one, s3}) {
    K3Elt<E> g2 = c + a * c.sigma();
    if (!g2.is_zero()) {
      if (!(g2.sigma() == beta * g2)) throw std::logic_error("construct_gamma: Hilbert 90 solve failed");
      return {one, g2};
    }
  }
  throw std::logic_error("construct_gamma: no Hilbert 90 solution");
}

// (b, t3) with phi2 = (t3 g1, b t3 g2) for phi1 = (g1, g2), when it exists.
template <class E>
std::optional<std::pair<E, K3Elt<E>>> torus_relation(const DualCosetMap<E>& phi1, const DualCosetMap<E>& phi2) {
  if (phi1.g1.is_zero() || phi1.g2.is_zero()) return std::nullopt;
  K3Elt<E> t3 = phi2.g1 / phi1.g1;
  K3Elt<E> b = phi2.g2 / (t3 * phi1.g2);
  if (!b.b.is_zero()) return std::nullopt;
  return std::make_pair(b.a, t3);
}

// The pair (alpha_0, alpha_3) in End_F(K0) = M2(F) attached to phi: alpha_0 is
// the diagonal action of K0 (s1 = (1, -1)), alpha_3(z) = phi m_z phi^{-1}.
template <class E>
EmbeddingPair<E> dual_pair(const DualCosetMap<E>& phi) {
  E one = field_int(phi.g1.a, 1), zero = field_int(phi.g1.a, 0);
  K3Elt<E> s3{zero, one, phi.g1.d3};
  Mat2<E> P{phi.g1.trace(), (phi.g1 * s3).trace(), phi.g2.trace(), (phi.g2 * s3).trace()};
  if (P.det().is_zero()) throw SingularMap();
  Mat2<E> ms3{zero, phi.g1.d3, one, zero};
  return {one, phi.g1.d3, Mat2<E>{one, zero, zero, -one}, P * ms3 * P.inv()};
}

enum class AlgType { split, field };
const char* alg_type_name(AlgType t);
AlgType alg_type_from_name(const std::string& s);

struct CensusClass {
  int id = 0;
  Mat2<Fq> m2;  // canonical image of s2 (the image of s1 is fixed)
  Invariant<Fq> inv;
  int rank = 0;  // dim alpha(K)
};

struct Census {
  uint32_t q0 = 0;
  AlgType t1 = AlgType::split, t2 = AlgType::split;
  Fq d1, d2;
  Mat2<Fq> m1;
  std::vector<CensusClass> classes;
  int regular_count = 0, nonregular_count = 0;
  int trace1_units = 0;  // #{xi in K3 : Tr xi = 1, xi a unit}
  bool injective = false;  // inv injective on regular classes
  bool surjective = false;  // every trace-1 unit is attained
  bool three_way = false;  // regular <=> rank 4 <=> xi unit on every class
  nlohmann::json to_json() const;
};

// GL2(F_q0)-classes of pairs of embeddings of F[s_i]/(s_i^2 - d_i) into M2(F_q0),
// d_i = 1 (split) or the least non-square (field). BoundExceeded for q0 > 9.
Census enumerate_cosets_finite(uint32_t q0, AlgType t1, AlgType t2);

}  // namespace bq
