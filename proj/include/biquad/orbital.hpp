#pragma once

#include <gmpxx.h>

#include <map>

#include "biquad/divisor.hpp"
#include "biquad/quaternion.hpp"

namespace bq {

struct NotInDomain : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct SearchBoundExceeded : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct BadEpsilon : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Finite sum of c_n z^n with z = q^(2s).
struct LaurentPoly {
  std::map<int, mpq_class> c;

  static LaurentPoly one() { return monomial(0); }
  static LaurentPoly monomial(int n, const mpq_class& v = 1);

  void add(int n, const mpq_class& v);
  bool is_zero() const { return c.empty(); }
  mpq_class coef(int n) const;
  LaurentPoly operator+(const LaurentPoly& o) const;
  LaurentPoly operator*(const LaurentPoly& o) const;
  LaurentPoly scaled(const mpq_class& v) const;
  // z -> 1/z, i.e. s -> -s.
  LaurentPoly reflected() const;
  bool integral() const;
  bool operator==(const LaurentPoly& o) const { return c == o.c; }
  // {"n": c_n}; integers as numbers, other rationals as "p/q".
  nlohmann::json to_json() const;
  std::string str() const;
};

nlohmann::json rational_json(const mpq_class& v);

// Finite Q-combination of the basis functions f_D.
struct HeckeTerm {
  mpq_class coef;
  Divisor D;
};
using HeckeElement = std::vector<HeckeTerm>;

using K3Global = K3Elt<FElem>;

TowerElement to_tower(const K3Global& z);
K3Global k3_of(const Curve& C, const TowerElement& z);

struct OrbitalInstance {
  K3Global xi;
  Divisor D;
  DualCosetMap<FElem> gamma;
};

// Tr xi = 1 and div(xi) + f3^* D >= 0.
bool in_A_D(const Curve& C, const K3Global& xi, const Divisor& D);
// All of A_D(k), as 1/2 + b s3 with b running over L(D + P1 + P2 - 2 O).
std::vector<K3Global> enumerate_A_D(const Curve& C, const Divisor& D);
OrbitalInstance make_instance(const Curve& C, const K3Global& xi, const Divisor& D);

// div(xi) + f3^* D on Y3.
Divisor xi_divisor(const Curve& C, const OrbitalInstance& inst);
// Sum over ordered decompositions Theta1 + Theta2 = D_xi of eta(Theta1) z^(deg Theta1 - deg D).
LaurentPoly orbital_route_split(const Curve& C, const OrbitalInstance& inst);
// Sum over normalized triples (0, E2, E3) of z^(deg E2) eta(E3).
LaurentPoly orbital_route_adelic(const Curve& C, const OrbitalInstance& inst);

LaurentPoly j_total(const Curve& C, const Divisor& D);
LaurentPoly j_total(const Curve& C, const HeckeElement& f);
// sum_n c_n (2n)^r.
mpq_class j_derivative(const LaurentPoly& j, int r);
mpq_class j_derivative(const Curve& C, const HeckeElement& f, int r);

// Local factor |eps|_x^(-2s) of the unit-element orbital integral, by direct
// summation over the local torus double cosets.
LaurentPoly local_orbital_unit(const Curve& C, const ClosedPoint& x, const TowerElement& eps);

// Pair with M1 = (0 u1; 1 0) and inv = 1/2.
EmbeddingPair<FElem> canonical_optimal_pair(const Curve& C);
// Pair with M1 = (0 u1; 1 0) and M2 = (a (u2 - a^2)/c; c -a).
EmbeddingPair<FElem> pair_from_entries(const Curve& C, const FElem& a, const FElem& c);
// Whether some lattice at x is stable under alpha_1(O_1) and alpha_2(O_2).
bool locally_optimal(const Curve& C, const EmbeddingPair<FElem>& p, const ClosedPoint& x);
// Whether inv(p) is integral at the places above x.
bool xi_integral_at(const Curve& C, const EmbeddingPair<FElem>& p, const ClosedPoint& x);
// Closed points where M1, M2 have poles or u1, u2 are not units.
std::vector<ClosedPoint> optimality_support(const EmbeddingPair<FElem>& p);
bool is_optimal_pair(const Curve& C, const EmbeddingPair<FElem>& p, bool check_degree_bound = true);

// {D, A_D_size, per_xi: [{xi, routeA, routeB, equal}], j_total, j_derivatives}.
nlohmann::json orbital_table_json(const Curve& C, const Divisor& D, const std::vector<int>& rs = {0, 1, 2, 3, 4});

}  // namespace bq
