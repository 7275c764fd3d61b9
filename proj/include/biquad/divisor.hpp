#pragma once

#include <map>

#include "biquad/points.hpp"
#include "biquad/tower.hpp"

namespace bq {

struct CurveMismatch : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct ZeroElement : std::runtime_error {
  ZeroElement() : std::runtime_error("divisor of zero") {}
};

enum class CurveName { X, Y1, Y2, Y3, Y };
const char* curve_name(CurveName c);
CurveName curve_from_name(const std::string& s);
// 1, 2, 3 for Y1, Y2, Y3; 0 otherwise.
int cover_index(CurveName c);
CurveName cover_curve(int i);

// Closed point of X or of a cover. On Y_i, a is the branch of s_i: +1/-1
// relative to the canonical root of the leading coefficient of u_i (split
// base point) or 0 (inert). On Y, (a, b) is the lexicographically largest
// sign pair in the Frobenius orbit of branches of (s_1, s_2).
struct Place {
  ClosedPoint base;
  int8_t a = 0, b = 0;
  int deg = 1;
  auto operator<=>(const Place&) const = default;
  static Place of(const ClosedPoint& p) { return Place{p, 0, 0, p.deg}; }
};

struct Divisor {
  CurveName curve = CurveName::X;
  std::map<Place, int> m;

  Divisor() = default;
  explicit Divisor(CurveName c) : curve(c) {}
  static Divisor point(CurveName c, const Place& p, int n = 1);
  static Divisor point(const ClosedPoint& p, int n = 1) { return point(CurveName::X, Place::of(p), n); }

  void add(const Place& p, int n);
  int degree() const;
  bool effective() const;
  bool is_zero() const { return m.empty(); }
  int mult(const Place& p) const;
  Divisor operator+(const Divisor& o) const;
  Divisor operator-(const Divisor& o) const;
  Divisor operator-() const { return scaled(-1); }
  Divisor scaled(int k) const;
  bool operator==(const Divisor& o) const { return curve == o.curve && m == o.m; }
  // Pointwise max / min with another divisor.
  Divisor max_with(const Divisor& o) const;
  Divisor min_with(const Divisor& o) const;
};

// Splitting data of P in the covers (cached per curve).
CoverData cover_data(const Curve& C, const ClosedPoint& P);
// Canonical root r_i of lead[i-1], embedded into the field of degree n
// (n divisible by deg P, and by 2 deg P when chi_i = -1).
uint32_t cover_root(const Curve& C, const ClosedPoint& P, int i, uint32_t n);

// chi_i(P) for i = 1, 2, 3: +1 iff P splits in Y_i.
int chi(const Curve& C, int i, const ClosedPoint& P);
std::vector<Place> places_above(const Curve& C, CurveName cover, const ClosedPoint& P);
// Image of a place of Y (or Y_i) on Y_j (or X).
Place image_place(const Curve& C, CurveName from, const Place& w, CurveName to);

struct PlaceChart {
  Chart base;
  std::array<Series, 3> s;
  std::array<bool, 3> has{};
};
PlaceChart make_place_chart(const Curve& C, CurveName cv, const Place& w, int prec);
Series expand(const TowerElement& z, const PlaceChart& ch);
int valuation(const Curve& C, const TowerElement& z, CurveName cv, const Place& w);
uint32_t leading_coefficient(const Curve& C, const TowerElement& z, CurveName cv, const Place& w);

// Principal divisor of an element of F (on X) or K_i (on Y_i).
Divisor divisor_of(const TowerElement& z);
Divisor divisor_of(const FElem& g);

Divisor pullback(const Curve& C, const Divisor& D, CurveName target);
Divisor pushforward(const Curve& C, const Divisor& D, CurveName target);

enum class QChar { chi1, chi2, eta };
int quadratic_character(const Curve& C, QChar which, const Divisor& D);
// eta(w) for a place of Y3, decided by counting the places of Y above it.
int eta(const Curve& C, const Place& w);

// Index of P in the canonical order of closed points of its degree.
int point_index(const Curve& C, const ClosedPoint& P);
// {degree, index, x_minpoly, branch} or "infinity"; covers add the sheet signs.
nlohmann::json place_json(const Curve& C, CurveName cv, const Place& w);
// {curve, degree, terms: [{point, mult}]}.
nlohmann::json divisor_json(const Curve& C, const Divisor& D);

}  // namespace bq
