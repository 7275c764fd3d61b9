#pragma once

#include "biquad/felem.hpp"
#include "biquad/series.hpp"

namespace bq {

// Local expansion of x and y at a geometric point in the local parameter
// t = x - x0 (y0 != 0), t = y (2-torsion) or t = x/y (at O).
struct Chart {
  enum class Kind { Generic, TwoTorsion, Infinity };
  GFPtr G;
  GeoPt P;
  Kind kind = Kind::Generic;
  int prec = 0;
  Series x, y;
};

Chart make_chart(const Curve& C, const GeoPt& P, int prec);
// Same point with coordinates in the tower field of degree m (n | m).
GeoPt lift(const Curve& C, const GeoPt& P, uint32_t m);
// Expansion of g (over S, deg S | deg G) at the chart.
Series expand(const FElem& g, const Chart& ch);
// Exact valuation of a nonzero g at P (precision raised until decided).
int valuation(const FElem& g, const GeoPt& P);
// Leading coefficient of g at P, in the field of P.
uint32_t leading_coefficient(const FElem& g, const GeoPt& P);

// Smallest degree of a field containing the coordinates.
uint32_t field_degree(const Curve& C, const GeoPt& P);
ClosedPoint closed_point(const Curve& C, const GeoPt& P);
// q-power Frobenius applied j times.
GeoPt frobenius(const Curve& C, const GeoPt& P, uint32_t j);
bool on_curve(const Curve& C, const GeoPt& P);

std::vector<ClosedPoint> closed_points_of_degree(const Curve& C, int d);
// All closed points of degree <= max_degree; BoundExceeded beyond the configured bound.
std::vector<ClosedPoint> enumerate_closed_points(const Curve& C, int max_degree);
// Closed points above the roots of an irreducible polynomial over F_q.
std::vector<ClosedPoint> points_above(const Curve& C, const Poly& pi);
// #X(F_{q^n}) by direct enumeration.
uint64_t count_points(const Curve& C, uint32_t n);
// The 2-torsion point (e_i, 0).
ClosedPoint two_torsion(const Curve& C, int i);

// Group law with identity O, points in a common field.
GeoPt point_neg(const Curve& C, const GeoPt& P);
GeoPt point_add(const Curve& C, const GeoPt& P, const GeoPt& Q);
GeoPt point_mul(const Curve& C, const GeoPt& P, int64_t n);
// Sum of the Frobenius conjugates of a closed point, as a rational point.
GeoPt trace_point(const Curve& C, const ClosedPoint& P);
// Rational points X(F_q) as degree-1 points in canonical order.
std::vector<GeoPt> rational_points(const Curve& C);

}  // namespace bq
