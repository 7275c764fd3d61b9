#pragma once

#include "biquad/rr.hpp"

namespace bq {

// Class in Pic(X) or Pic(Y_i). On X the class is deg(D) O + (R - O) with R a
// rational point; on Y_i it is (deg D - 1) w0 + R for the base place w0 (the
// first rational place) and a rational place R.
struct PicElement {
  CurveName curve = CurveName::X;
  int degree = 0;
  GeoPt point{1, true, 0, 0};
  Place place{};
  bool operator==(const PicElement&) const = default;
};

PicElement pic_reduce(const Curve& C, const Divisor& D);
// Divisor (deg - 1) base + R representing the class.
Divisor pic_divisor(const Curve& C, const PicElement& e);
// First rational place of Y_i, used as base point of Pic(Y_i).
Place base_place(const Curve& C, CurveName cv);
// Rational places of Y_i in canonical order.
std::vector<Place> rational_places(const Curve& C, CurveName cv);
// Representatives of Pic(Y_i)/f_i^* Pic(X) (degrees 0 and 1); for i = 0 the
// classes n O of Pic(X) x Pic(X)/Delta with |n| <= window.
std::vector<PicElement> pic_quotient_reps(const Curve& C, int i, int window = 2);
// D ~ 0 on X or Y_i.
bool is_principal(const Curve& C, const Divisor& D);
nlohmann::json pic_json(const Curve& C, const PicElement& e);

}  // namespace bq
