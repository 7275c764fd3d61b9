#pragma once

#include "biquad/poly.hpp"

namespace bq {

// Element of GF(x): coprime num/den with den monic.
class RatFn {
 public:
  RatFn() = default;
  explicit RatFn(const GF* f) : num(f), den(Poly::constant(f, 1)) {}
  RatFn(const Poly& n) : num(n), den(Poly::constant(n.F, 1)) {}
  RatFn(const Poly& n, const Poly& d);
  static RatFn constant(const GF* f, uint32_t a) { return RatFn(Poly::constant(f, a)); }

  Poly num, den;

  const GF* field() const { return den.F; }
  bool is_zero() const { return num.is_zero(); }
  bool is_poly() const { return den.deg() == 0; }

  RatFn operator+(const RatFn& o) const;
  RatFn operator-(const RatFn& o) const;
  RatFn operator-() const;
  RatFn operator*(const RatFn& o) const;
  RatFn operator/(const RatFn& o) const;
  RatFn inv() const;
  RatFn scale(uint32_t a) const;
  bool operator==(const RatFn& o) const { return num == o.num && den == o.den; }
  bool operator!=(const RatFn& o) const { return !(*this == o); }
  RatFn mapped(const Embedding& e) const { return RatFn(num.mapped(e), den.mapped(e)); }
  // deg num - deg den (valuation -v_inf on P^1); zero has degree INT_MIN.
  int degree() const;
};

}  // namespace bq
