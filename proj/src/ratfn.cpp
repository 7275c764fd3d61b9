#include "biquad/ratfn.hpp"

#include <climits>

namespace bq {

RatFn::RatFn(const Poly& n, const Poly& d) {
  if (d.is_zero()) throw DivisionByZero();
  const GF* F = d.F;
  if (n.is_zero()) {
    num = Poly(F);
    den = Poly::constant(F, 1);
    return;
  }
  Poly g = gcd(n, d);
  num = n / g;
  den = d / g;
  uint32_t il = F->inv(den.lc());
  num = num.scale(il);
  den = den.scale(il);
}

RatFn RatFn::operator+(const RatFn& o) const {
  if (den == o.den) return RatFn(num + o.num, den);
  return RatFn(num * o.den + o.num * den, den * o.den);
}

RatFn RatFn::operator-() const {
  RatFn r = *this;
  r.num = -r.num;
  return r;
}

RatFn RatFn::operator-(const RatFn& o) const { return *this + (-o); }

RatFn RatFn::operator*(const RatFn& o) const {
  if (is_zero() || o.is_zero()) return RatFn(field());
  return RatFn(num * o.num, den * o.den);
}

RatFn RatFn::inv() const {
  if (is_zero()) throw DivisionByZero();
  return RatFn(den, num);
}

RatFn RatFn::operator/(const RatFn& o) const { return *this * o.inv(); }

RatFn RatFn::scale(uint32_t a) const {
  if (a == 0) return RatFn(field());
  RatFn r = *this;
  r.num = r.num.scale(a);
  return r;
}

int RatFn::degree() const { return is_zero() ? INT_MIN : num.deg() - den.deg(); }

}  // namespace bq
