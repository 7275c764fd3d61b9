#include "biquad/felem.hpp"

namespace bq {

FElem FElem::constant(const Curve* c, const GF* s, uint32_t v) {
  return FElem(c, RatFn::constant(s, v), RatFn(s));
}

FElem FElem::x(const Curve* c, const GF* s) { return FElem(c, RatFn(Poly::x(s)), RatFn(s)); }

FElem FElem::y(const Curve* c, const GF* s) { return FElem(c, RatFn(s), RatFn::constant(s, 1)); }

FElem FElem::u(const Curve* c, const GF* s, int i) {
  if (i == 3) return u(c, s, 1) * u(c, s, 2);
  uint32_t ei = c->embed_base(c->e(i), s);
  return FElem(c, RatFn(Poly::linear(s, ei)), RatFn(s));
}

FElem FElem::operator*(const FElem& o) const {
  RatFn f(C->cubic(S));
  return FElem(C, a * o.a + b * o.b * f, a * o.b + b * o.a);
}

RatFn FElem::norm() const {
  RatFn f(C->cubic(S));
  return a * a - b * b * f;
}

FElem FElem::inv() const {
  if (is_zero()) throw DivisionByZero();
  RatFn n = norm().inv();
  return FElem(C, a * n, -(b * n));
}

namespace {

std::string poly_str(const Poly& p) {
  if (p.is_zero()) return "0";
  std::string s;
  for (int i = p.deg(); i >= 0; --i) {
    if (!p.c[i]) continue;
    if (!s.empty()) s += " + ";
    std::string cf = p.F->str(p.c[i]);
    if (i == 0)
      s += cf;
    else {
      if (p.c[i] != 1) s += cf + "*";
      s += i == 1 ? "x" : "x^" + std::to_string(i);
    }
  }
  return s;
}

std::string rat_str(const RatFn& r) {
  if (r.is_poly()) return poly_str(r.num);
  return "(" + poly_str(r.num) + ")/(" + poly_str(r.den) + ")";
}

}  // namespace

std::string FElem::str() const {
  if (b.is_zero()) return rat_str(a);
  std::string yb = "(" + rat_str(b) + ")*y";
  if (a.is_zero()) return yb;
  return rat_str(a) + " + " + yb;
}

}  // namespace bq
