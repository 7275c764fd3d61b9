#pragma once

#include "biquad/curve.hpp"
#include "biquad/ratfn.hpp"

namespace bq {

// Element a(x) + b(x) y of the function field S(X), S a field of the tower.
class FElem {
 public:
  FElem() = default;
  FElem(const Curve* c, const GF* s) : C(c), S(s), a(s), b(s) {}
  FElem(const Curve* c, const RatFn& a_, const RatFn& b_) : C(c), S(a_.field()), a(a_), b(b_) {}
  static FElem constant(const Curve* c, const GF* s, uint32_t v);
  static FElem from_int(const Curve* c, const GF* s, int64_t v) { return constant(c, s, s->from_int(v)); }
  static FElem x(const Curve* c, const GF* s);
  static FElem y(const Curve* c, const GF* s);
  // u_i = x - e_i for i = 1, 2 and u_3 = u_1 u_2.
  static FElem u(const Curve* c, const GF* s, int i);

  const Curve* C = nullptr;
  const GF* S = nullptr;
  RatFn a, b;

  bool is_zero() const { return a.is_zero() && b.is_zero(); }
  bool operator==(const FElem& o) const { return a == o.a && b == o.b; }
  bool operator!=(const FElem& o) const { return !(*this == o); }
  FElem operator+(const FElem& o) const { return FElem(C, a + o.a, b + o.b); }
  FElem operator-(const FElem& o) const { return FElem(C, a - o.a, b - o.b); }
  FElem operator-() const { return FElem(C, -a, -b); }
  FElem operator*(const FElem& o) const;
  FElem operator/(const FElem& o) const { return *this * o.inv(); }
  FElem scale(uint32_t v) const { return FElem(C, a.scale(v), b.scale(v)); }
  FElem inv() const;
  // y -> -y
  FElem conj() const { return FElem(C, a, -b); }
  // Norm to S(x): a^2 - b^2 f.
  RatFn norm() const;
  // Map coefficients along an embedding S -> G.
  FElem mapped(const Embedding& e) const { return FElem(C, a.mapped(e), b.mapped(e)); }
  std::string str() const;
};

}  // namespace bq
