#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "biquad/gf.hpp"

namespace bq {

class Embedding;

// Dense univariate polynomial over a GF, coefficients low degree first,
// no trailing zeros.
class Poly {
 public:
  Poly() = default;
  explicit Poly(const GF* f) : F(f) {}
  Poly(const GF* f, std::vector<uint32_t> coeffs) : F(f), c(std::move(coeffs)) { trim(); }
  static Poly constant(const GF* f, uint32_t a) { return Poly(f, {a}); }
  static Poly x(const GF* f) { return Poly(f, {0, 1}); }
  // x - a
  static Poly linear(const GF* f, uint32_t a) { return Poly(f, {f->neg(a), 1}); }

  const GF* F = nullptr;
  std::vector<uint32_t> c;

  int deg() const { return static_cast<int>(c.size()) - 1; }
  bool is_zero() const { return c.empty(); }
  bool is_one() const { return c.size() == 1 && c[0] == 1; }
  uint32_t lc() const { return c.empty() ? 0 : c.back(); }
  uint32_t coef(int i) const { return i >= 0 && i < static_cast<int>(c.size()) ? c[i] : 0; }
  void trim() {
    while (!c.empty() && c.back() == 0) c.pop_back();
  }

  Poly operator+(const Poly& o) const;
  Poly operator-(const Poly& o) const;
  Poly operator-() const;
  Poly operator*(const Poly& o) const;
  Poly scale(uint32_t a) const;
  Poly shift(int k) const;  // multiply by x^k, k >= 0
  bool operator==(const Poly& o) const { return c == o.c; }
  bool operator!=(const Poly& o) const { return c != o.c; }
  bool operator<(const Poly& o) const;

  uint32_t eval(uint32_t a) const;
  Poly monic() const;
  Poly derivative() const;
  // Apply a field embedding to every coefficient.
  Poly mapped(const Embedding& e) const;
};

std::pair<Poly, Poly> divmod(const Poly& a, const Poly& b);
Poly operator%(const Poly& a, const Poly& b);
Poly operator/(const Poly& a, const Poly& b);
Poly gcd(const Poly& a, const Poly& b);
// Returns g = gcd(a, b) monic, with s a + t b = g.
Poly xgcd(const Poly& a, const Poly& b, Poly& s, Poly& t);
Poly powmod(const Poly& base, uint64_t e, const Poly& mod);
Poly pow(const Poly& base, unsigned e);

struct Factor {
  Poly p;
  int mult;
};

// Factorization into monic irreducibles (Cantor-Zassenhaus, odd q), sorted by
// (degree, coefficients). The input must be nonzero; the leading coefficient is dropped.
std::vector<Factor> factor(const Poly& f);
bool is_irreducible(const Poly& f);
// Roots of f in its own coefficient field, sorted, without multiplicity.
std::vector<uint32_t> roots(const Poly& f);

}  // namespace bq
