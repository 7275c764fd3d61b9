#pragma once

#include <climits>
#include <stdexcept>
#include <vector>

#include "biquad/poly.hpp"

namespace bq {

struct PrecisionLoss : std::runtime_error {
  PrecisionLoss() : std::runtime_error("series precision exhausted") {}
};

// Truncated Laurent series over a GF, known modulo t^prec. c[i] is the
// coefficient of t^(lo+i); coefficients past the end of c and below prec are
// zero. lo is the exponent of the first nonzero coefficient, or lo == prec
// when the series is zero to the known precision. prec == kExact marks an
// exact (finite) series.
class Series {
 public:
  static constexpr int kExact = 1 << 28;

  Series() = default;
  Series(const GF* f, int lo, int prec, std::vector<uint32_t> coeffs);
  static Series zero(const GF* f, int prec) { return Series(f, prec, prec, {}); }
  static Series exact_poly(const Poly& p) { return Series(p.F, 0, kExact, p.c); }
  static Series constant(const GF* f, uint32_t a, int prec);
  static Series monomial(const GF* f, uint32_t a, int e, int prec);

  const GF* F = nullptr;
  int lo = 0;
  int prec = 0;
  std::vector<uint32_t> c;

  bool zero_to_prec() const { return c.empty(); }
  // Valuation; throws PrecisionLoss when zero to the known precision.
  int val() const;
  uint32_t lead() const;
  // Coefficient of t^e; throws PrecisionLoss for e >= prec.
  uint32_t coef(int e) const;

  Series operator+(const Series& o) const;
  Series operator-(const Series& o) const;
  Series operator-() const;
  Series operator*(const Series& o) const;
  Series scale(uint32_t a) const;
  Series shift(int k) const;  // multiply by t^k
  Series inv() const;  // requires finite precision
  // Square root t^(v/2) * sqrt(unit) whose leading coefficient is root;
  // requires even valuation and root^2 == lead().
  Series sqrt(uint32_t root) const;
  Series truncate(int new_prec) const;

 private:
  void normalize();
};

Series operator/(const Series& a, const Series& b);
// Evaluate p (coefficients in the series field) at s.
Series eval(const Poly& p, const Series& s);

}  // namespace bq
