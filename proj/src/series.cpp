#include "biquad/series.hpp"

#include <algorithm>

namespace bq {

namespace {

int clamp_prec(int p) { return p >= Series::kExact / 2 ? Series::kExact : p; }

}  // namespace

Series::Series(const GF* f, int lo_, int prec_, std::vector<uint32_t> coeffs)
    : F(f), lo(lo_), prec(clamp_prec(prec_)), c(std::move(coeffs)) {
  if (lo >= prec) {
    lo = prec;
    c.clear();
  }
  if (static_cast<long>(c.size()) > static_cast<long>(prec) - lo) c.resize(prec - lo);
  normalize();
}

Series Series::constant(const GF* f, uint32_t a, int prec) {
  if (prec <= 0) return zero(f, prec);
  return Series(f, 0, prec, {a});
}

Series Series::monomial(const GF* f, uint32_t a, int e, int prec) {
  if (prec <= e) return zero(f, prec);
  return Series(f, e, prec, {a});
}

void Series::normalize() {
  size_t k = 0;
  while (k < c.size() && c[k] == 0) ++k;
  if (k == c.size()) {
    c.clear();
    lo = prec;
    return;
  }
  if (k) {
    c.erase(c.begin(), c.begin() + static_cast<long>(k));
    lo += static_cast<int>(k);
  }
  while (!c.empty() && c.back() == 0) c.pop_back();
}

int Series::val() const {
  if (c.empty()) throw PrecisionLoss();
  return lo;
}

uint32_t Series::lead() const {
  if (c.empty()) throw PrecisionLoss();
  return c[0];
}

uint32_t Series::coef(int e) const {
  if (e >= prec) throw PrecisionLoss();
  if (e < lo || e - lo >= static_cast<int>(c.size())) return 0;
  return c[e - lo];
}

Series Series::operator+(const Series& o) const {
  int p = std::min(prec, o.prec);
  int l = std::min(lo, o.lo);
  if (l >= p) return zero(F, p);
  long end = l;
  if (!c.empty()) end = std::max(end, lo + static_cast<long>(c.size()));
  if (!o.c.empty()) end = std::max(end, o.lo + static_cast<long>(o.c.size()));
  int hi = static_cast<int>(std::min<long>(p, end));
  std::vector<uint32_t> r(std::max(0, hi - l), 0);
  for (int e = l; e < hi; ++e) r[e - l] = F->add(coef(e), o.coef(e));
  return Series(F, l, p, std::move(r));
}

Series Series::operator-() const {
  Series r = *this;
  for (auto& v : r.c) v = F->neg(v);
  return r;
}

Series Series::operator-(const Series& o) const { return *this + (-o); }

Series Series::operator*(const Series& o) const {
  int p = std::min(prec + o.lo, o.prec + lo);
  int l = lo + o.lo;
  if (l >= p) return zero(F, p);
  long n = std::min<long>(static_cast<long>(p) - l, static_cast<long>(c.size() + o.c.size()));
  std::vector<uint32_t> r(n, 0);
  for (long i = 0; i < static_cast<long>(c.size()) && i < n; ++i) {
    if (!c[i]) continue;
    for (long j = 0; j < static_cast<long>(o.c.size()) && i + j < n; ++j)
      if (o.c[j]) r[i + j] = F->add(r[i + j], F->mul(c[i], o.c[j]));
  }
  return Series(F, l, p, std::move(r));
}

Series Series::scale(uint32_t a) const {
  if (a == 0) return zero(F, prec);
  Series r = *this;
  for (auto& v : r.c) v = F->mul(v, a);
  return r;
}

Series Series::shift(int k) const {
  Series r = *this;
  r.lo += k;
  if (r.prec != kExact) r.prec += k;
  return r;
}

Series Series::inv() const {
  int v = val();
  if (prec == kExact && c.size() == 1) return Series(F, -v, kExact, {F->inv(c[0])});
  if (prec == kExact) throw std::logic_error("Series::inv: exact series needs a precision");
  int n = prec - v;
  std::vector<uint32_t> r(n, 0);
  uint32_t i0 = F->inv(c[0]);
  r[0] = i0;
  for (int k = 1; k < n; ++k) {
    uint32_t s = 0;
    for (int j = 1; j <= k && j < static_cast<int>(c.size()); ++j)
      if (c[j] && r[k - j]) s = F->add(s, F->mul(c[j], r[k - j]));
    r[k] = F->neg(F->mul(s, i0));
  }
  return Series(F, -v, -v + n, std::move(r));
}

Series Series::sqrt(uint32_t root) const {
  int v = val();
  if (v % 2) throw std::domain_error("Series::sqrt: odd valuation");
  if (F->mul(root, root) != c[0]) throw std::domain_error("Series::sqrt: bad leading root");
  if (prec == kExact) throw std::logic_error("Series::sqrt: exact series needs a precision");
  int n = prec - v;
  std::vector<uint32_t> r(n, 0);
  r[0] = root;
  uint32_t inv2r = F->inv(F->add(root, root));
  for (int k = 1; k < n; ++k) {
    uint32_t s = k < static_cast<int>(c.size()) ? c[k] : 0;
    for (int j = 1; j < k; ++j)
      if (r[j] && r[k - j]) s = F->sub(s, F->mul(r[j], r[k - j]));
    r[k] = F->mul(s, inv2r);
  }
  return Series(F, v / 2, v / 2 + n, std::move(r));
}

Series Series::truncate(int new_prec) const {
  if (new_prec >= prec) return *this;
  return Series(F, lo, new_prec, c);
}

Series operator/(const Series& a, const Series& b) { return a * b.inv(); }

Series eval(const Poly& p, const Series& s) {
  Series r = Series::zero(s.F, Series::kExact);
  for (size_t i = p.c.size(); i-- > 0;) r = r * s + Series::constant(s.F, p.c[i], Series::kExact);
  return r;
}

}  // namespace bq
