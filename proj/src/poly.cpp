#include "biquad/poly.hpp"

#include <algorithm>
#include <random>
#include <stdexcept>

namespace bq {

Poly Poly::operator+(const Poly& o) const {
  const GF* f = F ? F : o.F;
  std::vector<uint32_t> r(std::max(c.size(), o.c.size()), 0);
  for (size_t i = 0; i < r.size(); ++i) r[i] = f->add(coef(static_cast<int>(i)), o.coef(static_cast<int>(i)));
  return Poly(f, std::move(r));
}

Poly Poly::operator-() const {
  Poly r(F, c);
  for (auto& v : r.c) v = F->neg(v);
  return r;
}

Poly Poly::operator-(const Poly& o) const { return *this + (-o); }

Poly Poly::operator*(const Poly& o) const {
  const GF* f = F ? F : o.F;
  if (is_zero() || o.is_zero()) return Poly(f);
  std::vector<uint32_t> r(c.size() + o.c.size() - 1, 0);
  for (size_t i = 0; i < c.size(); ++i) {
    if (!c[i]) continue;
    for (size_t j = 0; j < o.c.size(); ++j)
      if (o.c[j]) r[i + j] = f->add(r[i + j], f->mul(c[i], o.c[j]));
  }
  return Poly(f, std::move(r));
}

Poly Poly::scale(uint32_t a) const {
  Poly r(F, c);
  for (auto& v : r.c) v = F->mul(v, a);
  r.trim();
  return r;
}

Poly Poly::shift(int k) const {
  if (is_zero()) return *this;
  std::vector<uint32_t> r(k, 0);
  r.insert(r.end(), c.begin(), c.end());
  return Poly(F, std::move(r));
}

bool Poly::operator<(const Poly& o) const {
  if (deg() != o.deg()) return deg() < o.deg();
  for (int i = deg(); i >= 0; --i)
    if (c[i] != o.c[i]) return c[i] < o.c[i];
  return false;
}

uint32_t Poly::eval(uint32_t a) const {
  uint32_t r = 0;
  for (size_t i = c.size(); i-- > 0;) r = F->add(F->mul(r, a), c[i]);
  return r;
}

Poly Poly::monic() const {
  if (is_zero()) return *this;
  return scale(F->inv(lc()));
}

Poly Poly::derivative() const {
  std::vector<uint32_t> r;
  for (size_t i = 1; i < c.size(); ++i) r.push_back(F->mul(F->from_int(static_cast<int64_t>(i)), c[i]));
  return Poly(F, std::move(r));
}

Poly Poly::mapped(const Embedding& e) const {
  std::vector<uint32_t> r(c.size());
  for (size_t i = 0; i < c.size(); ++i) r[i] = e(c[i]);
  return Poly(e.big().get(), std::move(r));
}

std::pair<Poly, Poly> divmod(const Poly& a, const Poly& b) {
  if (b.is_zero()) throw DivisionByZero();
  const GF* f = b.F;
  if (a.deg() < b.deg()) return {Poly(f), a};
  std::vector<uint32_t> r = a.c;
  std::vector<uint32_t> qc(a.deg() - b.deg() + 1, 0);
  uint32_t il = f->inv(b.lc());
  int db = b.deg();
  for (int i = a.deg(); i >= db; --i) {
    uint32_t coef = f->mul(r[i], il);
    qc[i - db] = coef;
    if (!coef) continue;
    uint32_t nc = f->neg(coef);
    for (int j = 0; j <= db; ++j)
      if (b.c[j]) r[i - db + j] = f->add(r[i - db + j], f->mul(nc, b.c[j]));
  }
  r.resize(db);
  return {Poly(f, std::move(qc)), Poly(f, std::move(r))};
}

Poly operator%(const Poly& a, const Poly& b) { return divmod(a, b).second; }
Poly operator/(const Poly& a, const Poly& b) { return divmod(a, b).first; }

Poly gcd(const Poly& a, const Poly& b) {
  Poly x = a, y = b;
  while (!y.is_zero()) {
    Poly r = x % y;
    x = std::move(y);
    y = std::move(r);
  }
  return x.monic();
}

Poly xgcd(const Poly& a, const Poly& b, Poly& s, Poly& t) {
  const GF* f = a.F ? a.F : b.F;
  Poly r0 = a, r1 = b;
  Poly s0 = Poly::constant(f, 1), s1(f);
  Poly t0(f), t1 = Poly::constant(f, 1);
  while (!r1.is_zero()) {
    auto [qq, rr] = divmod(r0, r1);
    r0 = std::move(r1);
    r1 = std::move(rr);
    Poly ns = s0 - qq * s1;
    s0 = std::move(s1);
    s1 = std::move(ns);
    Poly nt = t0 - qq * t1;
    t0 = std::move(t1);
    t1 = std::move(nt);
  }
  if (r0.is_zero()) {
    s = s0;
    t = t0;
    return r0;
  }
  uint32_t il = f->inv(r0.lc());
  s = s0.scale(il);
  t = t0.scale(il);
  return r0.scale(il);
}

Poly powmod(const Poly& base, uint64_t e, const Poly& mod) {
  Poly r = Poly::constant(mod.F, 1) % mod;
  Poly b = base % mod;
  while (e) {
    if (e & 1) r = (r * b) % mod;
    e >>= 1;
    if (e) b = (b * b) % mod;
  }
  return r;
}

Poly pow(const Poly& base, unsigned e) {
  Poly r = Poly::constant(base.F, 1);
  Poly b = base;
  while (e) {
    if (e & 1) r = r * b;
    e >>= 1;
    if (e) b = b * b;
  }
  return r;
}

namespace {

Poly pth_root(const Poly& f) {
  const GF* F = f.F;
  std::vector<uint32_t> r;
  for (int i = 0; i <= f.deg(); i += static_cast<int>(F->p())) r.push_back(F->frob(f.c[i], F->m() - 1));
  return Poly(F, std::move(r));
}

void squarefree(const Poly& f, int mult, std::vector<Factor>& out) {
  if (f.deg() < 1) return;
  Poly d = f.derivative();
  if (d.is_zero()) {
    squarefree(pth_root(f), mult * static_cast<int>(f.F->p()), out);
    return;
  }
  Poly c = gcd(f, d);
  Poly w = f / c;
  int i = 1;
  while (w.deg() > 0) {
    Poly y = gcd(w, c);
    Poly z = w / y;
    if (z.deg() > 0) out.push_back({z.monic(), i * mult});
    ++i;
    w = y;
    c = c / y;
  }
  if (c.deg() > 0) squarefree(pth_root(c.monic()), mult * static_cast<int>(f.F->p()), out);
}

// f monic squarefree with all irreducible factors of degree d.
void equal_degree(const Poly& f, int d, std::mt19937_64& rng, std::vector<Poly>& out) {
  if (f.deg() == d) {
    out.push_back(f);
    return;
  }
  const GF* F = f.F;
  uint64_t q = F->size();
  std::uniform_int_distribution<uint32_t> dist(0, F->size() - 1);
  while (true) {
    std::vector<uint32_t> rc(f.deg());
    for (auto& v : rc) v = dist(rng);
    Poly a(F, rc);
    if (a.deg() < 1) continue;
    // a^((q^d - 1)/2) = (prod_{i<d} a^(q^i))^((q-1)/2)
    Poly prod = Poly::constant(F, 1), cur = a % f;
    for (int i = 0; i < d; ++i) {
      prod = (prod * cur) % f;
      if (i + 1 < d) cur = powmod(cur, q, f);
    }
    Poly b = powmod(prod, (q - 1) / 2, f) - Poly::constant(F, 1);
    Poly g = gcd(f, b);
    if (g.deg() > 0 && g.deg() < f.deg()) {
      equal_degree(g, d, rng, out);
      equal_degree(f / g, d, rng, out);
      return;
    }
  }
}

}  // namespace

std::vector<Factor> factor(const Poly& f0) {
  if (f0.is_zero()) throw std::invalid_argument("factor: zero polynomial");
  std::vector<Factor> sqf, out;
  squarefree(f0.monic(), 1, sqf);
  std::mt19937_64 rng(0x5eed);
  for (auto& [g, mult] : sqf) {
    Poly rest = g;
    const GF* F = g.F;
    Poly xp = Poly::x(F);
    Poly h = xp;
    for (int d = 1; 2 * d <= rest.deg(); ++d) {
      h = powmod(h, F->size(), rest);
      Poly gd = gcd(rest, h - xp);
      if (gd.deg() > 0) {
        std::vector<Poly> parts;
        equal_degree(gd, d, rng, parts);
        for (auto& p : parts) out.push_back({p, mult});
        rest = rest / gd;
        h = h % rest;
      }
    }
    if (rest.deg() > 0) out.push_back({rest.monic(), mult});
  }
  std::sort(out.begin(), out.end(), [](const Factor& a, const Factor& b) {
    if (a.p != b.p) return a.p < b.p;
    return a.mult < b.mult;
  });
  return out;
}

bool is_irreducible(const Poly& f) {
  if (f.deg() < 1) return false;
  auto fs = factor(f);
  return fs.size() == 1 && fs[0].mult == 1;
}

std::vector<uint32_t> roots(const Poly& f) {
  std::vector<uint32_t> r;
  if (f.deg() < 1) return r;
  for (auto& fc : factor(f))
    if (fc.p.deg() == 1) r.push_back(fc.p.F->neg(fc.p.c[0]));
  std::sort(r.begin(), r.end());
  return r;
}

}  // namespace bq
