#include "biquad/points.hpp"

#include <algorithm>
#include <numeric>

namespace bq {

namespace {

Series at_prec(const Series& s, int prec) { return s.prec == Series::kExact ? s.truncate(prec) : s; }

}  // namespace

GeoPt lift(const Curve& C, const GeoPt& P, uint32_t m) {
  if (P.n == m) return P;
  if (m % P.n) throw std::invalid_argument("lift: degree does not divide");
  if (P.inf) return GeoPt{m, true, 0, 0};
  const Embedding& e = C.tower().emb(P.n, m);
  return GeoPt{m, false, e(P.x), e(P.y)};
}

Chart make_chart(const Curve& C, const GeoPt& P, int prec) {
  Chart ch;
  ch.G = C.tower().ext(P.n);
  ch.P = P;
  ch.prec = prec;
  const GF* G = ch.G.get();
  Poly f = C.cubic(G);
  if (P.inf) {
    ch.kind = Chart::Kind::Infinity;
    uint32_t lam = C.embed_base(C.lambda(), G);
    int wp = prec + 6;
    Series t2 = Series::monomial(G, 1, 2, wp);
    Series one = Series::constant(G, 1, wp);
    Series w = Series::zero(G, wp);
    for (int it = 0; it <= wp / 2 + 1; ++it) w = t2 * (one - w) * (one - w.scale(lam));
    ch.x = w.inv();
    ch.y = ch.x * Series::monomial(G, 1, -1, Series::kExact);
  } else if (P.y == 0) {
    ch.kind = Chart::Kind::TwoTorsion;
    // f(e + u) = a1 u + a2 u^2 + u^3 = t^2
    Poly shifted(G);
    Poly lin = Poly(G, {P.x, 1});
    for (int i = f.deg(); i >= 0; --i) shifted = shifted * lin + Poly::constant(G, f.c[i]);
    uint32_t a1 = shifted.coef(1), a2 = shifted.coef(2);
    uint32_t ia1 = G->inv(a1);
    Series t2 = Series::monomial(G, 1, 2, prec);
    Series u = Series::zero(G, prec);
    for (int it = 0; it <= prec / 2 + 1; ++it) u = (t2 - (u * u).scale(a2) - u * u * u).scale(ia1);
    ch.x = u + Series::constant(G, P.x, prec);
    ch.y = Series::monomial(G, 1, 1, Series::kExact);
  } else {
    ch.kind = Chart::Kind::Generic;
    ch.x = Series(G, 0, Series::kExact, {P.x, 1});
    Series fx = at_prec(eval(f, ch.x), prec);
    ch.y = fx.sqrt(P.y);
  }
  return ch;
}

Series expand(const FElem& g, const Chart& ch) {
  const GF* G = ch.G.get();
  const Embedding& e = g.C->emb(g.S, G);
  auto ev = [&](const RatFn& r) {
    Series num = at_prec(eval(r.num.mapped(e), ch.x), ch.prec);
    if (r.den.deg() == 0) return num.scale(G->inv(e(r.den.c[0])));
    Series den = at_prec(eval(r.den.mapped(e), ch.x), ch.prec);
    return num * den.inv();
  };
  Series r = ev(g.a);
  if (!g.b.is_zero()) r = r + ev(g.b) * ch.y;
  return r;
}

namespace {

template <class Fn>
auto with_precision(const Curve& C, const GeoPt& P, Fn fn) {
  for (int prec = 12;; prec *= 2) {
    try {
      return fn(make_chart(C, P, prec));
    } catch (const PrecisionLoss&) {
      if (prec > 8192) throw;
    }
  }
}

}  // namespace

int valuation(const FElem& g, const GeoPt& P) {
  if (g.is_zero()) throw std::domain_error("valuation of zero");
  return with_precision(*g.C, P, [&](const Chart& ch) { return expand(g, ch).val(); });
}

uint32_t leading_coefficient(const FElem& g, const GeoPt& P) {
  if (g.is_zero()) throw std::domain_error("leading coefficient of zero");
  return with_precision(*g.C, P, [&](const Chart& ch) { return expand(g, ch).lead(); });
}

bool on_curve(const Curve& C, const GeoPt& P) {
  if (P.inf) return true;
  auto G = C.tower().ext(P.n);
  return G->mul(P.y, P.y) == C.cubic_at(G.get(), P.x);
}

uint32_t field_degree(const Curve& C, const GeoPt& P) {
  if (P.inf) return 1;
  for (uint32_t e = 1; e <= P.n; ++e) {
    if (P.n % e) continue;
    if (e == P.n) return e;
    const Embedding& em = C.tower().emb(e, P.n);
    if (em.in_image(P.x) && em.in_image(P.y)) return e;
  }
  return P.n;
}

GeoPt frobenius(const Curve& C, const GeoPt& P, uint32_t j) {
  if (P.inf) return P;
  auto G = C.tower().ext(P.n);
  uint32_t k = C.tower().k() * j;
  return GeoPt{P.n, false, G->frob(P.x, k), G->frob(P.y, k)};
}

ClosedPoint closed_point(const Curve& C, const GeoPt& P) {
  if (P.inf) return ClosedPoint::origin();
  uint32_t d = field_degree(C, P);
  GeoPt Q = P;
  if (d != P.n) {
    const Embedding& em = C.tower().emb(d, P.n);
    Q = GeoPt{d, false, em.back(P.x), em.back(P.y)};
  }
  std::pair<uint32_t, uint32_t> best{Q.x, Q.y};
  for (uint32_t j = 1; j < d; ++j) {
    GeoPt R = frobenius(C, Q, j);
    best = std::min(best, std::make_pair(R.x, R.y));
  }
  return ClosedPoint{static_cast<int>(d), false, best.first, best.second};
}

std::vector<ClosedPoint> closed_points_of_degree(const Curve& C, int d) {
  return C.cached_points(d, [&]() {
    std::vector<ClosedPoint> out;
    if (d == 1) out.push_back(ClosedPoint::origin());
    auto G = C.tower().ext(d);
    for (uint32_t x = 0; x < G->size(); ++x) {
      uint32_t fx = C.cubic_at(G.get(), x);
      if (!G->is_square(fx)) continue;
      uint32_t y0 = G->sqrt(fx);
      for (uint32_t y : {y0, G->neg(y0)}) {
        GeoPt P{static_cast<uint32_t>(d), false, x, y};
        if (field_degree(C, P) != static_cast<uint32_t>(d)) continue;
        ClosedPoint cp = closed_point(C, P);
        if (cp.x == x && cp.y == y) out.push_back(cp);
        if (y0 == 0) break;
      }
    }
    std::sort(out.begin(), out.end());
    return out;
  });
}

std::vector<ClosedPoint> enumerate_closed_points(const Curve& C, int max_degree) {
  if (max_degree > C.config().degree_bound)
    throw BoundExceeded("enumerate_closed_points: degree " + std::to_string(max_degree) + " exceeds degree_bound");
  std::vector<ClosedPoint> out;
  for (int d = 1; d <= max_degree; ++d) {
    auto pts = closed_points_of_degree(C, d);
    out.insert(out.end(), pts.begin(), pts.end());
  }
  return out;
}

std::vector<ClosedPoint> points_above(const Curve& C, const Poly& pi) {
  int d = pi.deg();
  auto G = C.tower().ext(d);
  Poly pg = pi.mapped(C.tower().emb(1, d));
  auto rs = roots(pg);
  if (rs.empty()) throw std::invalid_argument("points_above: polynomial has no root in its degree extension");
  uint32_t x0 = rs[0];
  uint32_t fx = C.cubic_at(G.get(), x0);
  std::vector<ClosedPoint> out;
  if (fx == 0) {
    out.push_back(closed_point(C, GeoPt{static_cast<uint32_t>(d), false, x0, 0}));
  } else if (G->is_square(fx)) {
    uint32_t y0 = G->sqrt(fx);
    out.push_back(closed_point(C, GeoPt{static_cast<uint32_t>(d), false, x0, y0}));
    out.push_back(closed_point(C, GeoPt{static_cast<uint32_t>(d), false, x0, G->neg(y0)}));
  } else {
    auto H = C.tower().ext(2 * d);
    uint32_t x1 = C.tower().emb(d, 2 * d)(x0);
    out.push_back(closed_point(C, GeoPt{static_cast<uint32_t>(2 * d), false, x1, H->sqrt(C.cubic_at(H.get(), x1))}));
  }
  std::sort(out.begin(), out.end());
  return out;
}

uint64_t count_points(const Curve& C, uint32_t n) {
  auto G = C.tower().ext(n);
  uint64_t cnt = 1;
  for (uint32_t x = 0; x < G->size(); ++x) {
    uint32_t fx = C.cubic_at(G.get(), x);
    if (fx == 0)
      cnt += 1;
    else if (G->is_square(fx))
      cnt += 2;
  }
  return cnt;
}

ClosedPoint two_torsion(const Curve& C, int i) { return ClosedPoint{1, false, C.e(i), 0}; }

GeoPt point_neg(const Curve& C, const GeoPt& P) {
  if (P.inf) return P;
  auto G = C.tower().ext(P.n);
  return GeoPt{P.n, false, P.x, G->neg(P.y)};
}

GeoPt point_add(const Curve& C, const GeoPt& P, const GeoPt& Q) {
  if (P.inf) return Q;
  if (Q.inf) return P;
  if (P.n != Q.n) throw std::invalid_argument("point_add: points in different fields");
  auto Gp = C.tower().ext(P.n);
  const GF& G = *Gp;
  uint32_t a2 = C.embed_base(C.base().neg(C.base().add(1, C.lambda())), Gp.get());
  uint32_t a4 = C.embed_base(C.lambda(), Gp.get());
  uint32_t m;
  if (P.x == Q.x) {
    if (G.add(P.y, Q.y) == 0) return GeoPt{P.n, true, 0, 0};
    uint32_t num = G.add(G.add(G.mul(G.from_int(3), G.mul(P.x, P.x)), G.mul(G.add(a2, a2), P.x)), a4);
    m = G.div(num, G.add(P.y, P.y));
  } else {
    m = G.div(G.sub(Q.y, P.y), G.sub(Q.x, P.x));
  }
  uint32_t x3 = G.sub(G.sub(G.sub(G.mul(m, m), a2), P.x), Q.x);
  uint32_t y3 = G.neg(G.add(P.y, G.mul(m, G.sub(x3, P.x))));
  return GeoPt{P.n, false, x3, y3};
}

GeoPt point_mul(const Curve& C, const GeoPt& P, int64_t n) {
  GeoPt base = n < 0 ? point_neg(C, P) : P;
  uint64_t k = n < 0 ? static_cast<uint64_t>(-n) : static_cast<uint64_t>(n);
  GeoPt r{P.n, true, 0, 0};
  while (k) {
    if (k & 1) r = point_add(C, r, base);
    k >>= 1;
    if (k) base = point_add(C, base, base);
  }
  return r;
}

GeoPt trace_point(const Curve& C, const ClosedPoint& P) {
  if (P.inf) return GeoPt{1, true, 0, 0};
  GeoPt g = P.geo();
  GeoPt s{g.n, true, 0, 0};
  for (int j = 0; j < P.deg; ++j) s = point_add(C, s, frobenius(C, g, j));
  if (s.inf) return GeoPt{1, true, 0, 0};
  if (s.n == 1) return s;
  const Embedding& em = C.tower().emb(1, s.n);
  return GeoPt{1, false, em.back(s.x), em.back(s.y)};
}

std::vector<GeoPt> rational_points(const Curve& C) {
  std::vector<GeoPt> out;
  for (auto& p : closed_points_of_degree(C, 1)) out.push_back(p.geo());
  return out;
}

}  // namespace bq
