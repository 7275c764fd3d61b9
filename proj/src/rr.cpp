#include "biquad/rr.hpp"

#include <climits>
#include <numeric>

namespace bq {

namespace {

int floor_div(int a, int b) { return a >= 0 ? a / b : -((-a + b - 1) / b); }

// Minimal polynomial over S of a in G.
Poly minpoly(const Curve& C, const GF* S, const GF* G, uint32_t a) {
  uint32_t s = C.degree_of(S);
  uint32_t step = C.tower().k() * s;
  std::vector<uint32_t> orbit{a};
  for (uint32_t b = G->frob(a, step); b != a; b = G->frob(b, step)) orbit.push_back(b);
  Poly p = Poly::constant(G, 1);
  for (uint32_t r : orbit) p = p * Poly::linear(G, r);
  const Embedding& e = C.emb(S, G);
  std::vector<uint32_t> c;
  for (uint32_t v : p.c) c.push_back(e.back(v));
  return Poly(S, c);
}

bool same_orbit(const Curve& C, const GF* S, GeoPt P, GeoPt Q) {
  uint32_t n = std::lcm(P.n, Q.n);
  P = lift(C, P, n);
  Q = lift(C, Q, n);
  uint32_t s = C.degree_of(S);
  for (uint32_t j = 0; j < n; j += s)
    if (frobenius(C, P, j) == Q) return true;
  return false;
}

struct PointCond {
  GeoPt Q;
  int e = 1;
  int n = 0;
};

}  // namespace

void append_trace_rows(const Curve& C, const GF* S, const GF* G, const std::vector<uint32_t>& coeffs, GFMat& m) {
  if (S == G) {
    m.add_row(coeffs);
    return;
  }
  const Embedding& e = C.emb(S, G);
  uint32_t r = C.degree_of(G) / C.degree_of(S);
  uint32_t beta = 1;
  for (uint32_t j = 0; j < r; ++j) {
    std::vector<uint32_t> row(coeffs.size());
    for (size_t i = 0; i < coeffs.size(); ++i) row[i] = e.trace(G->mul(beta, coeffs[i]));
    m.add_row(row);
    beta = G->mul(beta, G->gen());
  }
}

std::vector<FElem> rr_basis_points(const Curve& C, const GF* S, int n_O, const std::vector<RRPoint>& pts) {
  uint32_t s = C.degree_of(S);
  std::map<Poly, std::vector<PointCond>> groups;
  std::vector<std::pair<GeoPt, int>> lifted;
  for (auto& rp : pts) {
    if (rp.P.inf) throw std::invalid_argument("rr_basis_points: O is handled through n_O");
    GeoPt P = lift(C, rp.P, std::lcm(rp.P.n, s));
    lifted.push_back({P, rp.n});
    auto G = C.tower().ext(P.n);
    groups[minpoly(C, S, G.get(), P.x)];
  }
  Poly h = Poly::constant(S, 1);
  std::map<Poly, int> kexp;
  for (auto& [pi, conds] : groups) {
    uint32_t nd = s * pi.deg();
    auto G = C.tower().ext(nd);
    Poly pg = pi.mapped(C.emb(S, G.get()));
    uint32_t x0 = roots(pg)[0];
    uint32_t fx = C.cubic_at(G.get(), x0);
    std::vector<GeoPt> qs;
    if (fx == 0)
      qs.push_back(GeoPt{nd, false, x0, 0});
    else if (G->is_square(fx)) {
      uint32_t y0 = G->sqrt(fx);
      qs.push_back(GeoPt{nd, false, x0, y0});
      qs.push_back(GeoPt{nd, false, x0, G->neg(y0)});
    } else {
      auto H = C.tower().ext(2 * nd);
      uint32_t x1 = C.tower().emb(nd, 2 * nd)(x0);
      qs.push_back(GeoPt{2 * nd, false, x1, H->sqrt(C.cubic_at(H.get(), x1))});
    }
    int k = 0;
    for (auto& Q : qs) {
      PointCond pc{Q, Q.y == 0 ? 2 : 1, 0};
      for (auto& [P, n] : lifted)
        if (same_orbit(C, S, P, Q)) pc.n = n;
      k = std::max(k, pc.n > 0 ? (pc.n + pc.e - 1) / pc.e : 0);
      conds.push_back(pc);
    }
    kexp[pi] = k;
    h = h * pow(pi, k);
  }
  int N = n_O + 2 * h.deg();
  int A = floor_div(N, 2), B = floor_div(N - 3, 2);
  if (A < 0) return {};
  int ncand = (A + 1) + std::max(0, B + 1);
  GFMat m(S, 0, ncand);
  for (auto& [pi, conds] : groups) {
    int k = kexp[pi];
    for (auto& pc : conds) {
      int r = k * pc.e - pc.n;
      if (r <= 0) continue;
      Chart ch = make_chart(C, pc.Q, r + 2);
      const GF* G = ch.G.get();
      std::vector<Series> cand;
      Series xp = Series::constant(G, 1, Series::kExact);
      for (int i = 0; i <= std::max(A, B); ++i) {
        if (i <= A) cand.push_back(xp);
        xp = xp * ch.x;
      }
      xp = ch.y;
      for (int j = 0; j <= B; ++j) {
        cand.push_back(xp);
        xp = xp * ch.x;
      }
      for (int e = 0; e < r; ++e) {
        std::vector<uint32_t> row(ncand);
        for (int c = 0; c < ncand; ++c) row[c] = cand[c].coef(e);
        append_trace_rows(C, S, G, row, m);
      }
    }
  }
  std::vector<FElem> out;
  RatFn hinv = RatFn(h).inv();
  for (auto& v : nullspace(m)) {
    std::vector<uint32_t> ac(v.begin(), v.begin() + A + 1);
    std::vector<uint32_t> bc(v.begin() + A + 1, v.end());
    out.push_back(FElem(&C, RatFn(Poly(S, ac)) * hinv, RatFn(Poly(S, bc)) * hinv));
  }
  return out;
}

std::vector<FElem> rr_basis_x(const Curve& C, const Divisor& D) {
  if (D.curve != CurveName::X) throw CurveMismatch("rr_basis_x expects a divisor on X");
  int n_O = 0;
  std::vector<RRPoint> pts;
  for (auto& [w, n] : D.m) {
    if (w.base.inf)
      n_O = n;
    else
      pts.push_back({w.base.geo(), n});
  }
  return rr_basis_points(C, C.base_ptr().get(), n_O, pts);
}

Divisor half_div_u(const Curve& C, int i) {
  Divisor D(CurveName::X);
  if (i == 3) {
    D.add(Place::of(two_torsion(C, 1)), 1);
    D.add(Place::of(two_torsion(C, 2)), 1);
    D.add(Place::of(ClosedPoint::origin()), -2);
  } else {
    D.add(Place::of(two_torsion(C, i)), 1);
    D.add(Place::of(ClosedPoint::origin()), -1);
  }
  return D;
}

std::vector<TowerElement> riemann_roch_basis(const Curve& C, const Divisor& D) {
  const GF* S = C.base_ptr().get();
  if (D.curve == CurveName::X) {
    std::vector<TowerElement> out;
    for (auto& f : rr_basis_x(C, D)) out.push_back(TowerElement::from_f(f));
    return out;
  }
  int i = cover_index(D.curve);
  if (!i) throw CurveMismatch("riemann_roch_basis supports X, Y1, Y2, Y3");
  Level lvl = i == 1 ? Level::K1 : i == 2 ? Level::K2 : Level::K3;
  // B_P = largest multiplicity above P; the covers are unramified
  std::map<ClosedPoint, int> bmax;
  for (auto& [w, n] : D.m) bmax[w.base];
  Divisor B(CurveName::X);
  for (auto& [P, n] : bmax) {
    n = INT_MIN;
    for (auto& w : places_above(C, D.curve, P)) n = std::max(n, D.mult(w));
    B.add(Place::of(P), n);
  }
  auto La = rr_basis_x(C, B);
  auto Lb = rr_basis_x(C, B + half_div_u(C, i));
  std::vector<TowerElement> cand;
  FElem zero(&C, S);
  for (auto& a : La) cand.push_back(TowerElement(lvl, {a, zero}));
  for (auto& b : Lb) cand.push_back(TowerElement(lvl, {zero, b}));
  std::vector<Place> check;
  for (auto& [P, n] : bmax)
    for (auto& w : places_above(C, D.curve, P))
      if (D.mult(w) < B.mult(Place::of(P))) check.push_back(w);
  if (check.empty() || cand.empty()) return cand;
  int nc = static_cast<int>(cand.size());
  GFMat m(S, 0, nc);
  for (auto& w : check) {
    int need = -D.mult(w);
    int from = -B.mult(Place::of(w.base));
    for (int prec = need + 8;; prec *= 2) {
      try {
        PlaceChart ch = make_place_chart(C, D.curve, w, prec);
        std::vector<Series> ex;
        for (auto& z : cand) ex.push_back(expand(z, ch));
        GFMat part(S, 0, nc);
        for (int e = from; e < need; ++e) {
          std::vector<uint32_t> row(nc);
          for (int c = 0; c < nc; ++c) row[c] = ex[c].coef(e);
          append_trace_rows(C, S, ch.base.G.get(), row, part);
        }
        m.a.insert(m.a.end(), part.a.begin(), part.a.end());
        m.rows += part.rows;
        break;
      } catch (const PrecisionLoss&) {
        if (prec > 4096) throw;
      }
    }
  }
  std::vector<TowerElement> out;
  for (auto& v : nullspace(m)) {
    TowerElement z(lvl, {zero, zero});
    for (int c = 0; c < nc; ++c)
      if (v[c]) z = z + TowerElement(lvl, {cand[c].c[0].scale(v[c]), cand[c].c[1].scale(v[c])});
    out.push_back(z);
  }
  return out;
}

}  // namespace bq
