#include "biquad/divisor.hpp"

#include <algorithm>
#include <set>

namespace bq {

const char* curve_name(CurveName c) {
  switch (c) {
    case CurveName::X: return "X";
    case CurveName::Y1: return "Y1";
    case CurveName::Y2: return "Y2";
    case CurveName::Y3: return "Y3";
    case CurveName::Y: return "Y";
  }
  return "?";
}

CurveName curve_from_name(const std::string& s) {
  for (CurveName c : {CurveName::X, CurveName::Y1, CurveName::Y2, CurveName::Y3, CurveName::Y})
    if (s == curve_name(c)) return c;
  throw CurveMismatch("unknown curve " + s);
}

int cover_index(CurveName c) {
  switch (c) {
    case CurveName::Y1: return 1;
    case CurveName::Y2: return 2;
    case CurveName::Y3: return 3;
    default: return 0;
  }
}

CurveName cover_curve(int i) {
  if (i == 1) return CurveName::Y1;
  if (i == 2) return CurveName::Y2;
  if (i == 3) return CurveName::Y3;
  throw CurveMismatch("cover index must be 1, 2 or 3");
}

Divisor Divisor::point(CurveName c, const Place& p, int n) {
  Divisor d(c);
  d.add(p, n);
  return d;
}

void Divisor::add(const Place& p, int n) {
  if (!n) return;
  int& v = m[p];
  v += n;
  if (!v) m.erase(p);
}

int Divisor::degree() const {
  int d = 0;
  for (auto& [p, n] : m) d += n * p.deg;
  return d;
}

bool Divisor::effective() const {
  for (auto& [p, n] : m)
    if (n < 0) return false;
  return true;
}

int Divisor::mult(const Place& p) const {
  auto it = m.find(p);
  return it == m.end() ? 0 : it->second;
}

Divisor Divisor::operator+(const Divisor& o) const {
  if (curve != o.curve) throw CurveMismatch("adding divisors on different curves");
  Divisor r = *this;
  for (auto& [p, n] : o.m) r.add(p, n);
  return r;
}

Divisor Divisor::operator-(const Divisor& o) const { return *this + o.scaled(-1); }

Divisor Divisor::scaled(int k) const {
  Divisor r(curve);
  for (auto& [p, n] : m) r.add(p, n * k);
  return r;
}

Divisor Divisor::max_with(const Divisor& o) const {
  Divisor r(curve);
  std::set<Place> keys;
  for (auto& [p, n] : m) keys.insert(p);
  for (auto& [p, n] : o.m) keys.insert(p);
  for (auto& p : keys) r.add(p, std::max(mult(p), o.mult(p)));
  return r;
}

Divisor Divisor::min_with(const Divisor& o) const { return -((-*this).max_with(-o)); }

CoverData cover_data(const Curve& C, const ClosedPoint& P) {
  return C.cached_cover_data(P, [&]() {
  CoverData d;
  const GF* B = C.base_ptr().get();
  auto G = C.tower().ext(P.deg);
  for (int i = 1; i <= 3; ++i) {
    FElem u = FElem::u(&C, B, i);
    int v = valuation(u, P.geo());
    d.half_val[i - 1] = v / 2;
    d.lead[i - 1] = leading_coefficient(u, P.geo());
    d.chi[i - 1] = G->is_square(d.lead[i - 1]) ? 1 : -1;
  }
  return d;
  });
}

uint32_t cover_root(const Curve& C, const ClosedPoint& P, int i, uint32_t n) {
  CoverData d = cover_data(C, P);
  uint32_t dd = P.deg;
  uint32_t l = d.lead[i - 1];
  if (d.chi[i - 1] == 1) {
    uint32_t r = C.tower().ext(dd)->sqrt(l);
    return dd == n ? r : C.tower().emb(dd, n)(r);
  }
  if (n % (2 * dd)) throw std::invalid_argument("cover_root: field too small for an inert root");
  uint32_t l2 = C.tower().emb(dd, 2 * dd)(l);
  uint32_t r = C.tower().ext(2 * dd)->sqrt(l2);
  return 2 * dd == n ? r : C.tower().emb(2 * dd, n)(r);
}

int chi(const Curve& C, int i, const ClosedPoint& P) { return cover_data(C, P).chi[i - 1]; }

std::vector<Place> places_above(const Curve& C, CurveName cover, const ClosedPoint& P) {
  if (cover == CurveName::X) return {Place::of(P)};
  CoverData d = cover_data(C, P);
  int i = cover_index(cover);
  if (i) {
    if (d.chi[i - 1] == 1) return {Place{P, -1, 0, P.deg}, Place{P, 1, 0, P.deg}};
    return {Place{P, 0, 0, 2 * P.deg}};
  }
  std::set<Place> out;
  for (int e1 : {-1, 1})
    for (int e2 : {-1, 1}) {
      std::pair<int, int> a{e1, e2}, b{e1 * d.chi[0], e2 * d.chi[1]};
      auto rep = std::max(a, b);
      int size = (a == b) ? 1 : 2;
      out.insert(Place{P, static_cast<int8_t>(rep.first), static_cast<int8_t>(rep.second), P.deg * size});
    }
  return {out.begin(), out.end()};
}

Place image_place(const Curve& C, CurveName from, const Place& w, CurveName to) {
  if (from == to) return w;
  if (to == CurveName::X) return Place::of(w.base);
  if (from != CurveName::Y) throw CurveMismatch(std::string("no map ") + curve_name(from) + " -> " + curve_name(to));
  CoverData d = cover_data(C, w.base);
  int i = cover_index(to);
  if (d.chi[i - 1] == -1) return Place{w.base, 0, 0, 2 * w.base.deg};
  if (i == 1) return Place{w.base, w.a, 0, w.base.deg};
  if (i == 2) return Place{w.base, w.b, 0, w.base.deg};
  uint32_t n = 2 * w.base.deg;
  auto G = C.tower().ext(n);
  uint32_t r1 = cover_root(C, w.base, 1, n), r2 = cover_root(C, w.base, 2, n), r3 = cover_root(C, w.base, 3, n);
  int rho = G->mul(r1, r2) == r3 ? 1 : -1;
  return Place{w.base, static_cast<int8_t>(w.a * w.b * rho), 0, w.base.deg};
}

PlaceChart make_place_chart(const Curve& C, CurveName cv, const Place& w, int prec) {
  PlaceChart pc;
  const GF* B = C.base_ptr().get();
  int i = cover_index(cv);
  uint32_t n = (cv == CurveName::X) ? w.base.deg : w.deg;
  if (i && w.a == 0) n = 2 * w.base.deg;
  pc.base = make_chart(C, lift(C, w.base.geo(), n), prec);
  auto root_for = [&](int j, int sign) {
    uint32_t r = cover_root(C, w.base, j, n);
    return sign == -1 ? pc.base.G->neg(r) : r;
  };
  if (i) {
    Series u = expand(FElem::u(&C, B, i), pc.base);
    pc.s[i - 1] = u.sqrt(root_for(i, w.a == 0 ? 1 : w.a));
    pc.has[i - 1] = true;
  } else if (cv == CurveName::Y) {
    for (int j = 1; j <= 2; ++j) {
      Series u = expand(FElem::u(&C, B, j), pc.base);
      pc.s[j - 1] = u.sqrt(root_for(j, j == 1 ? w.a : w.b));
      pc.has[j - 1] = true;
    }
    pc.s[2] = pc.s[0] * pc.s[1];
    pc.has[2] = true;
  }
  return pc;
}

Series expand(const TowerElement& z, const PlaceChart& ch) {
  auto k = z.k_coords();
  Series r = expand(k[0], ch.base);
  for (int j = 1; j <= 3; ++j) {
    if (k[j].is_zero()) continue;
    if (!ch.has[j - 1]) throw LevelMismatch("element not defined on this curve");
    r = r + expand(k[j], ch.base) * ch.s[j - 1];
  }
  return r;
}

namespace {

template <class Fn>
auto place_precision(const Curve& C, CurveName cv, const Place& w, Fn fn) {
  for (int prec = 12;; prec *= 2) {
    try {
      return fn(make_place_chart(C, cv, w, prec));
    } catch (const PrecisionLoss&) {
      if (prec > 8192) throw;
    }
  }
}

CurveName curve_of_level(Level l) {
  switch (l) {
    case Level::F: return CurveName::X;
    case Level::K1: return CurveName::Y1;
    case Level::K2: return CurveName::Y2;
    case Level::K3: return CurveName::Y3;
    case Level::K: return CurveName::Y;
  }
  return CurveName::X;
}

void add_support(const Curve& C, const Poly& p, std::set<ClosedPoint>& out) {
  if (p.deg() < 1) return;
  for (auto& f : factor(p))
    for (auto& P : points_above(C, f.p)) out.insert(P);
}

}  // namespace

int valuation(const Curve& C, const TowerElement& z, CurveName cv, const Place& w) {
  if (z.is_zero()) throw ZeroElement();
  return place_precision(C, cv, w, [&](const PlaceChart& ch) { return expand(z, ch).val(); });
}

uint32_t leading_coefficient(const Curve& C, const TowerElement& z, CurveName cv, const Place& w) {
  if (z.is_zero()) throw ZeroElement();
  return place_precision(C, cv, w, [&](const PlaceChart& ch) { return expand(z, ch).lead(); });
}

Divisor divisor_of(const FElem& g) {
  if (g.is_zero()) throw ZeroElement();
  const Curve& C = *g.C;
  std::set<ClosedPoint> cand{ClosedPoint::origin()};
  RatFn n = g.norm();
  add_support(C, n.num, cand);
  add_support(C, n.den, cand);
  add_support(C, g.a.den, cand);
  add_support(C, g.b.den, cand);
  Divisor D(CurveName::X);
  for (auto& P : cand) D.add(Place::of(P), valuation(g, P.geo()));
  return D;
}

Divisor divisor_of(const TowerElement& z) {
  if (z.is_zero()) throw ZeroElement();
  if (z.level == Level::F) return divisor_of(z.c[0]);
  const Curve& C = *z.curve();
  CurveName cv = curve_of_level(z.level);
  std::set<ClosedPoint> cand{ClosedPoint::origin()};
  for (int i = 1; i <= 3; ++i) cand.insert(two_torsion(C, i));
  for (auto& [p, n] : divisor_of(norm(z, Level::F).c[0]).m) cand.insert(p.base);
  for (auto& c : z.c)
    if (!c.is_zero())
      for (auto& [p, n] : divisor_of(c).m) cand.insert(p.base);
  Divisor D(cv);
  for (auto& P : cand)
    for (auto& w : places_above(C, cv, P)) D.add(w, valuation(C, z, cv, w));
  return D;
}

Divisor pullback(const Curve& C, const Divisor& D, CurveName target) {
  bool ok = (D.curve == CurveName::X && target != CurveName::X) || (D.curve == target) ||
            (D.curve != CurveName::X && target == CurveName::Y);
  if (!ok) throw CurveMismatch(std::string("no pullback ") + curve_name(D.curve) + " -> " + curve_name(target));
  if (D.curve == target) return D;
  Divisor r(target);
  for (auto& [w, n] : D.m)
    for (auto& v : places_above(C, target, w.base))
      if (image_place(C, target, v, D.curve) == w) r.add(v, n);
  return r;
}

Divisor pushforward(const Curve& C, const Divisor& D, CurveName target) {
  bool ok = D.curve == target || target == CurveName::X || D.curve == CurveName::Y;
  if (!ok) throw CurveMismatch(std::string("no pushforward ") + curve_name(D.curve) + " -> " + curve_name(target));
  Divisor r(target);
  for (auto& [w, n] : D.m) {
    Place v = image_place(C, D.curve, w, target);
    r.add(v, n * (w.deg / v.deg));
  }
  return r;
}

int eta(const Curve& C, const Place& w) {
  // Y -> Y3 has degree 2 and Y/X is Galois, so w splits iff the places of Y
  // above its base have the degree of w
  auto above = places_above(C, CurveName::Y, w.base);
  return above.front().deg == w.deg ? 1 : -1;
}

int quadratic_character(const Curve& C, QChar which, const Divisor& D) {
  int r = 1;
  if (which == QChar::eta) {
    if (D.curve != CurveName::Y3) throw CurveMismatch("eta is a character on divisors of Y3");
    for (auto& [w, n] : D.m)
      if (n % 2 && eta(C, w) == -1) r = -r;
    return r;
  }
  if (D.curve != CurveName::X) throw CurveMismatch("chi_i is a character on divisors of X");
  int i = which == QChar::chi1 ? 1 : 2;
  for (auto& [w, n] : D.m)
    if (n % 2 && chi(C, i, w.base) == -1) r = -r;
  return r;
}

int point_index(const Curve& C, const ClosedPoint& P) {
  const auto& pts = closed_points_of_degree(C, P.deg);
  auto it = std::lower_bound(pts.begin(), pts.end(), P);
  if (it == pts.end() || *it != P) throw std::invalid_argument("point_index: not a canonical closed point");
  return static_cast<int>(it - pts.begin());
}

nlohmann::json place_json(const Curve& C, CurveName cv, const Place& w) {
  nlohmann::json j;
  if (w.base.inf) {
    j["point"] = "infinity";
  } else {
    const GF& B = C.base();
    auto G = C.tower().ext(w.base.deg);
    Poly mp = Poly::constant(G.get(), 1);
    uint32_t x = w.base.x;
    std::vector<uint32_t> orbit{x};
    for (uint32_t b = G->frob(x, C.tower().k()); b != x; b = G->frob(b, C.tower().k())) orbit.push_back(b);
    for (uint32_t r : orbit) mp = mp * Poly::linear(G.get(), r);
    const Embedding& e = C.tower().emb(1, w.base.deg);
    std::vector<uint32_t> bc;
    for (uint32_t c : mp.c) bc.push_back(e.back(c));
    nlohmann::json coeffs = nlohmann::json::array();
    for (uint32_t c : bc) coeffs.push_back(field_elem_json(B, c));
    j["degree"] = w.base.deg;
    j["index"] = point_index(C, w.base);
    j["x_minpoly"] = coeffs;
    int branch = 0;
    for (auto& P : points_above(C, Poly(C.base_ptr().get(), bc)))
      if (P < w.base) ++branch;
    j["branch"] = branch;
  }
  if (cv != CurveName::X) {
    j["place_degree"] = w.deg;
    j["sheet"] = w.a;
    if (cv == CurveName::Y) j["sheet2"] = w.b;
  }
  return j;
}

nlohmann::json divisor_json(const Curve& C, const Divisor& D) {
  nlohmann::json terms = nlohmann::json::array();
  for (auto& [w, n] : D.m) terms.push_back({{"point", place_json(C, D.curve, w)}, {"mult", n}});
  return {{"curve", curve_name(D.curve)}, {"degree", D.degree()}, {"terms", terms}};
}

}  // namespace bq
