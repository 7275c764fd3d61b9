#include "biquad/bundles.hpp"

#include <algorithm>
#include <set>

namespace bq {

namespace {

int floor_div(int a, int b) { return a >= 0 ? a / b : -((-a + b - 1) / b); }

constexpr int kMaxChartPrec = 4096;

}  // namespace

const char* bundle_kind_name(BundleKind k) {
  switch (k) {
    case BundleKind::Split: return "split";
    case BundleKind::SplitSS: return "split_semistable";
    case BundleKind::Trivial2: return "trivial";
    case BundleKind::Atiyah: return "atiyah";
    case BundleKind::Res: return "restriction";
    case BundleKind::Stable: return "stable";
  }
  return "?";
}

void normalize_hnf(const GF* S, LocalHNF& h) {
  (void)S;
  if (h.clo + static_cast<int>(h.c.size()) > h.a) h.c.resize(std::max(0, h.a - h.clo));
  size_t k = 0;
  while (k < h.c.size() && h.c[k] == 0) ++k;
  h.c.erase(h.c.begin(), h.c.begin() + static_cast<long>(k));
  h.clo += static_cast<int>(k);
  while (!h.c.empty() && h.c.back() == 0) h.c.pop_back();
  if (h.c.empty()) h.clo = h.a;
}

LocalHNF hnf_from_columns(const GF* S, const Series& p1_, const Series& q1_, const Series& p2_, const Series& q2_,
                          int prec) {
  Series p1 = p1_.truncate(prec), q1 = q1_.truncate(prec), p2 = p2_.truncate(prec), q2 = q2_.truncate(prec);
  bool z1 = q1.zero_to_prec(), z2 = q2.zero_to_prec();
  if (z1 && z2) throw PrecisionLoss();
  if (z2 || (!z1 && q1.val() < q2.val())) {
    std::swap(p1, p2);
    std::swap(q1, q2);
  }
  LocalHNF h;
  h.b = q2.val();
  Series p = q1.zero_to_prec() ? p1 : p1 - (q1 / q2) * p2;
  h.a = p.val();
  Series c = p2 / q2.shift(-h.b);
  if (c.prec < h.a) throw PrecisionLoss();
  h.clo = std::min(c.lo, h.a);
  for (int e = h.clo; e < h.a; ++e) h.c.push_back(c.coef(e));
  normalize_hnf(S, h);
  return h;
}

BundleEngine::BundleEngine(const Curve& C) : C_(C), S_(C.tower().ext(2)) {
  for (auto& P : rational_points(C)) B_.push_back(to_S(P));
  std::stable_sort(B_.begin(), B_.end(), [](const GeoPt& a, const GeoPt& b) { return a.inf > b.inf; });
  A_.push_back(origin());
  for (uint32_t x = 0; x < S_->size(); ++x) {
    uint32_t f = C.cubic_at(S_.get(), x);
    if (f == 0) {
      A_.push_back(GeoPt{2, false, x, 0});
    } else if (S_->is_square(f)) {
      uint32_t y = S_->sqrt(f);
      A_.push_back(GeoPt{2, false, x, y});
      A_.push_back(GeoPt{2, false, x, S_->neg(y)});
    }
  }
}

int BundleEngine::degree(const Bundle& E) const {
  int d = 0;
  for (auto& [P, h] : E.lat) d -= h.a + h.b;
  return d;
}

GeoPt BundleEngine::det_point(const Bundle& E) const {
  GeoPt R = origin();
  for (auto& [P, h] : E.lat)
    if (!P.inf) R = point_add(C_, R, point_mul(C_, P, -(h.a + h.b)));
  return R;
}

Bundle BundleEngine::twist(const Bundle& E, const GeoPt& P, int g) const {
  Bundle F = E;
  LocalHNF& h = F.lat[P];
  h.a -= g;
  h.b -= g;
  h.clo -= g;
  if (h.c.empty()) h.clo = h.a;
  if (h.standard()) F.lat.erase(P);
  return F;
}

Bundle BundleEngine::twist_closed(const Bundle& E, const ClosedPoint& x, int g) const {
  if (x.deg == 1) return twist(E, to_S(x.geo()), g);
  if (x.deg != 2) throw std::invalid_argument("twist_closed: degree > 2");
  Bundle F = twist(E, x.geo(), g);
  return twist(F, sigma(x.geo()), g);
}

const Chart& BundleEngine::chart(const GeoPt& P, int prec) {
  auto it = charts_.find(P);
  if (it == charts_.end() || it->second.prec < prec) {
    Chart ch = make_chart(C_, P, prec);
    it = charts_.insert_or_assign(P, std::move(ch)).first;
  }
  return it->second;
}

BundleEngine::RRSpace& BundleEngine::rr(int nO, const std::vector<RRPoint>& pts) {
  std::vector<int> key{nO};
  for (auto& r : pts) {
    key.push_back(static_cast<int>(r.P.x));
    key.push_back(static_cast<int>(r.P.y));
    key.push_back(r.n);
  }
  auto& slot = rr_cache_[key];
  if (!slot) {
    slot = std::make_unique<RRSpace>();
    slot->basis = rr_basis_points(C_, S_.get(), nO, pts);
  }
  return *slot;
}

const std::vector<Series>& BundleEngine::expansions(RRSpace& sp, const GeoPt& P, int need) {
  auto it = sp.exp.find(P);
  auto good = [&](const std::vector<Series>& v) {
    return std::all_of(v.begin(), v.end(), [&](const Series& s) { return s.prec >= need; });
  };
  if (it != sp.exp.end() && good(it->second)) return it->second;
  for (int prec = std::max(need + 8, 16);; prec *= 2) {
    const Chart& ch = chart(P, prec);
    std::vector<Series> v;
    for (auto& g : sp.basis) v.push_back(expand(g, ch));
    if (good(v)) return sp.exp[P] = std::move(v);
    if (prec > kMaxChartPrec) throw PrecisionLoss();
  }
}

int BundleEngine::h0(const Bundle& E) {
  int nO1 = 0, nO2 = 0;
  std::vector<RRPoint> p1, p2;
  for (auto& [P, h] : E.lat) {
    if (P.inf) {
      nO1 = -h.m1();
      nO2 = -h.b;
      continue;
    }
    if (h.m1()) p1.push_back({P, -h.m1()});
    if (h.b) p2.push_back({P, -h.b});
  }
  RRSpace& L1 = rr(nO1, p1);
  RRSpace& L2 = rr(nO2, p2);
  int n1 = static_cast<int>(L1.basis.size()), n2 = static_cast<int>(L2.basis.size());
  if (n1 + n2 == 0) return 0;
  const GF* S = S_.get();
  GFMat M(S, 0, n1 + n2);
  for (auto& [P, h] : E.lat) {
    if (h.c.empty()) continue;
    std::vector<Series> e1 = expansions(L1, P, h.a);
    std::vector<Series> e2 = expansions(L2, P, h.a + h.b - h.clo);
    for (int j = h.clo; j < h.a; ++j) {
      std::vector<uint32_t> row(n1 + n2, 0);
      for (int k = 0; k < n1; ++k) row[k] = e1[k].coef(j);
      for (int k = 0; k < n2; ++k) {
        uint32_t s = 0;
        for (int l = 0; l < static_cast<int>(h.c.size()); ++l) {
          int e = j - h.clo - l + h.b;
          if (h.c[l]) s = S->add(s, S->mul(h.c[l], e2[k].coef(e)));
        }
        row[n1 + k] = S->neg(s);
      }
      M.add_row(row);
    }
  }
  return n1 + n2 - rank(M);
}

GeoPt BundleEngine::canon_pm(const GeoPt& P) const {
  GeoPt m = point_neg(C_, P);
  return GeoLess{}(m, P) ? m : P;
}

GeoPt BundleEngine::canon_mod2(const GeoPt& P) const {
  GeoPt best = P;
  for (auto& b : B_) {
    GeoPt c = point_add(C_, P, point_add(C_, b, b));
    if (GeoLess{}(c, best)) best = c;
  }
  return best;
}

GeoPt BundleEngine::to_base(const GeoPt& P) const {
  if (P.n == 1) return P;
  if (P.inf) return GeoPt{1, true, 0, 0};
  const Embedding& e = C_.tower().emb(1, P.n);
  return GeoPt{1, false, e.back(P.x), e.back(P.y)};
}

BundleClass BundleEngine::classify(const Bundle& E) {
  int d = degree(E);
  int k = -floor_div(d, 2);
  const GeoPt O = origin();
  Bundle E0 = twist(E, O, k);
  int d0 = d + 2 * k;
  GeoPt R = det_point(E0);
  BundleClass cls;
  int n = 0;
  GeoPt P1 = O;
  if (h0(E0) > 0) {
    int js = 0;
    while (h0(twist(E0, O, -(js + 1))) > 0) ++js;
    n = js;
    Bundle F = twist(E0, O, -js);
    for (auto& P : B_) {
      if (P.inf) continue;
      if (h0(twist(F, P, -1)) > 0) {
        n = js + 1;
        P1 = P;
        break;
      }
    }
  }
  if (n >= 1) {
    cls.kind = BundleKind::Split;
    cls.gap = 2 * n - d0;
    cls.label = point_add(C_, point_add(C_, P1, P1), point_neg(C_, R));
    return cls;
  }
  if (d0 == 1) {
    cls.kind = BundleKind::Stable;
    cls.label = canon_mod2(R);
    return cls;
  }
  Bundle F = twist(E0, O, 1);
  std::vector<std::pair<GeoPt, int>> hits;
  for (auto& P : B_) {
    int h = h0(P.inf ? E0 : twist(F, P, -1));
    if (h > 0) hits.push_back({P, h});
  }
  if (hits.size() == 2) {
    cls.kind = BundleKind::SplitSS;
    cls.label = canon_pm(point_add(C_, hits[0].first, point_neg(C_, hits[1].first)));
    return cls;
  }
  if (hits.size() == 1) {
    cls.kind = hits[0].second == 2 ? BundleKind::Trivial2 : BundleKind::Atiyah;
    return cls;
  }
  if (!hits.empty()) throw std::logic_error("classify: inconsistent semistable probes");
  for (auto& P : A_) {
    if (P.inf || std::find(B_.begin(), B_.end(), P) != B_.end()) continue;
    if (h0(twist(F, P, -1)) > 0) {
      cls.kind = BundleKind::Res;
      cls.label = canon_pm(point_add(C_, P, point_neg(C_, sigma(P))));
      return cls;
    }
  }
  throw std::logic_error("classify: no class found");
}

int64_t BundleEngine::aut_size(const BundleClass& c) const {
  int64_t q = C_.q();
  auto two_torsion = [&](const GeoPt& P) { return point_add(C_, P, P).inf; };
  switch (c.kind) {
    case BundleKind::Split: {
      int64_t r = q - 1;
      for (int i = 0; i < c.gap; ++i) r *= q;
      return r;
    }
    case BundleKind::SplitSS: return two_torsion(c.label) ? 2 * (q - 1) : q - 1;
    case BundleKind::Trivial2: return q * (q * q - 1);
    case BundleKind::Atiyah: return q;
    case BundleKind::Res: return two_torsion(c.label) ? 2 * (q + 1) : q + 1;
    case BundleKind::Stable: return 4;
  }
  return 0;
}

LocalHNF BundleEngine::conj(const LocalHNF& h) const {
  LocalHNF r = h;
  for (auto& v : r.c) v = sig(v);
  return r;
}

std::vector<Bundle> BundleEngine::lower_modifications(const Bundle& E, const ClosedPoint& x) const {
  if (x.deg > 2) throw std::invalid_argument("lower_modifications: degree > 2");
  GeoPt P = x.deg == 1 ? to_S(x.geo()) : x.geo();
  LocalHNF h;
  if (auto it = E.lat.find(P); it != E.lat.end()) h = it->second;
  std::vector<uint32_t> alphas;
  if (x.deg == 1)
    for (uint32_t a = 0; a < C_.q(); ++a) alphas.push_back(C_.embed_base(a, S_.get()));
  else
    for (uint32_t a = 0; a < S_->size(); ++a) alphas.push_back(a);
  std::vector<LocalHNF> mods;
  for (uint32_t al : alphas) {
    LocalHNF m = h;
    if (m.c.empty()) m.clo = m.a;
    m.c.resize(m.a - m.clo, 0);
    m.c.push_back(al);
    m.a += 1;
    normalize_hnf(S_.get(), m);
    mods.push_back(m);
  }
  LocalHNF m = h;
  m.b += 1;
  m.clo += 1;
  normalize_hnf(S_.get(), m);
  mods.push_back(m);
  std::vector<Bundle> out;
  for (auto& m : mods) {
    Bundle F = E;
    auto put = [&](const GeoPt& Q, const LocalHNF& v) {
      if (v.standard())
        F.lat.erase(Q);
      else
        F.lat[Q] = v;
    };
    put(P, m);
    if (x.deg == 2) put(sigma(P), conj(m));
    out.push_back(std::move(F));
  }
  return out;
}

Bundle BundleEngine::line_plus_trivial(const PicElement& L) const {
  Bundle E;
  GeoPt Q = to_S(L.point);
  E.lat[origin()].a -= L.degree - 1;
  E.lat[Q].a -= 1;
  for (auto& [P, h] : E.lat) h.clo = h.a;
  std::erase_if(E.lat, [](const auto& kv) { return kv.second.standard(); });
  return E;
}

Bundle BundleEngine::extension(const Extension& e) const {
  Bundle E = line_plus_trivial(e.L);
  LocalHNF& h = E.lat[origin()];
  h.clo = e.ulo;
  h.c = e.u;
  if (h.clo > h.a) {
    h.c.clear();
    h.clo = h.a;
  }
  normalize_hnf(S_.get(), h);
  if (h.standard()) E.lat.erase(origin());
  return E;
}

std::vector<Extension> BundleEngine::extension_classes(const PicElement& L) {
  auto key = std::make_tuple(L.degree, L.point.inf, L.point.x, L.point.y);
  if (auto it = ext_cache_.find(key); it != ext_cache_.end()) return it->second;
  const GF* F = C_.base_ptr().get();
  int dO = L.degree - 1 + (L.point.inf ? 1 : 0);
  int a = -dO;
  int W = std::max(1, 1 - L.degree) + 1;
  std::vector<RRPoint> pts;
  if (!L.point.inf) pts.push_back({L.point, 1});
  auto basis = rr_basis_points(C_, F, dO + W, pts);
  GFMat M(F, 0, W);
  for (int prec = a + 16;; prec *= 2) {
    Chart ch = make_chart(C_, GeoPt{1, true, 0, 0}, std::max(prec, 16));
    try {
      GFMat m(F, 0, W);
      for (auto& g : basis) {
        Series s = expand(g, ch);
        std::vector<uint32_t> row(W);
        for (int j = 0; j < W; ++j) row[j] = s.coef(a - W + j);
        m.add_row(row);
      }
      M = m;
      break;
    } catch (const PrecisionLoss&) {
      if (prec > kMaxChartPrec) throw;
    }
  }
  auto piv = rref(M);
  std::vector<int> free;
  for (int j = 0; j < W; ++j)
    if (std::find(piv.begin(), piv.end(), j) == piv.end()) free.push_back(j);
  int h = static_cast<int>(free.size());
  h1_cache_[key] = h;
  std::vector<Extension> out;
  uint32_t q = C_.q();
  uint64_t total = 1;
  for (int i = 0; i < h; ++i) total *= q;
  for (uint64_t idx = 1; idx < total; ++idx) {
    std::vector<uint32_t> v(h);
    uint64_t r = idx;
    for (int i = 0; i < h; ++i) {
      v[i] = static_cast<uint32_t>(r % q);
      r /= q;
    }
    int first = 0;
    while (v[first] == 0) ++first;
    if (v[first] != 1) continue;
    Extension e;
    e.L = L;
    e.ulo = a - W;
    e.u.assign(W, 0);
    for (int i = 0; i < h; ++i) e.u[free[i]] = C_.embed_base(v[i], S_.get());
    out.push_back(e);
  }
  ext_cache_[key] = out;
  return out;
}

int BundleEngine::h1(const PicElement& L) {
  auto key = std::make_tuple(L.degree, L.point.inf, L.point.x, L.point.y);
  if (!h1_cache_.count(key)) extension_classes(L);
  return h1_cache_.at(key);
}

Bundle BundleEngine::res_bundle(const GeoPt& P) const {
  const GF* S = S_.get();
  uint32_t th = S->gen(), thq = sig(th);
  uint32_t di = S->inv(S->sub(thq, th));
  auto k = [&](uint32_t v, int e) { return Series::monomial(S, S->mul(v, di), e, Series::kExact); };
  LocalHNF h = hnf_from_columns(S, k(thq, -1), k(S->neg(1), -1), k(S->neg(th), 0), k(1, 0), 16);
  Bundle E;
  E.lat[P] = h;
  E.lat[sigma(P)] = conj(h);
  E.lat[origin()] = LocalHNF{1, 1, 1, {}};
  return E;
}

Bundle BundleEngine::pushforward(const PicElement& e) {
  int i = cover_index(e.curve);
  if (!i) throw std::invalid_argument("pushforward: not a cover class");
  CurveName cv = e.curve;
  const GF* S = S_.get();
  Divisor D = pic_divisor(C_, e);
  std::set<ClosedPoint> pts{two_torsion(C_, 1), two_torsion(C_, 2), ClosedPoint::origin()};
  for (auto& [w, m] : D.m) pts.insert(w.base);
  const Embedding& emb = C_.tower().emb(1, 2);
  Bundle E;
  for (auto& v : pts) {
    if (v.deg != 1) throw std::invalid_argument("pushforward: support of degree > 1");
    CoverData cd = cover_data(C_, v);
    int h = cd.half_val[i - 1];
    auto ws = places_above(C_, cv, v);
    LocalHNF hnf;
    if (cd.chi[i - 1] == 1) {
      Place wp = ws[0].a == 1 ? ws[0] : ws[1];
      Place wm = ws[0].a == 1 ? ws[1] : ws[0];
      int d = D.mult(wp), dm = D.mult(wm);
      if (d == 0 && dm == 0 && h == 0) continue;
      for (int prec = 16;; prec *= 2) {
        try {
          PlaceChart pc = make_place_chart(C_, cv, wp, prec + std::abs(h) + std::abs(d) + std::abs(dm));
          Series rho = pc.s[i - 1];
          std::vector<uint32_t> c(rho.c.size());
          for (size_t j = 0; j < c.size(); ++j) c[j] = emb(rho.c[j]);
          Series r(S, rho.lo, rho.prec, c);
          Series ri = r.inv();
          uint32_t half = S->inv(S->from_int(2));
          Series g1 = Series::monomial(S, half, -d, Series::kExact);
          Series g2 = Series::monomial(S, half, -dm, Series::kExact);
          hnf = hnf_from_columns(S, g1, g1 * ri, g2, -(g2 * ri), prec);
          break;
        } catch (const PrecisionLoss&) {
          if (prec > kMaxChartPrec) throw;
        }
      }
    } else {
      int d = D.mult(ws[0]);
      if (d == 0 && h == 0) continue;
      hnf.a = -d;
      hnf.b = -d - h;
      hnf.clo = hnf.a;
    }
    if (!hnf.standard()) E.lat[to_S(v.geo())] = hnf;
  }
  return E;
}

Bundle BundleEngine::representative(const BundleClass& c) {
  auto pic = [&](int d, const GeoPt& P) {
    PicElement L;
    L.degree = d;
    L.point = to_base(P);
    return L;
  };
  switch (c.kind) {
    case BundleKind::Split: return line_plus_trivial(pic(c.gap, c.label));
    case BundleKind::SplitSS: return line_plus_trivial(pic(0, c.label));
    case BundleKind::Trivial2: return Bundle{};
    case BundleKind::Atiyah: return extension(extension_classes(pic(0, origin())).at(0));
    case BundleKind::Stable: return extension(extension_classes(pic(-1, c.label)).at(0));
    case BundleKind::Res:
      for (auto& P : A_) {
        if (P.inf || std::find(B_.begin(), B_.end(), P) != B_.end()) continue;
        if (canon_pm(point_add(C_, P, point_neg(C_, sigma(P)))) == c.label) return res_bundle(P);
      }
      throw std::invalid_argument("representative: unknown restriction label");
  }
  return Bundle{};
}

}  // namespace bq
