#include "biquad/orbital.hpp"

#include <set>
#include <sstream>

#include "biquad/pic.hpp"
#include "biquad/rr.hpp"

namespace bq {

LaurentPoly LaurentPoly::monomial(int n, const mpq_class& v) {
  LaurentPoly r;
  r.add(n, v);
  return r;
}

void LaurentPoly::add(int n, const mpq_class& v) {
  if (v == 0) return;
  auto [it, fresh] = c.emplace(n, v);
  if (fresh) return;
  it->second += v;
  if (it->second == 0) c.erase(it);
}

mpq_class LaurentPoly::coef(int n) const {
  auto it = c.find(n);
  return it == c.end() ? mpq_class(0) : it->second;
}

LaurentPoly LaurentPoly::operator+(const LaurentPoly& o) const {
  LaurentPoly r = *this;
  for (auto& [n, v] : o.c) r.add(n, v);
  return r;
}

LaurentPoly LaurentPoly::operator*(const LaurentPoly& o) const {
  LaurentPoly r;
  for (auto& [n, v] : c)
    for (auto& [m, w] : o.c) r.add(n + m, v * w);
  return r;
}

LaurentPoly LaurentPoly::scaled(const mpq_class& v) const {
  LaurentPoly r;
  for (auto& [n, w] : c) r.add(n, v * w);
  return r;
}

LaurentPoly LaurentPoly::reflected() const {
  LaurentPoly r;
  for (auto& [n, v] : c) r.add(-n, v);
  return r;
}

bool LaurentPoly::integral() const {
  for (auto& [n, v] : c)
    if (v.get_den() != 1) return false;
  return true;
}

nlohmann::json rational_json(const mpq_class& v) {
  if (v.get_den() == 1 && v.get_num().fits_slong_p()) return v.get_num().get_si();
  return v.get_str();
}

nlohmann::json LaurentPoly::to_json() const {
  nlohmann::json j = nlohmann::json::object();
  for (auto& [n, v] : c) j[std::to_string(n)] = rational_json(v);
  return j;
}

std::string LaurentPoly::str() const {
  if (c.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  for (auto& [n, v] : c) {
    if (!first) os << " + ";
    first = false;
    os << v.get_str();
    if (n) os << "*z^" << n;
  }
  return os.str();
}

TowerElement to_tower(const K3Global& z) { return TowerElement(Level::K3, {z.a, z.b}); }

K3Global k3_of(const Curve& C, const TowerElement& z) {
  TowerElement t = z.at_level(Level::K3);
  return {t.c[0], t.c[1], FElem::u(&C, C.base_ptr().get(), 3)};
}

namespace {

FElem half(const Curve& C) {
  const GF* F = C.base_ptr().get();
  return FElem::constant(&C, F, F->inv(F->from_int(2)));
}

bool trace_one(const Curve& C, const K3Global& xi) {
  return xi.trace() == FElem::from_int(&C, C.base_ptr().get(), 1);
}

void require_effective_x(const Divisor& D) {
  if (D.curve != CurveName::X) throw CurveMismatch("expected a divisor on X");
  if (!D.effective()) throw std::invalid_argument("expected an effective divisor");
}

int eta_pow(int eta_w, int k) { return (k % 2 != 0 && eta_w == -1) ? -1 : 1; }

}  // namespace

bool in_A_D(const Curve& C, const K3Global& xi, const Divisor& D) {
  require_effective_x(D);
  if (xi.is_zero() || !trace_one(C, xi)) return false;
  return (divisor_of(to_tower(xi)) + pullback(C, D, CurveName::Y3)).effective();
}

std::vector<K3Global> enumerate_A_D(const Curve& C, const Divisor& D) {
  require_effective_x(D);
  const GF* F = C.base_ptr().get();
  auto basis = rr_basis_x(C, D + half_div_u(C, 3));
  uint64_t count = 1;
  for (size_t i = 0; i < basis.size(); ++i) {
    count *= F->size();
    if (count > (1u << 20)) throw BoundExceeded("A_D has more than 2^20 elements");
  }
  FElem h = half(C), u3 = FElem::u(&C, F, 3);
  std::vector<K3Global> out;
  out.reserve(count);
  std::vector<uint32_t> coef(basis.size(), 0);
  for (uint64_t n = 0; n < count; ++n) {
    FElem b(&C, F);
    for (size_t j = 0; j < basis.size(); ++j)
      if (coef[j]) b = b + basis[j].scale(coef[j]);
    out.push_back({h, b, u3});
    for (size_t j = 0; j < coef.size(); ++j) {
      if (++coef[j] < F->size()) break;
      coef[j] = 0;
    }
  }
  return out;
}

OrbitalInstance make_instance(const Curve& C, const K3Global& xi, const Divisor& D) {
  require_effective_x(D);
  if (!trace_one(C, xi)) throw NotInDomain("Tr xi != 1");
  if (!xi.is_unit()) throw NotInDomain("xi is zero");
  return {xi, D, construct_gamma(xi)};
}

Divisor xi_divisor(const Curve& C, const OrbitalInstance& inst) {
  return divisor_of(to_tower(inst.xi)) + pullback(C, inst.D, CurveName::Y3);
}

LaurentPoly orbital_route_split(const Curve& C, const OrbitalInstance& inst) {
  if (!trace_one(C, inst.xi)) throw NotInDomain("Tr xi != 1");
  Divisor Dxi = xi_divisor(C, inst);
  if (!Dxi.effective()) throw NotInDomain("div(xi) + f3^* D is not effective");
  std::vector<std::tuple<int, int, int>> terms;  // mult, degree, eta
  for (auto& [w, n] : Dxi.m) terms.emplace_back(n, w.deg, eta(C, w));
  int d = inst.D.degree();
  LaurentPoly r;
  std::function<void(size_t, int, int)> rec = [&](size_t i, int deg1, int sign) {
    if (i == terms.size()) {
      r.add(deg1 - d, sign);
      return;
    }
    auto [n, dw, e] = terms[i];
    for (int k = 0; k <= n; ++k) rec(i + 1, deg1 + k * dw, sign * eta_pow(e, k));
  };
  rec(0, 0, 1);
  return r;
}

LaurentPoly orbital_route_adelic(const Curve& C, const OrbitalInstance& inst) {
  if (!trace_one(C, inst.xi)) throw NotInDomain("Tr xi != 1");
  const K3Global& g1 = inst.gamma.g1;
  const K3Global& g2 = inst.gamma.g2;
  K3Global delta = g1 * g2.sigma() - g1.sigma() * g2;
  if (delta.is_zero()) throw SingularMap();
  TowerElement t1 = to_tower(g1), t2 = to_tower(g2), td = to_tower(delta);

  std::set<ClosedPoint> base;
  for (const Divisor& E : {divisor_of(t1), divisor_of(t2), divisor_of(td)})
    for (auto& [w, n] : E.m) base.insert(w.base);
  for (auto& [w, n] : inst.D.m) base.insert(w.base);

  struct Local {
    ClosedPoint x;
    int Dx = 0, vdelta = 0;
    std::vector<int> idx;  // positions in ws
  };
  struct Slot {
    Place w;
    int v1, v2, eta, local;
  };
  std::vector<Local> locs;
  std::vector<Slot> ws;
  for (const ClosedPoint& x : base) {
    Local L{x, inst.D.mult(Place::of(x)), 0, {}};
    auto above = places_above(C, CurveName::Y3, x);
    L.vdelta = valuation(C, td, CurveName::Y3, above.front());
    for (const Place& w : above) {
      L.idx.push_back(static_cast<int>(ws.size()));
      ws.push_back({w, valuation(C, t1, CurveName::Y3, w), valuation(C, t2, CurveName::Y3, w), eta(C, w),
                    static_cast<int>(locs.size())});
    }
    locs.push_back(std::move(L));
  }

  int d = inst.D.degree();
  int budget = 2 * d + 1;
  std::vector<int> E3(ws.size());
  LaurentPoly r;
  auto visit = [&]() {
    int degE2 = 0, degE3 = 0, sign = 1;
    for (const Local& L : locs) {
      // det condition: v(Delta) + (f3_* E3)(x) - E1(x) - E2(x) = D(x)
      int push = 0;
      for (int i : L.idx) push += E3[i] * (ws[i].w.deg / L.x.deg);
      int e2 = L.vdelta + push - L.Dx;
      // integrality of z -> (Tr g1 z, Tr g2 z) on the local lattices
      for (int i : L.idx) {
        if (ws[i].v1 + E3[i] < 0) return;
        if (ws[i].v2 + E3[i] < e2) return;
      }
      degE2 += e2 * L.x.deg;
    }
    for (size_t i = 0; i < ws.size(); ++i) {
      degE3 += E3[i] * ws[i].w.deg;
      sign *= eta_pow(ws[i].eta, E3[i]);
    }
    if (degE3 > 2 * d) throw SearchBoundExceeded("valid triple beyond the degree bound");
    r.add(degE2, sign);
  };
  std::function<void(size_t, int)> rec = [&](size_t i, int used) {
    if (i == ws.size()) {
      visit();
      return;
    }
    for (int th = 0; used + th * ws[i].w.deg <= budget; ++th) {
      E3[i] = -ws[i].v1 + th;
      rec(i + 1, used + th * ws[i].w.deg);
    }
  };
  rec(0, 0);
  return r;
}

LaurentPoly j_total(const Curve& C, const Divisor& D) {
  LaurentPoly r;
  for (const K3Global& xi : enumerate_A_D(C, D)) r = r + orbital_route_split(C, make_instance(C, xi, D));
  return r;
}

LaurentPoly j_total(const Curve& C, const HeckeElement& f) {
  LaurentPoly r;
  for (const HeckeTerm& t : f) r = r + j_total(C, t.D).scaled(t.coef);
  return r;
}

mpq_class j_derivative(const LaurentPoly& j, int r) {
  if (r < 0) throw std::invalid_argument("j_derivative: r < 0");
  mpq_class s = 0;
  for (auto& [n, v] : j.c) {
    mpz_class p = 1;
    for (int i = 0; i < r; ++i) p *= 2 * n;
    s += v * p;
  }
  return s;
}

mpq_class j_derivative(const Curve& C, const HeckeElement& f, int r) { return j_derivative(j_total(C, f), r); }

namespace {

// 2x2 matrices over F_q((t)) with monomial-exact entries.
using SMat = std::array<Series, 4>;

Series mono(const GF* F, int64_t a, int e) { return Series::monomial(F, F->from_int(a), e, Series::kExact); }

Series mono_inv(const Series& m) {
  if (m.c.size() != 1) throw std::logic_error("mono_inv: not a monomial");
  return Series::monomial(m.F, m.F->inv(m.c[0]), -m.lo, Series::kExact);
}

// A O^2 = lambda B O^2 for some scalar lambda, B diagonal: the entries of
// N = B^-1 A have minimal valuation v(det N) / 2.
bool same_lattice_class(const SMat& A, const SMat& Bdiag) {
  Series i0 = mono_inv(Bdiag[0]), i1 = mono_inv(Bdiag[3]);
  SMat N{A[0] * i0, A[1] * i0, A[2] * i1, A[3] * i1};
  Series det = N[0] * N[3] - N[1] * N[2];
  if (det.zero_to_prec()) return false;
  int m = INT32_MAX;
  for (auto& e : N)
    if (!e.zero_to_prec()) m = std::min(m, e.val());
  return 2 * m == det.val();
}

}  // namespace

LaurentPoly local_orbital_unit(const Curve& C, const ClosedPoint& x, const TowerElement& eps) {
  TowerElement e;
  try {
    e = eps.at_level(Level::K3);
  } catch (const LevelMismatch&) {
    throw BadEpsilon("epsilon must lie in K3");
  }
  if (e.is_zero() || !e.c[0].is_zero()) throw BadEpsilon("epsilon must be nonzero with trace 0");
  const GF* F = C.base_ptr().get();
  auto above = places_above(C, CurveName::Y3, x);
  // c in F_x with c eps a unit
  int vc = -valuation(C, e, CurveName::Y3, above.front());
  int W = std::abs(vc) + 2;
  LaurentPoly r;
  if (above.size() == 1) {
    // phi(O_K3) = (1, c) O_K0 against (1, w^k) O_K0
    SMat phi{mono(F, 1, 0), Series::zero(F, Series::kExact), Series::zero(F, Series::kExact), mono(F, 1, vc)};
    for (int k = -W; k <= W; ++k) {
      SMat tk{mono(F, 1, 0), Series::zero(F, Series::kExact), Series::zero(F, Series::kExact), mono(F, 1, k)};
      if (same_lattice_class(phi, tk)) r.add(-k * x.deg, 1);
    }
    return r;
  }
  int eta_w = eta(C, above.front());
  for (int k = -W; k <= W; ++k) {
    SMat tk{mono(F, 1, 0), Series::zero(F, Series::kExact), Series::zero(F, Series::kExact), mono(F, 1, k)};
    for (int l = -W; l <= W; ++l) {
      // phi((e + w^l f) O_K3) spanned by (1, c) and (w^l, -w^l c)
      SMat phi{mono(F, 1, 0), mono(F, 1, l), mono(F, 1, vc), mono(F, -1, l + vc)};
      if (same_lattice_class(phi, tk)) r.add(-k * x.deg, eta_pow(eta_w, l));
    }
  }
  return r;
}

namespace {

Divisor sigma_divisor(const Divisor& D) {
  Divisor r(D.curve);
  for (auto& [w, n] : D.m) r.add(Place{w.base, static_cast<int8_t>(-w.a), w.b, w.deg}, n);
  return r;
}

bool constant_value(const FElem& f, uint32_t& v) {
  if (!f.b.is_zero() || !f.a.is_poly() || f.a.num.deg() > 0) return false;
  v = f.a.num.coef(0) ? f.S->mul(f.a.num.coef(0), f.S->inv(f.a.den.lc())) : 0;
  return true;
}

}  // namespace

EmbeddingPair<FElem> canonical_optimal_pair(const Curve& C) {
  const GF* F = C.base_ptr().get();
  FElem u1 = FElem::u(&C, F, 1), u2 = FElem::u(&C, F, 2);
  Divisor P2O = Divisor::point(two_torsion(C, 2)) - Divisor::point(ClosedPoint::origin());
  Divisor base = pullback(C, P2O, CurveName::Y1);
  // w in K1 with Nm w = u2 and div w = f1^*(P2 - O) + B - sigma B
  auto places = rational_places(C, CurveName::Y1);
  std::vector<Divisor> Bs{Divisor(CurveName::Y1)};
  for (size_t i = 0; i < places.size(); ++i) {
    Bs.push_back(Divisor::point(CurveName::Y1, places[i]));
    for (size_t j = 0; j < places.size(); ++j)
      if (j != i) Bs.push_back(Divisor::point(CurveName::Y1, places[i]) - Divisor::point(CurveName::Y1, places[j]));
  }
  for (const Divisor& B : Bs) {
    Divisor A = base + B - sigma_divisor(B);
    if (!is_principal(C, A)) continue;
    auto basis = riemann_roch_basis(C, -A);
    if (basis.size() != 1) continue;
    TowerElement w = basis[0].at_level(Level::K1);
    FElem nm = norm(w, Level::F).c[0] / u2;
    uint32_t c;
    if (!constant_value(nm, c) || c == 0 || !F->is_square(c)) continue;
    w = w * TowerElement::from_f(FElem::constant(&C, F, F->inv(F->sqrt(c))));
    FElem a = w.c[0], cc = w.c[1];
    FElem zero(&C, F), one = FElem::from_int(&C, F, 1);
    return {u1, u2, Mat2<FElem>{zero, u1, one, zero}, Mat2<FElem>{a, -(cc * u1), cc, -a}};
  }
  throw std::logic_error("canonical_optimal_pair: no norm solution found");
}

EmbeddingPair<FElem> pair_from_entries(const Curve& C, const FElem& a, const FElem& c) {
  const GF* F = C.base_ptr().get();
  FElem u1 = FElem::u(&C, F, 1), u2 = FElem::u(&C, F, 2);
  FElem zero(&C, F), one = FElem::from_int(&C, F, 1);
  return {u1, u2, Mat2<FElem>{zero, u1, one, zero}, Mat2<FElem>{a, (u2 - a * a) / c, c, -a}};
}

std::vector<ClosedPoint> optimality_support(const EmbeddingPair<FElem>& p) {
  std::set<ClosedPoint> s;
  for (const FElem& d : {p.d1, p.d2})
    for (auto& [w, n] : divisor_of(d).m) s.insert(w.base);
  for (const Mat2<FElem>* m : {&p.m1, &p.m2})
    for (const FElem* e : {&m->a, &m->b, &m->c, &m->d}) {
      if (e->is_zero()) continue;
      for (auto& [w, n] : divisor_of(*e).m)
        if (n < 0) s.insert(w.base);
    }
  return {s.begin(), s.end()};
}

namespace {

struct LVec {
  Series a, b;
};

bool is_zero_series(const Series& s) { return s.zero_to_prec(); }

bool integral(const Series& s) { return is_zero_series(s) || s.val() >= 0; }

int half_valuation(const FElem& d, const ClosedPoint& x) {
  int v = valuation(d, x.geo());
  if (v % 2) throw std::invalid_argument("d_i must have even valuation at every place");
  return v / 2;
}

}  // namespace

bool locally_optimal(const Curve& C, const EmbeddingPair<FElem>& p, const ClosedPoint& x) {
  const int prec = 48;
  Chart ch = make_chart(C, x.geo(), prec);
  const GF* G = ch.G.get();
  auto ex = [&](const FElem& f, int k) {
    if (f.is_zero()) return Series::zero(G, prec);
    return expand(f, ch).shift(-k);
  };
  // generators s_i t^{-k_i} of the maximal orders O_i at x
  int k1 = half_valuation(p.d1, x), k2 = half_valuation(p.d2, x);
  SMat A1{ex(p.m1.a, k1), ex(p.m1.b, k1), ex(p.m1.c, k1), ex(p.m1.d, k1)};
  SMat A2{ex(p.m2.a, k2), ex(p.m2.b, k2), ex(p.m2.c, k2), ex(p.m2.d, k2)};
  auto mul = [](const SMat& X, const SMat& Y) {
    return SMat{X[0] * Y[0] + X[1] * Y[2], X[0] * Y[1] + X[1] * Y[3], X[2] * Y[0] + X[3] * Y[2],
                X[2] * Y[1] + X[3] * Y[3]};
  };
  SMat A12 = mul(A1, A2);
  Series one = Series::constant(G, 1, Series::kExact), zero = Series::zero(G, Series::kExact);
  std::vector<LVec> gens{{one, zero}, {zero, one}};
  for (const SMat* X : {&A1, &A2, &A12}) {
    gens.push_back({(*X)[0], (*X)[2]});
    gens.push_back({(*X)[1], (*X)[3]});
  }
  // Hermite basis (a1, 0), (a2, b2) of the O_x-span of the generators
  size_t piv = gens.size();
  for (size_t i = 0; i < gens.size(); ++i)
    if (!is_zero_series(gens[i].b) && (piv == gens.size() || gens[i].b.val() < gens[piv].b.val())) piv = i;
  LVec g2 = gens[piv];
  std::optional<Series> a1;
  for (size_t i = 0; i < gens.size(); ++i) {
    if (i == piv) continue;
    Series a = gens[i].a;
    if (!is_zero_series(gens[i].b)) a = a - (gens[i].b / g2.b) * g2.a;
    if (is_zero_series(a)) continue;
    if (!a1 || a.val() < a1->val()) a1 = a;
  }
  if (!a1) throw std::logic_error("locally_optimal: degenerate lattice");
  auto member = [&](const Series& pa, const Series& pb) {
    Series beta = is_zero_series(pb) ? zero : pb / g2.b;
    Series rest = is_zero_series(beta) ? pa : pa - beta * g2.a;
    Series alpha = is_zero_series(rest) ? zero : rest / *a1;
    return integral(beta) && integral(alpha);
  };
  for (const SMat* X : {&A1, &A2}) {
    const SMat& M = *X;
    LVec b1{*a1, zero};
    for (const LVec& v : {b1, g2})
      if (!member(M[0] * v.a + M[1] * v.b, M[2] * v.a + M[3] * v.b)) return false;
  }
  return true;
}

bool xi_integral_at(const Curve& C, const EmbeddingPair<FElem>& p, const ClosedPoint& x) {
  (void)C;
  K3Elt<FElem> xi = inv_embedding(p).xi;
  int k3 = half_valuation(p.d1, x) + half_valuation(p.d2, x);
  if (!xi.a.is_zero() && valuation(xi.a, x.geo()) < 0) return false;
  if (!xi.b.is_zero() && valuation(xi.b, x.geo()) + k3 < 0) return false;
  return true;
}

bool is_optimal_pair(const Curve& C, const EmbeddingPair<FElem>& p, bool check_degree_bound) {
  auto support = optimality_support(p);
  if (check_degree_bound)
    for (const ClosedPoint& x : support)
      if (x.deg > C.config().degree_bound)
        throw BoundExceeded("optimality check needs a point of degree " + std::to_string(x.deg));
  for (const ClosedPoint& x : support) {
    bool lattice = locally_optimal(C, p, x);
    if (lattice != xi_integral_at(C, p, x)) throw std::logic_error("is_optimal_pair: lattice and integrality tests disagree");
    if (!lattice) return false;
  }
  return true;
}

nlohmann::json orbital_table_json(const Curve& C, const Divisor& D, const std::vector<int>& rs) {
  auto A = enumerate_A_D(C, D);
  nlohmann::json per = nlohmann::json::array();
  LaurentPoly total;
  for (const K3Global& xi : A) {
    OrbitalInstance inst = make_instance(C, xi, D);
    LaurentPoly ra = orbital_route_adelic(C, inst), rb = orbital_route_split(C, inst);
    total = total + rb;
    per.push_back({{"xi", to_tower(xi).str()}, {"routeA", ra.to_json()}, {"routeB", rb.to_json()}, {"equal", ra == rb}});
  }
  nlohmann::json der = nlohmann::json::object();
  for (int r : rs) der[std::to_string(r)] = rational_json(j_derivative(total, r));
  return {{"D", divisor_json(C, D)},
          {"A_D_size", A.size()},
          {"per_xi", per},
          {"j_total", total.to_json()},
          {"j_derivatives", der}};
}

}  // namespace bq
