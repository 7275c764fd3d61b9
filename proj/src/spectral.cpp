#include "biquad/spectral.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <set>

namespace bq {

SpectralConfig SpectralConfig::from_json(const nlohmann::json& j) {
  SpectralConfig c;
  if (!j.is_object()) return c;
  c.gap_bound = j.value("gap_bound", c.gap_bound);
  c.constant_depth = j.value("constant_depth", c.constant_depth);
  c.hecke_degree = j.value("hecke_degree", c.hecke_degree);
  if (c.gap_bound < 1 || c.constant_depth < 1) throw ConfigError("spectral: gap_bound and constant_depth must be >= 1");
  if (c.hecke_degree < 1 || c.hecke_degree > 2) throw ConfigError("spectral: hecke_degree must be 1 or 2");
  return c;
}

nlohmann::json SpectralConfig::to_json() const {
  return {{"gap_bound", gap_bound}, {"constant_depth", constant_depth}, {"hecke_degree", hecke_degree}};
}

std::vector<BundleClass> enumerate_bundles(BundleEngine& eng, int bound) {
  const Curve& C = eng.curve();
  std::set<BundleClass> out;
  const GeoPt O = eng.origin();
  out.insert(BundleClass{BundleKind::Trivial2, 0, O});
  out.insert(BundleClass{BundleKind::Atiyah, 0, O});
  auto in_B = [&](const GeoPt& P) { return std::find(eng.B().begin(), eng.B().end(), P) != eng.B().end(); };
  for (auto& P : eng.B()) {
    if (!P.inf) out.insert(BundleClass{BundleKind::SplitSS, 0, eng.canon_pm(P)});
    out.insert(BundleClass{BundleKind::Stable, 0, eng.canon_mod2(P)});
    for (int g = 1; g <= bound; ++g) out.insert(BundleClass{BundleKind::Split, g, P});
  }
  for (auto& P : eng.A())
    if (!in_B(P))
      out.insert(BundleClass{BundleKind::Res, 0, eng.canon_pm(point_add(C, P, point_neg(C, eng.sigma(P))))});
  return {out.begin(), out.end()};
}

Spectral::Spectral(const Curve& C, SpectralConfig cfg) : C_(C), cfg_(cfg), eng_(C) {
  classes_ = enumerate_bundles(eng_, cfg_.gap_bound);
  for (size_t i = 0; i < classes_.size(); ++i) {
    index_[classes_[i]] = static_cast<int>(i);
    auts_.push_back(eng_.aut_size(classes_[i]));
    reps_.push_back(eng_.representative(classes_[i]));
  }
}

int Spectral::index(const BundleClass& c) const {
  auto it = index_.find(c);
  return it == index_.end() ? -1 : it->second;
}

const std::map<BundleClass, int>& Spectral::hecke_row(int i, const ClosedPoint& x) {
  auto key = std::make_pair(i, x);
  auto it = rows_.find(key);
  if (it != rows_.end()) return it->second;
  std::map<BundleClass, int> row;
  for (auto& F : eng_.lower_modifications(reps_[i], x)) row[eng_.classify(F)] += 1;
  return rows_[key] = std::move(row);
}

QMat Spectral::hecke_matrix(const ClosedPoint& x) {
  int n = size();
  QMat A(n, QVec(n, 0));
  for (int i = 0; i < n; ++i)
    for (auto& [c, k] : hecke_row(i, x))
      if (int j = index(c); j >= 0) A[i][j] += k;
  return A;
}

QVec Spectral::hecke_apply(const ClosedPoint& x, const QVec& phi) {
  QVec r(size(), 0);
  for (int i = 0; i < size(); ++i)
    for (auto& [c, k] : hecke_row(i, x))
      if (int j = index(c); j >= 0 && phi[j] != 0) r[i] += k * phi[j];
  return r;
}

QVec Spectral::hecke_apply_adjoint(const ClosedPoint& x, const QVec& phi) {
  QVec r(size(), 0);
  for (int j = 0; j < size(); ++j) {
    if (phi[j] == 0) continue;
    for (auto& [c, k] : hecke_row(j, x)) {
      int i = index(c);
      if (i < 0) continue;
      r[i] += mpq_class(k * auts_[i]) / auts_[j] * phi[j];
    }
  }
  return r;
}

mpq_class Spectral::petersson(const QVec& a, const QVec& b) const {
  mpq_class s = 0;
  for (int i = 0; i < size(); ++i)
    if (a[i] != 0 && b[i] != 0) s += a[i] * b[i] / auts_[i];
  return s;
}

QMat Spectral::constant_term_matrix() {
  QMat M;
  int64_t q = C_.q();
  for (int d = -cfg_.constant_depth; d <= cfg_.gap_bound; ++d)
    for (auto& P : eng_.B()) {
      PicElement L;
      L.degree = d;
      L.point = eng_.to_base(P);
      QVec row(size(), 0);
      if (int j = index_of(eng_.line_plus_trivial(L)); j >= 0) row[j] += 1;
      for (auto& e : eng_.extension_classes(L))
        if (int j = index_of(eng_.extension(e)); j >= 0) row[j] += q - 1;
      if (std::any_of(row.begin(), row.end(), [](const mpq_class& v) { return v != 0; })) M.push_back(row);
    }
  return M;
}

const std::vector<QVec>& Spectral::cusp_basis() {
  if (!have_cusp_) {
    QMat M = constant_term_matrix();
    if (M.empty())
      for (int i = 0; i < size(); ++i) {
        QVec e(size(), 0);
        e[i] = 1;
        cusp_.push_back(e);
      }
    else
      cusp_ = q_nullspace(M);
    have_cusp_ = true;
  }
  return cusp_;
}

const std::vector<ClosedPoint>& Spectral::hecke_points() {
  if (hpoints_.empty())
    for (int d = 1; d <= cfg_.hecke_degree; ++d)
      for (auto& x : closed_points_of_degree(C_, d)) hpoints_.push_back(x);
  return hpoints_;
}

QMat Spectral::cusp_operator(const ClosedPoint& x) {
  const auto& B = cusp_basis();
  int r = static_cast<int>(B.size());
  QMat out(r, QVec(r, 0));
  for (int k = 0; k < r; ++k) {
    QVec v = hecke_apply_adjoint(x, B[k]);
    // solve sum_l c_l B[l] = v
    QMat aug(size(), QVec(r + 1, 0));
    for (int i = 0; i < size(); ++i) {
      for (int l = 0; l < r; ++l) aug[i][l] = B[l][i];
      aug[i][r] = v[i];
    }
    auto piv = q_rref(aug);
    if (!piv.empty() && piv.back() == r) throw ComputationFailed("cusp space is not stable under a Hecke operator");
    for (size_t p = 0; p < piv.size(); ++p) out[piv[p]][k] = aug[p][r];
  }
  return out;
}

const std::vector<std::pair<int, int>>& Spectral::p0_terms() {
  if (!have_p0_) {
    for (int d = -cfg_.gap_bound; d <= cfg_.gap_bound; ++d)
      for (auto& P : eng_.B()) {
        PicElement L;
        L.degree = d;
        L.point = eng_.to_base(P);
        if (int j = index_of(eng_.line_plus_trivial(L)); j >= 0) p0_.push_back({d, j});
      }
    have_p0_ = true;
  }
  return p0_;
}

const std::vector<std::pair<int, int>>& Spectral::torus_terms(int i) {
  auto it = torus_.find(i);
  if (it != torus_.end()) return it->second;
  std::vector<std::pair<int, int>> terms;
  for (auto& M : pic_quotient_reps(C_, i)) {
    int j = index_of(eng_.pushforward(M));
    if (j < 0) throw ComputationFailed("pushforward outside the truncated class set");
    int w = i == 3 ? quadratic_character(C_, QChar::eta, pic_divisor(C_, M)) : 1;
    terms.push_back({j, w});
  }
  return torus_[i] = std::move(terms);
}

namespace {

using Vec = std::vector<long double>;
using MatL = Eigen::Matrix<long double, Eigen::Dynamic, Eigen::Dynamic>;

long double to_ld(const mpq_class& v) { return static_cast<long double>(v.get_d()); }

// Coordinates of v in the span of basis; throws when v is outside.
QVec coords(const std::vector<QVec>& basis, const QVec& v) {
  int r = static_cast<int>(basis.size()), n = static_cast<int>(v.size());
  QMat aug(n, QVec(r + 1, 0));
  for (int i = 0; i < n; ++i) {
    for (int l = 0; l < r; ++l) aug[i][l] = basis[l][i];
    aug[i][r] = v[i];
  }
  auto piv = q_rref(aug);
  if (!piv.empty() && piv.back() == r) throw ComputationFailed("vector outside the expected subspace");
  QVec c(r, 0);
  for (size_t p = 0; p < piv.size(); ++p) c[piv[p]] = aug[p][r];
  return c;
}

// Polynomials over Q, low degree first.
void q_trim(QVec& p) {
  while (!p.empty() && p.back() == 0) p.pop_back();
}

// a = qt * b + rem
void q_divmod(QVec a, const QVec& b, QVec& qt, QVec& rem) {
  q_trim(a);
  qt.assign(a.size() >= b.size() ? a.size() - b.size() + 1 : 0, 0);
  while (a.size() >= b.size() && !a.empty()) {
    size_t s = a.size() - b.size();
    mpq_class f = a.back() / b.back();
    qt[s] = f;
    for (size_t i = 0; i < b.size(); ++i) a[s + i] -= f * b[i];
    q_trim(a);
  }
  rem = a;
}

QVec q_gcd(QVec a, QVec b) {
  q_trim(a);
  q_trim(b);
  while (!b.empty()) {
    QVec qt, r;
    q_divmod(a, b, qt, r);
    a = b;
    b = r;
  }
  if (!a.empty()) {
    mpq_class l = a.back();
    for (auto& v : a) v /= l;
  }
  return a;
}

QVec q_deriv(const QVec& p) {
  QVec d;
  for (size_t i = 1; i < p.size(); ++i) d.push_back(p[i] * static_cast<long>(i));
  return d;
}

// Monic irreducible factors over Q of a squarefree monic integral polynomial
// with real roots.
std::vector<QVec> factor_real_rooted(const QVec& p) {
  int n = static_cast<int>(p.size()) - 1;
  if (n <= 0) return {};
  MatL comp = MatL::Zero(n, n);
  for (int i = 1; i < n; ++i) comp(i, i - 1) = 1;
  for (int i = 0; i < n; ++i) comp(i, n - 1) = -to_ld(p[i]);
  Eigen::EigenSolver<MatL> es(comp, false);
  std::vector<long double> roots;
  for (int i = 0; i < n; ++i) roots.push_back(es.eigenvalues()[i].real());
  std::sort(roots.begin(), roots.end());
  std::vector<QVec> out;
  QVec rest = p;
  std::vector<long double> left = roots;
  while (!left.empty()) {
    int m = static_cast<int>(left.size());
    bool found = false;
    for (int s = 1; s <= m && !found; ++s) {
      // subsets of size s containing left[0]
      std::vector<int> idx(s);
      for (int i = 0; i < s; ++i) idx[i] = i;
      while (true) {
        std::vector<long double> f{1};
        for (int i : idx) {
          std::vector<long double> g(f.size() + 1, 0);
          for (size_t j = 0; j < f.size(); ++j) {
            g[j + 1] += f[j];
            g[j] -= f[j] * left[i];
          }
          f = g;
        }
        QVec cand;
        bool ok = true;
        for (auto v : f) {
          long double r = std::round(v);
          if (std::fabs(v - r) > 1e-6L * std::max<long double>(1, std::fabs(v))) ok = false;
          cand.push_back(mpq_class(static_cast<long>(r)));
        }
        if (ok) {
          QVec qt, rem;
          q_divmod(rest, cand, qt, rem);
          if (rem.empty()) {
            out.push_back(cand);
            rest = qt;
            std::vector<long double> nl;
            for (int i = 0; i < m; ++i)
              if (std::find(idx.begin(), idx.end(), i) == idx.end()) nl.push_back(left[i]);
            left = nl;
            found = true;
            break;
          }
        }
        // next combination keeping idx[0] = 0
        int k = s - 1;
        while (k >= 1 && idx[k] == m - s + k) --k;
        if (k < 1) break;
        ++idx[k];
        for (int j = k + 1; j < s; ++j) idx[j] = idx[j - 1] + 1;
      }
    }
    if (!found) throw ComputationFailed("characteristic polynomial does not factor over Z as expected");
  }
  return out;
}

Vec apply_adjoint_num(Spectral& sp, const ClosedPoint& x, const Vec& phi) {
  Vec r(sp.size(), 0);
  for (int j = 0; j < sp.size(); ++j) {
    if (phi[j] == 0) continue;
    for (auto& [c, k] : sp.hecke_row(j, x)) {
      int i = sp.index(c);
      if (i < 0) continue;
      r[i] += static_cast<long double>(k) * sp.aut(i) / sp.aut(j) * phi[j];
    }
  }
  return r;
}

long double pet_num(const Spectral& sp, const Vec& a, const Vec& b) {
  long double s = 0;
  for (int i = 0; i < sp.size(); ++i) s += a[i] * b[i] / sp.aut(i);
  return s;
}

// Rational subspace of the cusp space (class coordinates) where p(H) = 0.
std::vector<QVec> orbit_space(Spectral& sp, const QMat& H, const QVec& p) {
  const auto& B = sp.cusp_basis();
  std::vector<QVec> out;
  for (auto& c : q_nullspace(q_poly_eval(p, H))) {
    QVec v(sp.size(), 0);
    for (size_t l = 0; l < B.size(); ++l)
      if (c[l] != 0)
        for (int i = 0; i < sp.size(); ++i) v[i] += c[l] * B[l][i];
    out.push_back(v);
  }
  return out;
}

struct GenericOp {
  QMat H;
  QVec charpoly;
};

GenericOp generic_operator(Spectral& sp) {
  const auto& pts = sp.hecke_points();
  int r = static_cast<int>(sp.cusp_basis().size());
  std::vector<QMat> ops;
  for (auto& x : pts) ops.push_back(sp.cusp_operator(x));
  for (int attempt = 0; attempt < 8; ++attempt) {
    QMat H(r, QVec(r, 0));
    for (size_t k = 0; k < ops.size(); ++k) {
      long w = static_cast<long>((k + 1) * (attempt + 1) + (k * k) % (attempt + 2));
      for (int i = 0; i < r; ++i)
        for (int j = 0; j < r; ++j) H[i][j] += ops[k][i][j] * w;
    }
    QVec p = q_charpoly(H);
    if (q_gcd(p, q_deriv(p)).size() <= 1) return {H, p};
  }
  throw ComputationFailed("Hecke eigenvalues do not separate the cusp space");
}

}  // namespace

std::vector<EigenformPackage> cusp_eigenforms(Spectral& sp) {
  std::vector<EigenformPackage> out;
  if (sp.cusp_basis().empty()) return out;
  GenericOp g = generic_operator(sp);
  const auto& B = sp.cusp_basis();
  auto factors = factor_real_rooted(g.charpoly);
  std::sort(factors.begin(), factors.end(), [](const QVec& a, const QVec& b) {
    if (a.size() != b.size()) return a.size() < b.size();
    for (size_t i = 0; i < a.size(); ++i)
      if (a[i] != b[i]) return a[i] < b[i];
    return false;
  });
  (void)B;
  for (size_t k = 0; k < factors.size(); ++k) {
    auto W = orbit_space(sp, g.H, factors[k]);
    int m = static_cast<int>(W.size());
    // H on W, exactly
    std::vector<QVec> HW;
    const auto& cb = sp.cusp_basis();
    for (auto& w : W) {
      QVec cw = coords(cb, w);
      QVec hc = q_mul(g.H, cw);
      QVec v(sp.size(), 0);
      for (size_t l = 0; l < cb.size(); ++l)
        if (hc[l] != 0)
          for (int i = 0; i < sp.size(); ++i) v[i] += hc[l] * cb[l][i];
      HW.push_back(coords(W, v));
    }
    MatL Gm(m, m), A(m, m);
    for (int i = 0; i < m; ++i)
      for (int j = 0; j < m; ++j) {
        Gm(i, j) = to_ld(sp.petersson(W[i], W[j]));
        mpq_class s = 0;
        for (int l = 0; l < m; ++l) s += sp.petersson(W[i], W[l]) * HW[j][l];
        A(i, j) = to_ld(s);
      }
    A = (A + A.transpose()) / 2;
    Eigen::GeneralizedSelfAdjointEigenSolver<MatL> es(A, Gm);
    for (int e = 0; e < m; ++e) {
      EigenformPackage pkg;
      pkg.orbit = static_cast<int>(k);
      pkg.orbit_poly = factors[k];
      Vec phi(sp.size(), 0);
      for (int j = 0; j < m; ++j) {
        long double c = es.eigenvectors()(j, e);
        for (int i = 0; i < sp.size(); ++i) phi[i] += c * to_ld(W[j][i]);
      }
      long double mx = 0;
      for (auto v : phi) mx = std::max(mx, std::fabs(v));
      long double sgn = 1;
      for (auto v : phi)
        if (std::fabs(v) >= mx * (1 - 1e-9L)) {
          sgn = v < 0 ? -1 : 1;
          break;
        }
      for (auto& v : phi) v *= sgn / mx;
      pkg.phi = phi;
      pkg.petersson = pet_num(sp, phi, phi);
      for (auto& x : sp.hecke_points()) {
        Vec t = apply_adjoint_num(sp, x, phi);
        pkg.eigenvalues.push_back(pet_num(sp, t, phi) / pkg.petersson);
      }
      pkg.P0 = period_p0(sp, phi);
      pkg.P1 = period(sp, phi, PeriodKind::P1);
      pkg.P2 = period(sp, phi, PeriodKind::P2);
      pkg.P3 = period(sp, phi, PeriodKind::P3);
      out.push_back(std::move(pkg));
    }
  }
  return out;
}

RealLaurent period_p0(Spectral& sp, const std::vector<long double>& phi) {
  RealLaurent r;
  long double w = 1.0L / (sp.curve().q() - 1);
  for (auto& [d, j] : sp.p0_terms())
    if (phi[j] != 0) r[-d] += w * phi[j];
  std::erase_if(r, [](const auto& kv) { return kv.second == 0; });
  return r;
}

long double period(Spectral& sp, const std::vector<long double>& phi, PeriodKind which) {
  if (which == PeriodKind::P0) {
    long double s = 0;
    for (auto& [n, c] : period_p0(sp, phi)) s += c;
    return s;
  }
  int i = which == PeriodKind::P1 ? 1 : which == PeriodKind::P2 ? 2 : 3;
  long double s = 0;
  for (auto& [j, w] : sp.torus_terms(i)) s += w * phi[j];
  return s / 2;
}

LaurentPoly period_p0_exact(Spectral& sp, const QVec& phi) {
  LaurentPoly r;
  mpq_class w(1, sp.curve().q() - 1);
  for (auto& [d, j] : sp.p0_terms())
    if (phi[j] != 0) r.add(-d, w * phi[j]);
  return r;
}

mpq_class period_exact(Spectral& sp, const QVec& phi, PeriodKind which) {
  if (which == PeriodKind::P0) {
    mpq_class s = 0;
    for (auto& [n, c] : period_p0_exact(sp, phi).c) s += c;
    return s;
  }
  int i = which == PeriodKind::P1 ? 1 : which == PeriodKind::P2 ? 2 : 3;
  mpq_class s = 0;
  for (auto& [j, w] : sp.torus_terms(i)) s += w * phi[j];
  return s / 2;
}

RealLaurent c_pi_series(const EigenformPackage& pkg) {
  if (pkg.petersson == 0) throw ZeroNorm();
  RealLaurent r;
  for (auto& [n, c] : pkg.P0) r[n] = c * pkg.P3 / pkg.petersson;
  return r;
}

long double c_pi(const EigenformPackage& pkg, int r) {
  long double s = 0;
  for (auto& [n, c] : c_pi_series(pkg)) s += c * std::pow(2.0L * n, r);
  return s;
}

long double verify_theorem_d(const EigenformPackage& pkg) {
  long double p00 = 0;
  for (auto& [n, c] : pkg.P0) p00 += c;
  return std::fabs(pkg.P1 * pkg.P2 - p00 * pkg.P3);
}

mpq_class orbit_c_r_exact(Spectral& sp, const QVec& orbit_poly, int r) {
  GenericOp g = generic_operator(sp);
  auto W = orbit_space(sp, g.H, orbit_poly);
  int m = static_cast<int>(W.size());
  if (!m) return 0;
  QMat G(m, QVec(m));
  QVec a(m), b(m);
  for (int i = 0; i < m; ++i) {
    for (int j = 0; j < m; ++j) G[i][j] = sp.petersson(W[i], W[j]);
    a[i] = j_derivative(period_p0_exact(sp, W[i]), r);
    b[i] = period_exact(sp, W[i], PeriodKind::P3);
  }
  auto Gi = q_inverse(G);
  if (!Gi) throw ZeroNorm();
  QVec t = q_mul(*Gi, b);
  mpq_class s = 0;
  for (int i = 0; i < m; ++i) s += a[i] * t[i];
  return s;
}

namespace {

GeoPt key_point(const PicKey& k) { return GeoPt{1, std::get<1>(k), std::get<2>(k), std::get<3>(k)}; }
PicKey make_key(int d, const GeoPt& P) { return {d, P.inf, P.inf ? 0u : P.x, P.inf ? 0u : P.y}; }

SatakeValue sv_mul(const Curve& C, const SatakeValue& a, const SatakeValue& b) {
  SatakeValue r;
  for (auto& [ka, va] : a)
    for (auto& [kb, vb] : b) {
      PicKey k = make_key(std::get<0>(ka) + std::get<0>(kb), point_add(C, key_point(ka), key_point(kb)));
      r[k] += va * vb;
    }
  std::erase_if(r, [](const auto& kv) { return kv.second == 0; });
  return r;
}

}  // namespace

PicKey pic_key(const Curve& C, const Divisor& D) {
  if (D.curve != CurveName::X) throw CurveMismatch("pic_key: divisor on X expected");
  GeoPt P{1, true, 0, 0};
  for (auto& [w, n] : D.m) P = point_add(C, P, point_mul(C, trace_point(C, w.base), n));
  return make_key(D.degree(), P);
}

SatakeValue satake_transform(const Curve& C, const Divisor& D) {
  SatakeValue r{{make_key(0, GeoPt{1, true, 0, 0}), mpq_class(1)}};
  for (auto& [w, n] : D.m) {
    if (n < 0) throw std::invalid_argument("satake_transform: divisor not effective");
    mpz_class qx = 1;
    for (int i = 0; i < w.base.deg; ++i) qx *= C.q();
    SatakeValue f;
    mpz_class pw = 1;
    for (int k = 0; k <= n; ++k) {
      Divisor E = Divisor::point(w.base, n - 2 * k);
      f[pic_key(C, E)] += mpq_class(pw);
      pw *= qx;
    }
    r = sv_mul(C, r, f);
  }
  return r;
}

SatakeValue satake_transform(const Curve& C, const HeckeElement& f) {
  SatakeValue r;
  for (auto& t : f)
    for (auto& [k, v] : satake_transform(C, t.D)) r[k] += t.coef * v;
  std::erase_if(r, [](const auto& kv) { return kv.second == 0; });
  return r;
}

mpq_class satake_eigenvalue(const Curve& C, const HeckeElement& f, int deg_sign,
                            const std::map<std::pair<uint32_t, uint32_t>, int>& chi, bool chi_at_inf) {
  (void)chi_at_inf;
  mpq_class s = 0;
  for (auto& [k, v] : satake_transform(C, f)) {
    int sign = (std::get<0>(k) % 2 != 0 && deg_sign == -1) ? -1 : 1;
    if (!std::get<1>(k)) sign *= chi.at({std::get<2>(k), std::get<3>(k)});
    s += sign * v;
  }
  return s;
}

std::vector<Divisor> effective_divisors(const Curve& C, int max_deg) {
  std::vector<ClosedPoint> pts;
  for (int d = 1; d <= max_deg; ++d)
    for (auto& x : closed_points_of_degree(C, d)) pts.push_back(x);
  std::vector<Divisor> out;
  std::function<void(size_t, Divisor, int)> rec = [&](size_t i, Divisor D, int left) {
    if (i == pts.size()) {
      out.push_back(D);
      return;
    }
    for (int n = 0; n * pts[i].deg <= left; ++n) {
      Divisor E = D;
      if (n) E = E + Divisor::point(pts[i], n);
      rec(i + 1, E, left - n * pts[i].deg);
    }
  };
  rec(0, Divisor(CurveName::X), max_deg);
  std::stable_sort(out.begin(), out.end(), [](const Divisor& a, const Divisor& b) { return a.degree() < b.degree(); });
  return out;
}

std::vector<HeckeElement> eis_elements(const Curve& C, const std::vector<Divisor>& span) {
  std::vector<SatakeValue> cols;
  std::map<PicKey, int> rows;
  for (auto& D : span) {
    cols.push_back(satake_transform(C, D));
    for (auto& [k, v] : cols.back()) rows.emplace(k, 0);
  }
  int nr = 0;
  for (auto& [k, i] : rows) i = nr++;
  QMat M(nr, QVec(span.size(), 0));
  for (size_t j = 0; j < span.size(); ++j)
    for (auto& [k, v] : cols[j]) M[rows[k]][j] = v;
  auto ns = q_nullspace(M);
  if (ns.empty()) throw EmptySpan();
  std::vector<HeckeElement> out;
  for (auto& v : ns) {
    mpz_class den = 1;
    for (auto& x : v) den = lcm(den, x.get_den());
    mpz_class g = 0;
    for (auto& x : v) {
      mpz_class n = x.get_num() * (den / x.get_den());
      g = gcd(g, n);
    }
    HeckeElement f;
    int sign = 0;
    for (size_t j = 0; j < span.size(); ++j) {
      if (v[j] == 0) continue;
      if (!sign) sign = v[j] > 0 ? 1 : -1;
      f.push_back(HeckeTerm{v[j] * den / g * sign, span[j]});
    }
    out.push_back(f);
  }
  return out;
}

HeckeElement eis_element(const Curve& C, const std::vector<Divisor>& span) {
  auto all = eis_elements(C, span);
  return *std::min_element(all.begin(), all.end(),
                           [](const HeckeElement& a, const HeckeElement& b) { return a.size() < b.size(); });
}

std::vector<std::map<std::pair<uint32_t, uint32_t>, int>> quadratic_characters(const Curve& C) {
  auto pts = rational_points(C);
  std::vector<GeoPt> fin;
  for (auto& P : pts)
    if (!P.inf) fin.push_back(P);
  if (fin.size() > 20) throw BoundExceeded("quadratic_characters: too many rational points");
  auto val = [&](const std::map<std::pair<uint32_t, uint32_t>, int>& m, const GeoPt& P) {
    return P.inf ? 1 : m.at({P.x, P.y});
  };
  std::vector<std::map<std::pair<uint32_t, uint32_t>, int>> out;
  for (uint64_t mask = 0; mask < (uint64_t{1} << fin.size()); ++mask) {
    std::map<std::pair<uint32_t, uint32_t>, int> m;
    for (size_t i = 0; i < fin.size(); ++i) m[{fin[i].x, fin[i].y}] = (mask >> i & 1) ? -1 : 1;
    bool ok = true;
    for (auto& P : pts)
      for (auto& Q : pts)
        if (ok && val(m, P) * val(m, Q) != val(m, point_add(C, P, Q))) ok = false;
    if (ok) out.push_back(m);
  }
  return out;
}

long double hecke_eigenvalue(Spectral& sp, const EigenformPackage& pkg, const HeckeElement& f) {
  const auto& pts = sp.hecke_points();
  long double total = 0;
  for (auto& t : f) {
    long double v = 1;
    for (auto& [w, n] : t.D.m) {
      auto it = std::find(pts.begin(), pts.end(), w.base);
      if (it == pts.end()) throw std::invalid_argument("hecke_eigenvalue: point outside the Hecke set");
      long double lam = pkg.eigenvalues[it - pts.begin()];
      long double qx = std::pow(static_cast<long double>(sp.curve().q()), w.base.deg);
      long double prev = 0, cur = 1;
      for (int k = 1; k <= n; ++k) {
        long double nx = lam * cur - (k >= 2 ? qx * prev : 0);
        prev = cur;
        cur = nx;
      }
      v *= cur;
    }
    total += to_ld(t.coef) * v;
  }
  return total;
}

JpiCheck verify_jpi(Spectral& sp, const std::vector<EigenformPackage>& forms, const HeckeElement& f) {
  JpiCheck r;
  r.f = f;
  r.j = j_total(sp.curve(), f);
  for (auto& pkg : forms) {
    long double lam = hecke_eigenvalue(sp, pkg, f);
    for (auto& [n, c] : c_pi_series(pkg)) r.spectral[n] += lam * c;
  }
  std::set<int> keys;
  for (auto& [n, c] : r.j.c) keys.insert(n);
  for (auto& [n, c] : r.spectral) keys.insert(n);
  for (int n : keys) {
    long double a = r.j.c.count(n) ? to_ld(r.j.c.at(n)) : 0;
    long double b = r.spectral.count(n) ? r.spectral.at(n) : 0;
    r.residual = std::max(r.residual, std::fabs(a - b));
  }
  return r;
}

nlohmann::json real_laurent_json(const RealLaurent& p) {
  nlohmann::json j = nlohmann::json::object();
  for (auto& [n, c] : p) j[std::to_string(n)] = static_cast<double>(c);
  return j;
}

nlohmann::json bundle_class_json(const Curve& C, const BundleEngine& eng, const BundleClass& c) {
  nlohmann::json j{{"kind", bundle_kind_name(c.kind)}, {"gap", c.gap}};
  const GeoPt& P = c.label;
  if (P.inf) {
    j["label"] = "O";
  } else {
    const Embedding& e = C.tower().emb(1, 2);
    if (e.in_image(P.x) && e.in_image(P.y))
      j["label"] = {{"field_degree", 1}, {"x", field_elem_json(C.base(), e.back(P.x))},
                    {"y", field_elem_json(C.base(), e.back(P.y))}};
    else
      j["label"] = {{"field_degree", 2}, {"x", field_elem_json(*eng.S(), P.x)}, {"y", field_elem_json(*eng.S(), P.y)}};
  }
  j["aut_weight"] = rational_json(mpq_class(1, eng.aut_size(c)));
  return j;
}

}  // namespace bq
