#include "biquad/tower.hpp"

namespace bq {

const char* level_name(Level l) {
  switch (l) {
    case Level::F: return "F";
    case Level::K1: return "K1";
    case Level::K2: return "K2";
    case Level::K3: return "K3";
    case Level::K: return "K";
  }
  return "?";
}

Level level_from_name(const std::string& s) {
  for (Level l : {Level::F, Level::K1, Level::K2, Level::K3, Level::K})
    if (s == level_name(l)) return l;
  throw LevelMismatch("unknown level " + s);
}

const char* aut_name(Aut g) {
  switch (g) {
    case Aut::sigma1: return "sigma1";
    case Aut::sigma2: return "sigma2";
    case Aut::sigma3: return "sigma3";
    case Aut::tau1: return "tau1";
    case Aut::tau2: return "tau2";
    case Aut::tau3: return "tau3";
  }
  return "?";
}

bool contains(Level big, Level small) { return big == small || small == Level::F || big == Level::K; }

Level join(Level a, Level b) {
  if (contains(a, b)) return a;
  if (contains(b, a)) return b;
  return Level::K;
}

int level_dim(Level l) {
  if (l == Level::F) return 1;
  if (l == Level::K) return 4;
  return 2;
}

namespace {

// Index of s_i in the K basis {1, s1, s2, s3}.
int k_slot(Level l) {
  switch (l) {
    case Level::K1: return 1;
    case Level::K2: return 2;
    case Level::K3: return 3;
    default: return -1;
  }
}

}  // namespace

TowerElement::TowerElement(Level l, std::vector<FElem> coords) : level(l), c(std::move(coords)) {
  if (static_cast<int>(c.size()) != level_dim(l)) throw std::invalid_argument("TowerElement: wrong coordinate count");
}

TowerElement TowerElement::s(const Curve* cv, int i) {
  const GF* B = cv->base_ptr().get();
  Level l = i == 1 ? Level::K1 : i == 2 ? Level::K2 : Level::K3;
  return TowerElement(l, {FElem(cv, B), FElem::constant(cv, B, 1)});
}

TowerElement TowerElement::constant(const Curve* cv, int64_t v) {
  return from_f(FElem::from_int(cv, cv->base_ptr().get(), v));
}

std::array<FElem, 4> TowerElement::k_coords() const {
  FElem z(c[0].C, c[0].S);
  std::array<FElem, 4> r = {c[0], z, z, z};
  if (level == Level::K) return {c[0], c[1], c[2], c[3]};
  if (level != Level::F) r[k_slot(level)] = c[1];
  return r;
}

TowerElement TowerElement::at_level(Level l) const {
  if (l == level) return *this;
  auto k = k_coords();
  for (int i = 1; i < 4; ++i) {
    bool allowed = (l == Level::K) || (k_slot(l) == i);
    if (!allowed && !k[i].is_zero())
      throw LevelMismatch(std::string("element does not lie in ") + level_name(l));
  }
  if (l == Level::K) return TowerElement(l, {k[0], k[1], k[2], k[3]});
  if (l == Level::F) return TowerElement(l, {k[0]});
  return TowerElement(l, {k[0], k[k_slot(l)]});
}

TowerElement TowerElement::demoted() const {
  auto k = k_coords();
  bool n1 = !k[1].is_zero(), n2 = !k[2].is_zero(), n3 = !k[3].is_zero();
  int cnt = n1 + n2 + n3;
  if (cnt == 0) return at_level(Level::F);
  if (cnt > 1) return at_level(Level::K);
  return at_level(n1 ? Level::K1 : n2 ? Level::K2 : Level::K3);
}

bool TowerElement::is_zero() const {
  for (auto& x : c)
    if (!x.is_zero()) return false;
  return true;
}

TowerElement TowerElement::operator+(const TowerElement& o) const {
  Level l = join(level, o.level);
  auto a = at_level(l), b = o.at_level(l);
  for (size_t i = 0; i < a.c.size(); ++i) a.c[i] = a.c[i] + b.c[i];
  return a;
}

TowerElement TowerElement::operator-() const {
  TowerElement r = *this;
  for (auto& x : r.c) x = -x;
  return r;
}

TowerElement TowerElement::operator-(const TowerElement& o) const { return *this + (-o); }

TowerElement TowerElement::operator*(const TowerElement& o) const {
  Level l = join(level, o.level);
  const Curve* cv = curve();
  const GF* S = c[0].S;
  if (l == Level::F) return from_f(c[0] * o.c[0]);
  if (l != Level::K) {
    auto a = at_level(l), b = o.at_level(l);
    int i = k_slot(l);
    FElem u = FElem::u(cv, S, i);
    return TowerElement(l, {a.c[0] * b.c[0] + u * a.c[1] * b.c[1], a.c[0] * b.c[1] + a.c[1] * b.c[0]});
  }
  auto a = k_coords(), b = o.k_coords();
  FElem u1 = FElem::u(cv, S, 1), u2 = FElem::u(cv, S, 2);
  FElem c0 = a[0] * b[0] + u1 * a[1] * b[1] + u2 * a[2] * b[2] + u1 * u2 * a[3] * b[3];
  FElem c1 = a[0] * b[1] + a[1] * b[0] + u2 * (a[2] * b[3] + a[3] * b[2]);
  FElem c2 = a[0] * b[2] + a[2] * b[0] + u1 * (a[1] * b[3] + a[3] * b[1]);
  FElem c3 = a[0] * b[3] + a[3] * b[0] + a[1] * b[2] + a[2] * b[1];
  return TowerElement(Level::K, {c0, c1, c2, c3});
}

TowerElement TowerElement::inv() const {
  if (is_zero()) throw DivisionByZero();
  if (level == Level::F) return from_f(c[0].inv());
  if (level != Level::K) {
    Aut g = level == Level::K1 ? Aut::sigma1 : level == Level::K2 ? Aut::sigma2 : Aut::sigma3;
    TowerElement conj = apply_automorphism(*this, g);
    FElem n = (*this * conj).at_level(Level::F).c[0];
    return conj * from_f(n.inv());
  }
  TowerElement t = apply_automorphism(*this, Aut::tau1) * apply_automorphism(*this, Aut::tau2) *
                   apply_automorphism(*this, Aut::tau3);
  FElem n = (*this * t).at_level(Level::F).c[0];
  return t * from_f(n.inv());
}

bool TowerElement::operator==(const TowerElement& o) const {
  auto a = k_coords(), b = o.k_coords();
  for (int i = 0; i < 4; ++i)
    if (a[i] != b[i]) return false;
  return true;
}

std::string TowerElement::str() const {
  static const char* names[4] = {"", "s1", "s2", "s3"};
  auto k = k_coords();
  std::string s;
  for (int i = 0; i < 4; ++i) {
    if (k[i].is_zero()) continue;
    if (!s.empty()) s += " + ";
    s += i == 0 ? k[i].str() : "(" + k[i].str() + ")*" + names[i];
  }
  return s.empty() ? "0" : s;
}

TowerElement apply_automorphism(const TowerElement& z, Aut g) {
  switch (g) {
    case Aut::sigma1:
    case Aut::sigma2:
    case Aut::sigma3: {
      Level l = g == Aut::sigma1 ? Level::K1 : g == Aut::sigma2 ? Level::K2 : Level::K3;
      if (z.level == Level::F) return z;
      if (z.level != l) throw LevelMismatch(std::string(aut_name(g)) + " acts on " + level_name(l));
      return TowerElement(l, {z.c[0], -z.c[1]});
    }
    default: {
      // tau1: s2 -> -s2, tau2: s1 -> -s1, tau3: both
      auto k = z.at_level(Level::K).c;
      bool flip1 = g != Aut::tau1, flip2 = g != Aut::tau2;
      if (flip1) k[1] = -k[1];
      if (flip2) k[2] = -k[2];
      if (flip1 != flip2) k[3] = -k[3];
      return TowerElement(Level::K, k).at_level(z.level);
    }
  }
}

namespace {

std::vector<Aut> galois_group(Level from, Level to) {
  if (from == to) return {};
  if (from == Level::K) {
    if (to == Level::F) return {Aut::tau1, Aut::tau2, Aut::tau3};
    if (to == Level::K1) return {Aut::tau1};
    if (to == Level::K2) return {Aut::tau2};
    return {Aut::tau3};
  }
  if (to == Level::F) {
    if (from == Level::K1) return {Aut::sigma1};
    if (from == Level::K2) return {Aut::sigma2};
    return {Aut::sigma3};
  }
  throw LevelMismatch(std::string(level_name(to)) + " is not a subfield of " + level_name(from));
}

}  // namespace

TowerElement trace(const TowerElement& z, Level down_to) {
  if (!contains(z.level, down_to)) throw LevelMismatch(std::string(level_name(down_to)) + " is not a subfield of " + level_name(z.level));
  TowerElement r = z;
  for (Aut g : galois_group(z.level, down_to)) r = r + apply_automorphism(z, g);
  return r.at_level(down_to);
}

TowerElement norm(const TowerElement& z, Level down_to) {
  if (!contains(z.level, down_to)) throw LevelMismatch(std::string(level_name(down_to)) + " is not a subfield of " + level_name(z.level));
  TowerElement r = z;
  for (Aut g : galois_group(z.level, down_to)) r = r * apply_automorphism(z, g);
  return r.at_level(down_to);
}

}  // namespace bq
