#pragma once

#include <map>

#include "biquad/bundles.hpp"
#include "biquad/orbital.hpp"

namespace bq {

struct ZeroNorm : std::runtime_error {
  ZeroNorm() : std::runtime_error("Petersson norm is zero") {}
};
struct EmptySpan : std::runtime_error {
  EmptySpan() : std::runtime_error("no Eisenstein-ideal element in the span") {}
};

struct SpectralConfig {
  int gap_bound = 3;         // classes with instability gap <= gap_bound
  int constant_depth = 3;    // constant-term conditions for -depth <= deg L <= gap_bound
  int hecke_degree = 2;      // Hecke operators at closed points of degree <= this
  static SpectralConfig from_json(const nlohmann::json& j);
  nlohmann::json to_json() const;
};

// All classes with gap <= bound, each once.
std::vector<BundleClass> enumerate_bundles(BundleEngine& eng, int bound);

// Functions on the truncated class set; indices follow classes().
class Spectral {
 public:
  Spectral(const Curve& C, SpectralConfig cfg = {});

  const Curve& curve() const { return C_; }
  const SpectralConfig& config() const { return cfg_; }
  BundleEngine& engine() { return eng_; }
  const std::vector<BundleClass>& classes() const { return classes_; }
  int size() const { return static_cast<int>(classes_.size()); }
  // Index of a class, or -1 outside the truncation.
  int index(const BundleClass& c) const;
  int index_of(const Bundle& E) { return index(eng_.classify(E)); }
  int64_t aut(int i) const { return auts_[i]; }

  // Lower modifications of the representative of class i at x, by class.
  const std::map<BundleClass, int>& hecke_row(int i, const ClosedPoint& x);
  // Entry (i, j): number of lower modifications of class i at x in class j.
  QMat hecke_matrix(const ClosedPoint& x);
  // (T_x phi)(E) = sum over modifications E' of E of phi(E'), from the rows of E.
  QVec hecke_apply(const ClosedPoint& x, const QVec& phi);
  // Same operator evaluated through the rows of supp(phi), using the
  // adjointness A(E, E') |Aut E'| = A(E', E) |Aut E|.
  QVec hecke_apply_adjoint(const ClosedPoint& x, const QVec& phi);
  mpq_class petersson(const QVec& a, const QVec& b) const;

  // Rows of the constant-term functional: one per line bundle L with
  // -depth <= deg L <= gap_bound, sum over H^1(L) of phi(E_e).
  QMat constant_term_matrix();
  // Q-basis of the cuspidal subspace.
  const std::vector<QVec>& cusp_basis();
  // Closed points carrying the Hecke operators used on the cusp space.
  const std::vector<ClosedPoint>& hecke_points();
  // Matrix of T_x on the cusp basis; throws ComputationFailed when the cusp
  // space is not stable.
  QMat cusp_operator(const ClosedPoint& x);

  // Class indices of L + O for the Pic(X) classes (deg, point) with |deg| <= gap_bound.
  const std::vector<std::pair<int, int>>& p0_terms();  // (deg L, class index)
  // (class index, eta weight) for f_{i*} M, M over Pic(Y_i)/f_i^* Pic(X).
  const std::vector<std::pair<int, int>>& torus_terms(int i);

 private:
  const Curve& C_;
  SpectralConfig cfg_;
  BundleEngine eng_;
  std::vector<BundleClass> classes_;
  std::vector<int64_t> auts_;
  std::map<BundleClass, int> index_;
  std::vector<Bundle> reps_;
  std::map<std::pair<int, ClosedPoint>, std::map<BundleClass, int>> rows_;
  bool have_cusp_ = false;
  std::vector<QVec> cusp_;
  std::vector<ClosedPoint> hpoints_;
  bool have_p0_ = false;
  std::vector<std::pair<int, int>> p0_;
  std::map<int, std::vector<std::pair<int, int>>> torus_;
};

struct ComputationFailed : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Numeric Laurent polynomial in z = q^(2s).
using RealLaurent = std::map<int, long double>;

struct EigenformPackage {
  std::vector<long double> phi;                 // over Spectral::classes()
  std::vector<long double> eigenvalues;         // on Spectral::hecke_points()
  int orbit = 0;                                // index of the Galois orbit
  QVec orbit_poly;                              // minimal polynomial of the orbit (generic operator)
  long double petersson = 0;
  RealLaurent P0;
  long double P1 = 0, P2 = 0, P3 = 0;
};

// Simultaneous eigenforms of the cusp space, real-valued, max |phi| = 1.
std::vector<EigenformPackage> cusp_eigenforms(Spectral& sp);

enum class PeriodKind { P0, P1, P2, P3 };
RealLaurent period_p0(Spectral& sp, const std::vector<long double>& phi);
long double period(Spectral& sp, const std::vector<long double>& phi, PeriodKind which);
// Exact variants for rational forms.
LaurentPoly period_p0_exact(Spectral& sp, const QVec& phi);
mpq_class period_exact(Spectral& sp, const QVec& phi, PeriodKind which);

// C(pi, s) = P0(phi, s) P3(phi, eta) / <phi, phi>.
RealLaurent c_pi_series(const EigenformPackage& pkg);
// (log q)^(-r) d^r/ds^r C(pi, s) at s = 0.
long double c_pi(const EigenformPackage& pkg, int r);
long double verify_theorem_d(const EigenformPackage& pkg);

// Sum over one Galois orbit of C_r, computed exactly through the orbit's
// rational subspace.
mpq_class orbit_c_r_exact(Spectral& sp, const QVec& orbit_poly, int r);

// Element of Q[Pic X], Pic X = Z x X(F_q): keys (degree, point over S).
using PicKey = std::tuple<int, bool, uint32_t, uint32_t>;
using SatakeValue = std::map<PicKey, mpq_class>;
PicKey pic_key(const Curve& C, const Divisor& D);
// sum over D1 + D2 = D of q^(deg D2) [D1 - D2]; an element annihilates every
// unramified principal series iff this vanishes.
SatakeValue satake_transform(const Curve& C, const Divisor& D);
SatakeValue satake_transform(const Curve& C, const HeckeElement& f);
// Evaluation at a character of Pic X given by degree sign and values on X(F_q).
mpq_class satake_eigenvalue(const Curve& C, const HeckeElement& f, int deg_sign,
                            const std::map<std::pair<uint32_t, uint32_t>, int>& chi, bool chi_at_inf = true);
// Effective divisors of degree <= max_deg.
std::vector<Divisor> effective_divisors(const Curve& C, int max_deg);
// Basis of the Eisenstein-ideal part of span{f_D}; EmptySpan when trivial.
std::vector<HeckeElement> eis_elements(const Curve& C, const std::vector<Divisor>& span);
HeckeElement eis_element(const Curve& C, const std::vector<Divisor>& span);
// All quadratic characters of X(F_q) (as maps from affine coordinates).
std::vector<std::map<std::pair<uint32_t, uint32_t>, int>> quadratic_characters(const Curve& C);

// lambda_pi(f) on an eigenform, from the T_x eigenvalues.
long double hecke_eigenvalue(Spectral& sp, const EigenformPackage& pkg, const HeckeElement& f);

struct JpiCheck {
  HeckeElement f;
  LaurentPoly j;         // orbital side
  RealLaurent spectral;  // sum over pi
  long double residual = 0;
};
JpiCheck verify_jpi(Spectral& sp, const std::vector<EigenformPackage>& forms, const HeckeElement& f);

nlohmann::json bundle_class_json(const Curve& C, const BundleEngine& eng, const BundleClass& c);
nlohmann::json real_laurent_json(const RealLaurent& p);

}  // namespace bq
