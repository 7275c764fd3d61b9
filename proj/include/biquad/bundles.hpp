#pragma once

#include <map>
#include <memory>
#include <tuple>

#include "biquad/pic.hpp"

namespace bq {

// Strict order on geometric points.
struct GeoLess {
  bool operator()(const GeoPt& a, const GeoPt& b) const {
    return std::make_tuple(a.n, !a.inf, a.x, a.y) < std::make_tuple(b.n, !b.inf, b.x, b.y);
  }
};

// Hermite normal form of a lattice in S((t))^2: span((t^a, 0), (c, t^b)) with
// c a Laurent polynomial of exponents in [clo, a). c is empty (clo == a) when
// zero; otherwise its first coefficient is nonzero.
struct LocalHNF {
  int a = 0, b = 0;
  int clo = 0;
  std::vector<uint32_t> c;
  bool standard() const { return a == 0 && b == 0 && c.empty(); }
  // Smallest exponent m with t^m S[[t]] e_1 containing the first coordinates.
  int m1() const { return c.empty() ? a : std::min(a, clo); }
  bool operator==(const LocalHNF&) const = default;
};

// Rank-2 bundle on X_S, S = F_{q^2}, by its generic fiber S(X)^2 and the
// lattices at the geometric points where it differs from O^2. Points of X(S)
// are stored with n = 2. Data at a degree-2 closed point is stored at both
// geometric points, Frobenius conjugate to each other.
struct Bundle {
  std::map<GeoPt, LocalHNF, GeoLess> lat;
  bool operator==(const Bundle&) const = default;
};

// Build the HNF of the lattice spanned by two column vectors (p1, q1), (p2, q2).
// Series are truncated to prec; throws PrecisionLoss when that is not enough.
LocalHNF hnf_from_columns(const GF* S, const Series& p1, const Series& q1, const Series& p2, const Series& q2, int prec);
// Normalize c: drop leading zeros and exponents >= a.
void normalize_hnf(const GF* S, LocalHNF& h);

enum class BundleKind { Split, SplitSS, Trivial2, Atiyah, Res, Stable };
const char* bundle_kind_name(BundleKind k);

// Isomorphism class of E modulo twists by line bundles.
// Split: L+O with deg L = gap >= 1, label = class of L (point Q with
// L ~ (gap - 1) O + Q). SplitSS: N+O, N of degree 0, label = canonical
// representative of +-N (N != O). Trivial2: O+O. Atiyah: the nonsplit
// self-extension of O. Res: pushforward of a degree-0 line bundle from X_S
// with Nm-class trivial, label = canonical +-(P - sigma P). Stable: odd degree,
// label = canonical representative of det modulo 2 X(F_q).
struct BundleClass {
  BundleKind kind = BundleKind::Trivial2;
  int gap = 0;
  GeoPt label{2, true, 0, 0};
  auto key() const { return std::make_tuple(static_cast<int>(kind), gap, label.inf, label.x, label.y); }
  bool operator<(const BundleClass& o) const { return key() < o.key(); }
  bool operator==(const BundleClass& o) const { return key() == o.key(); }
};

// Local datum for the extension 0 -> O(D) -> E -> O -> 0 with polar part u at O.
struct Extension {
  PicElement L;
  std::vector<uint32_t> u;  // coefficients of t^(ulo + i), in S
  int ulo = 0;
};

class BundleEngine {
 public:
  explicit BundleEngine(const Curve& C);

  const Curve& curve() const { return C_; }
  const GF* S() const { return S_.get(); }
  // X(F_q) and X(F_{q^2}) as points over S, O first.
  const std::vector<GeoPt>& B() const { return B_; }
  const std::vector<GeoPt>& A() const { return A_; }
  GeoPt origin() const { return GeoPt{2, true, 0, 0}; }

  int degree(const Bundle& E) const;
  // Point R of X(F_q) (over S) with det E ~ (deg E - 1) O + R.
  GeoPt det_point(const Bundle& E) const;
  // E tensor O(g P) at a geometric point P (no Frobenius companion).
  Bundle twist(const Bundle& E, const GeoPt& P, int g) const;
  Bundle twist_closed(const Bundle& E, const ClosedPoint& x, int g) const;
  int h0(const Bundle& E);

  BundleClass classify(const Bundle& E);
  int64_t aut_size(const BundleClass& c) const;

  // Sub-bundles E' with E/E' a skyscraper of length 1 at x.
  std::vector<Bundle> lower_modifications(const Bundle& E, const ClosedPoint& x) const;

  // Constructors.
  Bundle line_plus_trivial(const PicElement& L) const;
  Bundle extension(const Extension& e) const;
  // Polar parts at O representing H^1(L), up to F_q^x; the zero class is not included.
  std::vector<Extension> extension_classes(const PicElement& L);
  int h1(const PicElement& L);
  // pi_* O(P - O) for P in X(F_{q^2}) \ X(F_q).
  Bundle res_bundle(const GeoPt& P) const;
  // f_{i*} O_{Y_i}(D) for the class e in Pic(Y_i).
  Bundle pushforward(const PicElement& e);
  // Representative of a class.
  Bundle representative(const BundleClass& c);

  // Canonical labels.
  GeoPt canon_pm(const GeoPt& P) const;
  GeoPt canon_mod2(const GeoPt& P) const;
  GeoPt to_base(const GeoPt& P) const;  // S-point in X(F_q) -> degree-1 point
  GeoPt to_S(const GeoPt& P) const { return lift(C_, P, 2); }
  GeoPt sigma(const GeoPt& P) const { return frobenius(C_, P, 1); }

 private:
  struct RRSpace {
    std::vector<FElem> basis;
    std::map<GeoPt, std::vector<Series>, GeoLess> exp;
  };
  RRSpace& rr(int nO, const std::vector<RRPoint>& pts);
  const std::vector<Series>& expansions(RRSpace& sp, const GeoPt& P, int need);
  const Chart& chart(const GeoPt& P, int prec);
  uint32_t sig(uint32_t a) const { return S_->frob(a, C_.tower().k()); }
  LocalHNF conj(const LocalHNF& h) const;

  const Curve& C_;
  GFPtr S_;
  std::vector<GeoPt> B_, A_;
  std::map<std::vector<int>, std::unique_ptr<RRSpace>> rr_cache_;
  std::map<GeoPt, Chart, GeoLess> charts_;
  std::map<std::tuple<int, bool, uint32_t, uint32_t>, std::vector<Extension>> ext_cache_;
  std::map<std::tuple<int, bool, uint32_t, uint32_t>, int> h1_cache_;
};

}  // namespace bq
