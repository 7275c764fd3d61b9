#include "biquad/pic.hpp"

#include <algorithm>
#include <set>

namespace bq {

std::vector<Place> rational_places(const Curve& C, CurveName cv) {
  std::vector<Place> out;
  for (auto& P : closed_points_of_degree(C, 1))
    for (auto& w : places_above(C, cv, P))
      if (w.deg == 1) out.push_back(w);
  std::sort(out.begin(), out.end());
  return out;
}

Place base_place(const Curve& C, CurveName cv) {
  auto r = rational_places(C, cv);
  if (r.empty()) throw std::runtime_error("no rational place");
  return r.front();
}

PicElement pic_reduce(const Curve& C, const Divisor& D) {
  PicElement e;
  e.curve = D.curve;
  e.degree = D.degree();
  if (D.curve == CurveName::X) {
    for (auto& [w, n] : D.m) e.point = point_add(C, e.point, point_mul(C, trace_point(C, w.base), n));
    e.place = Place::of(closed_point(C, e.point));
    return e;
  }
  if (!cover_index(D.curve)) throw CurveMismatch("pic_reduce works on X, Y1, Y2, Y3");
  Place w0 = base_place(C, D.curve);
  Divisor E = D - Divisor::point(D.curve, w0, e.degree - 1);
  auto L = riemann_roch_basis(C, E);
  if (L.size() != 1) throw std::logic_error("pic_reduce: degree-1 Riemann-Roch space is not a line");
  Divisor R = divisor_of(L[0]) + E;
  if (R.m.size() != 1 || R.degree() != 1 || !R.effective())
    throw std::logic_error("pic_reduce: residual divisor is not a rational place");
  e.place = R.m.begin()->first;
  return e;
}

Divisor pic_divisor(const Curve& C, const PicElement& e) {
  if (e.curve == CurveName::X) {
    Divisor D = Divisor::point(ClosedPoint::origin(), e.degree - 1);
    D.add(Place::of(closed_point(C, e.point)), 1);
    return D;
  }
  Divisor D = Divisor::point(e.curve, base_place(C, e.curve), e.degree - 1);
  D.add(e.place, 1);
  return D;
}

bool is_principal(const Curve& C, const Divisor& D) {
  if (D.degree() != 0) return false;
  if (D.curve == CurveName::X) return pic_reduce(C, D).point.inf;
  return !riemann_roch_basis(C, D).empty();
}

std::vector<PicElement> pic_quotient_reps(const Curve& C, int i, int window) {
  std::vector<PicElement> out;
  if (i == 0) {
    for (int n = -window; n <= window; ++n) {
      PicElement e;
      e.degree = n;
      e.place = Place::of(ClosedPoint::origin());
      out.push_back(e);
    }
    return out;
  }
  CurveName cv = cover_curve(i);
  Place w0 = base_place(C, cv);
  auto places = rational_places(C, cv);
  // f_i^* Pic^0(X) as divisors of degree 0
  std::vector<Divisor> image;
  for (auto& P : rational_points(C)) {
    Divisor D = Divisor::point(closed_point(C, P)) - Divisor::point(ClosedPoint::origin());
    image.push_back(pullback(C, D, cv));
  }
  for (int d = 0; d <= 1; ++d) {
    std::set<Place> covered;
    for (auto& R : places) {
      if (covered.count(R)) continue;
      PicElement e{cv, d, GeoPt{1, true, 0, 0}, R};
      out.push_back(e);
      Divisor base = Divisor::point(cv, R) - Divisor::point(cv, w0);
      for (auto& h : image) covered.insert(pic_reduce(C, base + h + Divisor::point(cv, w0)).place);
    }
  }
  return out;
}

nlohmann::json pic_json(const Curve& C, const PicElement& e) {
  nlohmann::json j{{"curve", curve_name(e.curve)}, {"degree", e.degree}};
  j["point"] = place_json(C, e.curve, e.place);
  return j;
}

}  // namespace bq
