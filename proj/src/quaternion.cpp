#include "biquad/quaternion.hpp"

#include <algorithm>
#include <map>
#include <set>

namespace bq {

const char* alg_type_name(AlgType t) { return t == AlgType::split ? "split" : "field"; }

AlgType alg_type_from_name(const std::string& s) {
  if (s == "split") return AlgType::split;
  if (s == "field") return AlgType::field;
  throw ConfigError("algebra type must be split or field, got " + s);
}

namespace {

std::pair<uint32_t, uint32_t> prime_power(uint32_t q) {
  for (uint32_t p = 2; p <= q; ++p) {
    if (q % p) continue;
    uint32_t m = 0, r = q;
    while (r % p == 0) {
      r /= p;
      ++m;
    }
    if (r != 1) break;
    return {p, m};
  }
  throw ConfigError("q0 must be a prime power");
}

using Key = std::array<uint32_t, 3>;

Key key_of(const Mat2<Fq>& m) { return {m.a.v, m.b.v, m.c.v}; }

}  // namespace

Census enumerate_cosets_finite(uint32_t q0, AlgType t1, AlgType t2) {
  if (q0 > 9) throw BoundExceeded("enumerate_cosets_finite: q0 > 9");
  auto [p, m] = prime_power(q0);
  if (p == 2) throw ConfigError("q0 must be odd");
  auto Fp = GF::get(p, m);
  const GF* F = Fp.get();
  uint32_t nonsq = 0;
  for (uint32_t a = 1; a < q0; ++a)
    if (!F->is_square(a)) {
      nonsq = a;
      break;
    }
  Census cs;
  cs.q0 = q0;
  cs.t1 = t1;
  cs.t2 = t2;
  Fq zero{F, 0}, one{F, 1};
  cs.d1 = t1 == AlgType::split ? one : Fq{F, nonsq};
  cs.d2 = t2 == AlgType::split ? one : Fq{F, nonsq};
  cs.m1 = Mat2<Fq>{zero, cs.d1, one, zero};
  // centralizer of m1 in GL2
  std::vector<Mat2<Fq>> cent;
  for (uint32_t x = 0; x < q0; ++x)
    for (uint32_t y = 0; y < q0; ++y) {
      Mat2<Fq> g = Mat2<Fq>::identity(one).scale(Fq{F, x}) + cs.m1.scale(Fq{F, y});
      if (!g.det().is_zero()) cent.push_back(g);
    }
  std::set<Key> seen;
  for (uint32_t a = 0; a < q0; ++a)
    for (uint32_t b = 0; b < q0; ++b)
      for (uint32_t c = 0; c < q0; ++c) {
        Fq A{F, a}, B{F, b}, Cc{F, c};
        if (!(A * A + B * Cc == cs.d2)) continue;
        Mat2<Fq> m2{A, B, Cc, -A};
        if (seen.count(key_of(m2))) continue;
        Mat2<Fq> best = m2;
        for (auto& g : cent) {
          Mat2<Fq> h = g * m2 * g.inv();
          seen.insert(key_of(h));
          if (key_of(h) < key_of(best)) best = h;
        }
        CensusClass cc;
        cc.m2 = best;
        EmbeddingPair<Fq> pair{cs.d1, cs.d2, cs.m1, best};
        cc.inv = inv_embedding(pair);
        cc.rank = alpha_rank(pair);
        cs.classes.push_back(cc);
      }
  std::sort(cs.classes.begin(), cs.classes.end(),
            [](const CensusClass& x, const CensusClass& y) { return key_of(x.m2) < key_of(y.m2); });
  std::set<std::pair<uint32_t, uint32_t>> images;
  cs.injective = true;
  cs.three_way = true;
  for (size_t i = 0; i < cs.classes.size(); ++i) {
    auto& cc = cs.classes[i];
    cc.id = static_cast<int>(i);
    bool reg = cc.inv.regular;
    if (reg != (cc.rank == 4)) cs.three_way = false;
    if (reg) {
      ++cs.regular_count;
      if (!images.insert({cc.inv.xi.a.v, cc.inv.xi.b.v}).second) cs.injective = false;
    } else {
      ++cs.nonregular_count;
    }
  }
  Fq half = one / Fq{F, F->from_int(2)};
  Fq d3 = cs.d1 * cs.d2;
  int units = 0;
  bool all_hit = true;
  for (uint32_t b = 0; b < q0; ++b) {
    K3Elt<Fq> xi{half, Fq{F, b}, d3};
    if (!xi.is_unit()) continue;
    ++units;
    if (!images.count({xi.a.v, xi.b.v})) all_hit = false;
  }
  cs.trace1_units = units;
  cs.surjective = all_hit;
  return cs;
}

nlohmann::json Census::to_json() const {
  const GF& F = *d1.F;
  auto fe = [&](const Fq& a) { return field_elem_json(F, a.v); };
  auto mat = [&](const Mat2<Fq>& m) { return nlohmann::json::array({fe(m.a), fe(m.b), fe(m.c), fe(m.d)}); };
  nlohmann::json table = nlohmann::json::array();
  for (auto& c : classes)
    table.push_back({{"class_id", c.id},
                     {"m2", mat(c.m2)},
                     {"xi", nlohmann::json::array({fe(c.inv.xi.a), fe(c.inv.xi.b)})},
                     {"regular", c.inv.regular},
                     {"alpha_rank", c.rank}});
  return {{"q0", q0},
          {"type1", alg_type_name(t1)},
          {"type2", alg_type_name(t2)},
          {"d1", fe(d1)},
          {"d2", fe(d2)},
          {"m1", mat(m1)},
          {"class_count", classes.size()},
          {"regular_count", regular_count},
          {"nonregular_count", nonregular_count},
          {"trace1_unit_count", trace1_units},
          {"injective", injective},
          {"surjective", surjective},
          {"regularity_three_way", three_way},
          {"invariant_table", table}};
}

}  // namespace bq
