#include "biquad/curve.hpp"

namespace bq {

namespace {

std::pair<uint32_t, uint32_t> split_prime_power(uint64_t q) {
  if (q < 3 || q % 2 == 0) throw ConfigError("q must be an odd prime power");
  uint32_t p = 0;
  for (uint32_t d = 3; static_cast<uint64_t>(d) * d <= q; d += 2)
    if (q % d == 0) {
      p = d;
      break;
    }
  if (!p) return {static_cast<uint32_t>(q), 1};
  uint32_t k = 0;
  while (q % p == 0) {
    q /= p;
    ++k;
  }
  if (q != 1) throw ConfigError("q must be an odd prime power");
  return {p, k};
}

}  // namespace

uint32_t CurveConfig::q() const { return GF::get(p, k)->size(); }

nlohmann::json field_elem_json(const GF& F, uint32_t a) {
  if (F.m() == 1) return a;
  return F.digits(a);
}

uint32_t field_elem_from_json(const GF& F, const nlohmann::json& j) {
  if (j.is_number_integer()) return F.from_int(j.get<int64_t>());
  if (j.is_array()) {
    std::vector<uint32_t> d;
    for (auto& v : j) {
      int64_t x = v.get<int64_t>() % static_cast<int64_t>(F.p());
      d.push_back(static_cast<uint32_t>(x < 0 ? x + F.p() : x));
    }
    if (d.size() > F.m()) throw ConfigError("field element has too many coefficients");
    return F.from_digits(d);
  }
  throw ConfigError("field element must be an integer or a coefficient array");
}

CurveConfig CurveConfig::from_json(const nlohmann::json& j) {
  if (!j.is_object()) throw ConfigError("curve config must be an object");
  for (const char* key : {"q", "lambda", "e1", "e2"})
    if (!j.contains(key)) throw ConfigError(std::string("curve config missing key ") + key);
  CurveConfig c;
  auto [p, k] = split_prime_power(j.at("q").get<uint64_t>());
  c.p = p;
  c.k = k;
  auto F = GF::get(p, k);
  c.lambda = field_elem_from_json(*F, j.at("lambda"));
  c.e1 = field_elem_from_json(*F, j.at("e1"));
  c.e2 = field_elem_from_json(*F, j.at("e2"));
  c.degree_bound = j.value("degree_bound", 4);
  if (c.lambda == 0 || c.lambda == 1) throw ConfigError("lambda must not be 0 or 1");
  auto root = [&](uint32_t v) { return v == 0 || v == 1 || v == c.lambda; };
  if (!root(c.e1) || !root(c.e2) || c.e1 == c.e2) throw ConfigError("e1, e2 must be distinct elements of {0, 1, lambda}");
  if (c.degree_bound < 1) throw ConfigError("degree_bound must be positive");
  return c;
}

nlohmann::json CurveConfig::to_json() const {
  auto F = GF::get(p, k);
  return {{"q", q()},
          {"lambda", field_elem_json(*F, lambda)},
          {"e1", field_elem_json(*F, e1)},
          {"e2", field_elem_json(*F, e2)},
          {"degree_bound", degree_bound}};
}

Curve::Curve(const CurveConfig& cfg) : cfg_(cfg), tower_(cfg.p, cfg.k) {
  e_[0] = cfg.e1;
  e_[1] = cfg.e2;
  for (uint32_t r : {0u, 1u, cfg.lambda})
    if (r != cfg.e1 && r != cfg.e2) e_[2] = r;
}

uint32_t Curve::embed_base(uint32_t a, const GF* S) const {
  uint32_t d = degree_of(S);
  if (d == 1) return a;
  return tower_.emb(1, d)(a);
}

Poly Curve::cubic(const GF* S) const {
  const GF& B = base();
  // x^3 - (1 + lambda) x^2 + lambda x
  std::vector<uint32_t> c = {0, cfg_.lambda, B.neg(B.add(1, cfg_.lambda)), 1};
  for (auto& v : c) v = embed_base(v, S);
  return Poly(S, c);
}

uint32_t Curve::cubic_at(const GF* S, uint32_t a) const {
  uint32_t l = embed_base(cfg_.lambda, S);
  return S->mul(a, S->mul(S->sub(a, 1), S->sub(a, l)));
}

const std::vector<ClosedPoint>& Curve::cached_points(int d, const std::function<std::vector<ClosedPoint>()>& make) const {
  {
    std::lock_guard<std::mutex> lock(cache_mu_);
    auto it = point_cache_.find(d);
    if (it != point_cache_.end()) return it->second;
  }
  auto pts = make();
  std::lock_guard<std::mutex> lock(cache_mu_);
  return point_cache_.emplace(d, std::move(pts)).first->second;
}

CoverData Curve::cached_cover_data(const ClosedPoint& P, const std::function<CoverData()>& make) const {
  {
    std::lock_guard<std::mutex> lock(cache_mu_);
    auto it = cover_cache_.find(P);
    if (it != cover_cache_.end()) return it->second;
  }
  CoverData d = make();
  std::lock_guard<std::mutex> lock(cache_mu_);
  cover_cache_.emplace(P, d);
  return d;
}

}  // namespace bq
