#pragma once

#include <random>

#include "biquad/tower.hpp"

namespace bqtest {

inline bq::CurveConfig config(uint32_t q, uint32_t lambda, uint32_t e1 = 0, uint32_t e2 = 1, int bound = 4) {
  nlohmann::json j = {{"q", q}, {"lambda", lambda}, {"e1", e1}, {"e2", e2}, {"degree_bound", bound}};
  return bq::CurveConfig::from_json(j);
}

inline bq::Poly random_poly(const bq::GF* F, int deg, std::mt19937_64& rng) {
  std::uniform_int_distribution<uint32_t> d(0, F->size() - 1);
  std::vector<uint32_t> c(deg + 1);
  for (auto& v : c) v = d(rng);
  return bq::Poly(F, c);
}

inline bq::RatFn random_ratfn(const bq::GF* F, std::mt19937_64& rng) {
  bq::Poly den = random_poly(F, 1, rng);
  if (den.is_zero()) den = bq::Poly::constant(F, 1);
  return bq::RatFn(random_poly(F, 2, rng), den);
}

inline bq::FElem random_felem(const bq::Curve& C, std::mt19937_64& rng) {
  const bq::GF* F = C.base_ptr().get();
  return bq::FElem(&C, random_ratfn(F, rng), random_ratfn(F, rng));
}

inline bq::TowerElement random_tower(const bq::Curve& C, bq::Level l, std::mt19937_64& rng) {
  std::vector<bq::FElem> c;
  for (int i = 0; i < bq::level_dim(l); ++i) c.push_back(random_felem(C, rng));
  return bq::TowerElement(l, c);
}

// a(x) + b y with a of degree <= 1 and b constant, so that divisors stay
// within the field tables.
inline bq::FElem small_felem(const bq::Curve& C, std::mt19937_64& rng) {
  const bq::GF* F = C.base_ptr().get();
  std::uniform_int_distribution<uint32_t> d(0, F->size() - 1);
  return bq::FElem(&C, bq::RatFn(random_poly(F, 1, rng)), bq::RatFn::constant(F, d(rng)));
}

// Tower element with coordinates in F_q[x] of degree <= 1.
inline bq::TowerElement small_tower(const bq::Curve& C, bq::Level l, std::mt19937_64& rng) {
  const bq::GF* F = C.base_ptr().get();
  std::vector<bq::FElem> c;
  for (int i = 0; i < bq::level_dim(l); ++i)
    c.push_back(bq::FElem(&C, bq::RatFn(random_poly(F, 1, rng)), bq::RatFn(F)));
  return bq::TowerElement(l, c);
}

}  // namespace bqtest
