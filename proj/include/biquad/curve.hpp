#pragma once

#include <array>
#include <compare>
#include <functional>
#include <map>
#include <string>

#include <json.hpp>

#include "biquad/poly.hpp"

namespace bq {

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Elliptic curve X: y^2 = x(x-1)(x-lambda) over F_q with the double covers
// y_i^2 = u_i = x - e_i.
struct CurveConfig {
  uint32_t p = 3, k = 1;
  uint32_t lambda = 2, e1 = 0, e2 = 1;  // elements of F_q as GF indices
  int degree_bound = 4;

  uint32_t q() const;
  static CurveConfig from_json(const nlohmann::json& j);
  nlohmann::json to_json() const;
};

// Point of X with coordinates in the tower field of degree n (or O).
struct GeoPt {
  uint32_t n = 1;
  bool inf = false;
  uint32_t x = 0, y = 0;
  bool operator==(const GeoPt&) const = default;
};

// Closed point of X: the canonical representative (lexicographically least
// (x, y) in its Frobenius orbit) with coordinates in the field of degree deg.
struct ClosedPoint {
  int deg = 1;
  bool inf = false;
  uint32_t x = 0, y = 0;
  auto operator<=>(const ClosedPoint&) const = default;
  GeoPt geo() const { return GeoPt{static_cast<uint32_t>(deg), inf, x, y}; }
  static ClosedPoint origin() { return ClosedPoint{1, true, 0, 0}; }
};

// Leading coefficients of u_1, u_2, u_3 at the representative of a closed
// point, half their valuations, and whether the point splits in Y_i.
struct CoverData {
  std::array<uint32_t, 3> lead{};
  std::array<int, 3> half_val{};
  std::array<int, 3> chi{};
};

class Curve {
 public:
  explicit Curve(const CurveConfig& cfg);

  const CurveConfig& config() const { return cfg_; }
  const FieldTower& tower() const { return tower_; }
  const GF& base() const { return *tower_.base(); }
  const GFPtr& base_ptr() const { return tower_.base(); }
  uint32_t q() const { return base().size(); }
  uint32_t lambda() const { return cfg_.lambda; }
  // Roots e_1, e_2, e_3 of the cubic; e_3 is the remaining one of {0, 1, lambda}.
  uint32_t e(int i) const { return e_[i - 1]; }
  // Degree of S over the base field.
  uint32_t degree_of(const GF* S) const { return tower_.degree_of(*S); }
  const Embedding& emb(const GF* S, const GF* G) const { return tower_.emb(degree_of(S), degree_of(G)); }
  uint32_t embed_base(uint32_t a, const GF* S) const;
  // x(x-1)(x-lambda) with coefficients in S.
  Poly cubic(const GF* S) const;
  // Value of the cubic at a in S.
  uint32_t cubic_at(const GF* S, uint32_t a) const;
  // Closed points of exact degree d, computed once by make.
  const std::vector<ClosedPoint>& cached_points(int d, const std::function<std::vector<ClosedPoint>()>& make) const;
  CoverData cached_cover_data(const ClosedPoint& P, const std::function<CoverData()>& make) const;

 private:
  mutable std::mutex cache_mu_;
  mutable std::map<int, std::vector<ClosedPoint>> point_cache_;
  mutable std::map<ClosedPoint, CoverData> cover_cache_;
  CurveConfig cfg_;
  FieldTower tower_;
  std::array<uint32_t, 3> e_{};
};

nlohmann::json field_elem_json(const GF& F, uint32_t a);
uint32_t field_elem_from_json(const GF& F, const nlohmann::json& j);

}  // namespace bq
