#pragma once

#include <array>

#include "biquad/felem.hpp"

namespace bq {

struct LevelMismatch : std::runtime_error {
  using std::runtime_error::runtime_error;
};

enum class Level { F, K1, K2, K3, K };
enum class Aut { sigma1, sigma2, sigma3, tau1, tau2, tau3 };

const char* level_name(Level l);
Level level_from_name(const std::string& s);
const char* aut_name(Aut g);
// Smallest level containing both.
Level join(Level a, Level b);
bool contains(Level big, Level small);
int level_dim(Level l);

// Element of F, K_1, K_2, K_3 or K = F(s_1, s_2), s_i^2 = u_i, s_3 = s_1 s_2.
// Coordinates over F in the basis {1}, {1, s_i} or {1, s_1, s_2, s_1 s_2}.
class TowerElement {
 public:
  TowerElement() = default;
  TowerElement(Level l, std::vector<FElem> coords);
  static TowerElement from_f(const FElem& a) { return TowerElement(Level::F, {a}); }
  static TowerElement s(const Curve* c, int i);
  static TowerElement constant(const Curve* c, int64_t v);

  Level level = Level::F;
  std::vector<FElem> c;

  const Curve* curve() const { return c[0].C; }
  // Coordinates in the basis {1, s1, s2, s1 s2} of K.
  std::array<FElem, 4> k_coords() const;
  // Re-express at level l; throws LevelMismatch when not contained.
  TowerElement at_level(Level l) const;
  // Smallest level containing the element.
  TowerElement demoted() const;
  bool is_zero() const;

  TowerElement operator+(const TowerElement& o) const;
  TowerElement operator-(const TowerElement& o) const;
  TowerElement operator-() const;
  TowerElement operator*(const TowerElement& o) const;
  TowerElement operator/(const TowerElement& o) const { return *this * o.inv(); }
  TowerElement inv() const;
  bool operator==(const TowerElement& o) const;
  bool operator!=(const TowerElement& o) const { return !(*this == o); }
  std::string str() const;
};

TowerElement apply_automorphism(const TowerElement& z, Aut g);
TowerElement trace(const TowerElement& z, Level down_to);
TowerElement norm(const TowerElement& z, Level down_to);

}  // namespace bq
