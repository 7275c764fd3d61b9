#pragma once

#include "biquad/divisor.hpp"
#include "biquad/linalg.hpp"

namespace bq {

// Pole allowance at the closed point over S represented by P.
struct RRPoint {
  GeoPt P;
  int n = 0;
};

// S-basis of {g in S(X) : v(g) >= -n at the listed S-closed points,
// v_O(g) >= -n_O, g regular elsewhere}. The listed points must be distinct
// S-closed points; none may be O.
std::vector<FElem> rr_basis_points(const Curve& C, const GF* S, int n_O, const std::vector<RRPoint>& pts);
// F_q-basis of L(D) for a divisor on X.
std::vector<FElem> rr_basis_x(const Curve& C, const Divisor& D);
// F_q-basis of L(D) for a divisor on X or Y1, Y2, Y3, as tower elements.
std::vector<TowerElement> riemann_roch_basis(const Curve& C, const Divisor& D);
// Half of div(u_i) on X: P_i - O (i = 1, 2) or P_1 + P_2 - 2 O (i = 3).
Divisor half_div_u(const Curve& C, int i);

// S-linear conditions "coefficient = 0" for coefficients c in G, reduced by
// Tr_{G/S}(beta_j c) over a basis beta_j of G/S.
void append_trace_rows(const Curve& C, const GF* S, const GF* G, const std::vector<uint32_t>& coeffs, GFMat& m);

}  // namespace bq
