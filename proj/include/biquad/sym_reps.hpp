#pragma once

#include <json.hpp>

#include <cstdint>
#include <vector>

#include "biquad/linalg.hpp"

namespace bq {

// Element (eps, sigma) of Gamma_n = {+-1}^n x| S_n acting on x in {+-1}^n by
// (g x)_i = eps_i x_{sigma^-1(i)}. Sign vectors are bitmasks, bit i set for -1.
struct SignedPerm {
  uint32_t eps = 0;
  std::vector<int> perm;  // perm[j] = sigma(j)

  static SignedPerm identity(int n);
  int size() const { return static_cast<int>(perm.size()); }
  uint32_t act(uint32_t x) const;
  SignedPerm operator*(const SignedPerm& o) const;
  SignedPerm inverse() const;
  bool operator==(const SignedPerm&) const = default;
};

// Permutation of a sign mask: bit j moves to sigma(j).
uint32_t permute_mask(const std::vector<int>& perm, uint32_t m);

using IMat = std::vector<std::vector<int64_t>>;

// Ind_{S_2d}^{Gamma_2d} 1 in the basis Phi_x, x in {+-1}^2d (index = mask of x).
struct SignedPermRep {
  int d = 0;
  int dim = 0;
  std::vector<SignedPerm> generators;         // e_1, (1 2), (1 2 ... 2d)
  std::vector<std::vector<uint32_t>> action;  // action[k][x] = index of generators[k] x

  explicit SignedPermRep(int d);
};

// Matrix of H Phi_x = sum_i Phi_{e_i x}. BoundExceeded for d outside [1, 4].
IMat h_operator(int d);
// H v computed from the definition, without forming the matrix.
std::vector<int64_t> h_apply(int d, const std::vector<int64_t>& v);

struct Summand {
  int d1 = 0, d2 = 0;  // pos and neg counts; H acts by d1 - d2
  std::vector<std::vector<int64_t>> basis;  // Psi_chi in the Phi basis
};
// V_(d1,d2) for d1 + d2 = 2d, in increasing d1.
std::vector<Summand> decompose(int d);

// All elements of Gamma_n for n <= 6.
std::vector<SignedPerm> group_elements(int n);

// Character of V_(d1,d2), through the spectral projector of H (d <= 3).
class SummandCharacter {
 public:
  SummandCharacter(int d, int d1);
  mpq_class operator()(const SignedPerm& g) const;

 private:
  int dim_;
  std::vector<int64_t> p_;  // projector times den_, row-major
  int64_t den_ = 1;
};

// Character of Ind_{Gamma_d1 x Gamma_d2}^{Gamma_2d}(eta_d1 x 1) by coset enumeration.
int64_t induced_character(int d, int d1, const SignedPerm& g);
// <chi_V, chi_V> over all of Gamma_2d for V = V_(d1,d2) (d <= 3).
mpq_class character_norm(int d, int d1);
// Frobenius reciprocity both ways: <Ind psi, chi_V>_Gamma and <psi, Res chi_V>_K,
// with V = V_(p, 2d - p).
std::pair<mpq_class, mpq_class> reciprocity(int d, int d1, int p);
// True iff Ind(eta_d1 x 1) and V_(p, 2d - p) have equal characters on all of Gamma_2d.
bool induced_matches(int d, int d1, int p);
// The summand containing Psi_chi for chi = eta_d1 x 1: pos = d2, neg = d1.
inline int induced_summand_pos(int d, int d1) { return 2 * d - d1; }
// Ind(eta_d1 x 1) is isomorphic to the summand containing Psi_(eta_d1 x 1).
bool verify_induced(int d, int d1);

nlohmann::json reps_census(int d);

}  // namespace bq
