#include "biquad/sym_reps.hpp"

#include <algorithm>
#include <bit>
#include <numeric>
#include <optional>
#include <string>

namespace bq {

namespace {

void check_d(int d, int max_d) {
  if (d < 1 || d > max_d)
    throw BoundExceeded("sym_reps: d = " + std::to_string(d) + " outside [1, " + std::to_string(max_d) + "]");
}

int64_t factorial(int n) { return n <= 1 ? 1 : n * factorial(n - 1); }

// psi = eta_d1 x 1 on Gamma_d1 x Gamma_d2, or nullopt outside the subgroup.
std::optional<int> block_character(const SignedPerm& k, int d1) {
  for (int j = 0; j < d1; ++j)
    if (k.perm[j] >= d1) return std::nullopt;
  uint32_t low = (1u << d1) - 1;
  return std::popcount(k.eps & low) % 2 ? -1 : 1;
}

}  // namespace

SignedPerm SignedPerm::identity(int n) {
  SignedPerm g;
  g.perm.resize(n);
  std::iota(g.perm.begin(), g.perm.end(), 0);
  return g;
}

uint32_t permute_mask(const std::vector<int>& perm, uint32_t m) {
  uint32_t r = 0;
  for (size_t j = 0; j < perm.size(); ++j)
    if (m >> j & 1u) r |= 1u << perm[j];
  return r;
}

uint32_t SignedPerm::act(uint32_t x) const { return eps ^ permute_mask(perm, x); }

SignedPerm SignedPerm::operator*(const SignedPerm& o) const {
  SignedPerm r;
  r.eps = eps ^ permute_mask(perm, o.eps);
  r.perm.resize(perm.size());
  for (size_t j = 0; j < perm.size(); ++j) r.perm[j] = perm[o.perm[j]];
  return r;
}

SignedPerm SignedPerm::inverse() const {
  SignedPerm r;
  r.perm.resize(perm.size());
  for (size_t j = 0; j < perm.size(); ++j) r.perm[perm[j]] = static_cast<int>(j);
  r.eps = permute_mask(r.perm, eps);
  return r;
}

SignedPermRep::SignedPermRep(int d_) : d(d_) {
  check_d(d, 4);
  int n = 2 * d;
  dim = 1 << n;
  SignedPerm flip = SignedPerm::identity(n);
  flip.eps = 1;
  SignedPerm swap = SignedPerm::identity(n);
  std::swap(swap.perm[0], swap.perm[1]);
  SignedPerm cycle = SignedPerm::identity(n);
  for (int j = 0; j < n; ++j) cycle.perm[j] = (j + 1) % n;
  generators = {flip, swap, cycle};
  for (auto& g : generators) {
    std::vector<uint32_t> t(dim);
    for (uint32_t x = 0; x < static_cast<uint32_t>(dim); ++x) t[x] = g.act(x);
    action.push_back(std::move(t));
  }
}

IMat h_operator(int d) {
  check_d(d, 4);
  int n = 2 * d, N = 1 << n;
  IMat H(N, std::vector<int64_t>(N, 0));
  for (int x = 0; x < N; ++x)
    for (int i = 0; i < n; ++i) H[x ^ (1 << i)][x] += 1;
  return H;
}

std::vector<int64_t> h_apply(int d, const std::vector<int64_t>& v) {
  check_d(d, 4);
  int n = 2 * d;
  std::vector<int64_t> r(v.size(), 0);
  for (size_t x = 0; x < v.size(); ++x)
    for (int i = 0; i < n; ++i) r[x ^ (1u << i)] += v[x];
  return r;
}

std::vector<Summand> decompose(int d) {
  check_d(d, 4);
  int n = 2 * d, N = 1 << n;
  std::vector<Summand> out(n + 1);
  for (int p = 0; p <= n; ++p) {
    out[p].d1 = p;
    out[p].d2 = n - p;
  }
  for (uint32_t T = 0; T < static_cast<uint32_t>(N); ++T) {
    std::vector<int64_t> psi(N);
    for (uint32_t x = 0; x < static_cast<uint32_t>(N); ++x) psi[x] = std::popcount(T & x) % 2 ? -1 : 1;
    out[n - std::popcount(T)].basis.push_back(std::move(psi));
  }
  return out;
}

std::vector<SignedPerm> group_elements(int n) {
  if (n < 1 || n > 6) throw BoundExceeded("sym_reps: group enumeration limited to n <= 6");
  std::vector<SignedPerm> out;
  SignedPerm g = SignedPerm::identity(n);
  do {
    for (uint32_t e = 0; e < (1u << n); ++e) {
      g.eps = e;
      out.push_back(g);
    }
  } while (std::next_permutation(g.perm.begin(), g.perm.end()));
  return out;
}

SummandCharacter::SummandCharacter(int d, int d1) {
  check_d(d, 3);
  int n = 2 * d;
  if (d1 < 0 || d1 > n) throw BoundExceeded("sym_reps: d1 outside [0, 2d]");
  IMat H = h_operator(d);
  dim_ = 1 << n;
  std::vector<int64_t> M(static_cast<size_t>(dim_) * dim_, 0);
  for (int i = 0; i < dim_; ++i) M[static_cast<size_t>(i) * dim_ + i] = 1;
  int lambda = 2 * d1 - n;
  for (int k = 0; k <= n; ++k) {
    if (k == d1) continue;
    int mu = 2 * k - n;
    // M <- M (H - mu)
    std::vector<int64_t> R(M.size(), 0);
    for (int i = 0; i < dim_; ++i)
      for (int l = 0; l < dim_; ++l) {
        int64_t a = M[static_cast<size_t>(i) * dim_ + l];
        if (a == 0) continue;
        for (int j = 0; j < dim_; ++j) {
          int64_t h = H[l][j] - (l == j ? mu : 0);
          if (h) R[static_cast<size_t>(i) * dim_ + j] += a * h;
        }
      }
    M = std::move(R);
    den_ *= lambda - mu;
  }
  p_ = std::move(M);
}

mpq_class SummandCharacter::operator()(const SignedPerm& g) const {
  int64_t t = 0;
  for (uint32_t y = 0; y < static_cast<uint32_t>(dim_); ++y) t += p_[static_cast<size_t>(y) * dim_ + g.act(y)];
  mpq_class r(t);
  r /= den_;
  return r;
}

int64_t induced_character(int d, int d1, const SignedPerm& g) {
  check_d(d, 3);
  int n = 2 * d;
  int64_t total = 0;
  for (uint32_t T = 0; T < (1u << n); ++T) {
    if (std::popcount(T) != d1) continue;
    SignedPerm h = SignedPerm::identity(n);
    int lo = 0, hi = d1;
    for (int i = 0; i < n; ++i) (T >> i & 1u ? h.perm[lo++] : h.perm[hi++]) = i;
    if (auto v = block_character(h.inverse() * g * h, d1)) total += *v;
  }
  return total;
}

mpq_class character_norm(int d, int d1) {
  SummandCharacter chi(d, d1);
  mpq_class s = 0;
  auto G = group_elements(2 * d);
  for (auto& g : G) {
    mpq_class c = chi(g);
    s += c * c;
  }
  return s / static_cast<int64_t>(G.size());
}

std::pair<mpq_class, mpq_class> reciprocity(int d, int d1, int p) {
  SummandCharacter chi(d, p);
  mpq_class lhs = 0, rhs = 0;
  int64_t k_order = 0;
  auto G = group_elements(2 * d);
  for (auto& g : G) {
    mpq_class c = chi(g);
    lhs += induced_character(d, d1, g) * c;
    if (auto v = block_character(g, d1)) {
      rhs += *v * c;
      ++k_order;
    }
  }
  int64_t expect = (int64_t{1} << (2 * d)) * factorial(d1) * factorial(2 * d - d1);
  if (k_order != expect) throw BoundExceeded("sym_reps: subgroup order mismatch");
  return {lhs / static_cast<int64_t>(G.size()), rhs / k_order};
}

bool induced_matches(int d, int d1, int p) {
  SummandCharacter chi(d, p);
  for (auto& g : group_elements(2 * d))
    if (chi(g) != induced_character(d, d1, g)) return false;
  return true;
}

bool verify_induced(int d, int d1) { return induced_matches(d, d1, induced_summand_pos(d, d1)); }

nlohmann::json reps_census(int d) {
  auto parts = decompose(d);
  nlohmann::json j;
  j["d"] = d;
  j["eigenvalues"] = nlohmann::json::array();
  j["multiplicities"] = nlohmann::json::array();
  bool eigen_ok = true;
  for (auto& s : parts) {
    int lambda = s.d1 - s.d2;
    j["eigenvalues"].push_back(lambda);
    j["multiplicities"].push_back(s.basis.size());
    for (auto& v : s.basis) {
      auto w = h_apply(d, v);
      for (size_t x = 0; x < v.size(); ++x) eigen_ok = eigen_ok && w[x] == lambda * v[x];
    }
  }
  j["eigenvectors_verified"] = eigen_ok;
  j["character_norms"] = nlohmann::json::array();
  j["induced_checks"] = nlohmann::json::array();
  if (d <= 3) {
    for (auto& s : parts) {
      mpq_class nrm = character_norm(d, s.d1);
      j["character_norms"].push_back({{"d1", s.d1}, {"d2", s.d2}, {"norm", nrm.get_str()}});
    }
    for (int d1 = 0; d1 <= 2 * d; ++d1) {
      int p = induced_summand_pos(d, d1);
      j["induced_checks"].push_back(
          {{"d1", d1}, {"d2", 2 * d - d1}, {"summand", {p, 2 * d - p}}, {"equal", verify_induced(d, d1)}});
    }
  }
  return j;
}

}  // namespace bq
