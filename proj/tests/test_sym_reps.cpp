#include <doctest.h>

#include "biquad/sym_reps.hpp"

using namespace bq;

namespace {

int64_t binom(int n, int k) {
  int64_t r = 1;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

}  // namespace

TEST_CASE("group law") {
  auto G = group_elements(4);
  CHECK(G.size() == 16 * 24);
  for (size_t a = 0; a < G.size(); a += 37)
    for (size_t b = 0; b < G.size(); b += 41) {
      CHECK((G[a] * G[a].inverse()) == SignedPerm::identity(4));
      for (uint32_t x = 0; x < 16; ++x) CHECK((G[a] * G[b]).act(x) == G[a].act(G[b].act(x)));
    }
}

TEST_CASE("H operator") {
  for (int d = 1; d <= 4; ++d) {
    IMat H = h_operator(d);
    int N = 1 << (2 * d);
    REQUIRE(static_cast<int>(H.size()) == N);
    int64_t tr = 0;
    for (int i = 0; i < N; ++i) {
      tr += H[i][i];
      for (int j = 0; j < N; ++j) CHECK(H[i][j] == H[j][i]);
    }
    CHECK(tr == 0);
    // H commutes with the generators of Gamma_2d
    SignedPermRep rep(d);
    CHECK(rep.dim == N);
    for (auto& t : rep.action)
      for (int x = 0; x < N; ++x)
        for (int y = 0; y < N; ++y) CHECK(H[t[y]][t[x]] == H[y][x]);
  }
  CHECK_THROWS_AS(h_operator(5), BoundExceeded);
  CHECK_THROWS_AS(h_operator(0), BoundExceeded);
}

TEST_CASE("eigenspace decomposition") {
  auto d1 = decompose(1);
  REQUIRE(d1.size() == 3);
  CHECK(d1[0].d1 - d1[0].d2 == -2);
  CHECK(d1[0].basis.size() == 1);
  CHECK(d1[1].d1 - d1[1].d2 == 0);
  CHECK(d1[1].basis.size() == 2);
  CHECK(d1[2].d1 - d1[2].d2 == 2);
  CHECK(d1[2].basis.size() == 1);
  for (int d = 1; d <= 4; ++d) {
    size_t total = 0;
    for (auto& s : decompose(d)) {
      CHECK(s.d1 + s.d2 == 2 * d);
      CHECK(static_cast<int64_t>(s.basis.size()) == binom(2 * d, s.d1));
      total += s.basis.size();
      for (auto& v : s.basis) {
        auto w = h_apply(d, v);
        for (size_t x = 0; x < v.size(); ++x) CHECK(w[x] == (s.d1 - s.d2) * v[x]);
      }
    }
    CHECK(total == (size_t{1} << (2 * d)));
  }
}

TEST_CASE("dense eigenspaces agree with the Psi basis") {
  for (int d = 1; d <= 3; ++d) {
    IMat H = h_operator(d);
    int N = static_cast<int>(H.size());
    for (auto& s : decompose(d)) {
      QMat M(N, QVec(N));
      for (int i = 0; i < N; ++i)
        for (int j = 0; j < N; ++j) M[i][j] = H[i][j] - (i == j ? s.d1 - s.d2 : 0);
      CHECK(static_cast<size_t>(N - q_rank(M)) == s.basis.size());
    }
  }
}

TEST_CASE("irreducibility and induced constituents") {
  for (int d = 1; d <= 3; ++d) {
    for (int p = 0; p <= 2 * d; ++p) CHECK(character_norm(d, p) == 1);
    for (int d1 = 0; d1 <= 2 * d; ++d1) {
      CHECK(verify_induced(d, d1));
      // Ind(eta_d1 x 1) has dimension [Gamma_2d : Gamma_d1 x Gamma_d2] = C(2d, d1)
      CHECK(induced_character(d, d1, SignedPerm::identity(2 * d)) == binom(2 * d, d1));
      // the summand with pos = d1 differs unless d1 = d2
      CHECK(induced_matches(d, d1, d1) == (2 * d1 == 2 * d));
    }
  }
  CHECK_THROWS_AS(verify_induced(4, 4), BoundExceeded);
}

TEST_CASE("Frobenius reciprocity") {
  for (int d = 1; d <= 2; ++d)
    for (int d1 = 0; d1 <= 2 * d; ++d1)
      for (int p = 0; p <= 2 * d; ++p) {
        auto [lhs, rhs] = reciprocity(d, d1, p);
        CHECK(lhs == rhs);
        CHECK(lhs == (p == induced_summand_pos(d, d1) ? 1 : 0));
      }
  auto [lhs, rhs] = reciprocity(3, 2, 4);
  CHECK(lhs == 1);
  CHECK(rhs == 1);
}

TEST_CASE("census") {
  auto j = reps_census(2);
  CHECK(j["eigenvalues"] == nlohmann::json({-4, -2, 0, 2, 4}));
  CHECK(j["multiplicities"] == nlohmann::json({1, 4, 6, 4, 1}));
  CHECK(j["eigenvectors_verified"] == true);
  for (auto& c : j["induced_checks"]) CHECK(c["equal"] == true);
  for (auto& c : j["character_norms"]) CHECK(c["norm"] == "1");
}
