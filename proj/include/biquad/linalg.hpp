#pragma once

#include <gmpxx.h>

#include <optional>
#include <vector>

#include "biquad/gf.hpp"

namespace bq {

// Dense row-major matrix over a GF.
struct GFMat {
  GFMat() = default;
  GFMat(const GF* f, int r, int c) : F(f), rows(r), cols(c), a(static_cast<size_t>(r) * c, 0) {}
  const GF* F = nullptr;
  int rows = 0, cols = 0;
  std::vector<uint32_t> a;
  uint32_t& at(int i, int j) { return a[static_cast<size_t>(i) * cols + j]; }
  uint32_t at(int i, int j) const { return a[static_cast<size_t>(i) * cols + j]; }
  void add_row(const std::vector<uint32_t>& r);
};

// Reduced row echelon form in place; returns pivot columns.
std::vector<int> rref(GFMat& m);
int rank(GFMat m);
std::vector<std::vector<uint32_t>> nullspace(GFMat m);
std::optional<std::vector<uint32_t>> solve(GFMat m, const std::vector<uint32_t>& b);

using QVec = std::vector<mpq_class>;
using QMat = std::vector<QVec>;

QMat q_identity(int n);
QMat q_mul(const QMat& a, const QMat& b);
QVec q_mul(const QMat& a, const QVec& v);
QMat q_transpose(const QMat& a);
std::vector<int> q_rref(QMat& m);
int q_rank(QMat m);
std::vector<QVec> q_nullspace(QMat m);
std::optional<QMat> q_inverse(const QMat& a);
// Characteristic polynomial det(xI - a), coefficients low degree first.
QVec q_charpoly(const QMat& a);
// p(a) for a polynomial with coefficients low degree first.
QMat q_poly_eval(const QVec& p, const QMat& a);

}  // namespace bq
