#include "biquad/linalg.hpp"

#include <stdexcept>

namespace bq {

void GFMat::add_row(const std::vector<uint32_t>& r) {
  if (rows == 0 && cols == 0) cols = static_cast<int>(r.size());
  if (static_cast<int>(r.size()) != cols) throw std::invalid_argument("GFMat::add_row: width mismatch");
  a.insert(a.end(), r.begin(), r.end());
  ++rows;
}

std::vector<int> rref(GFMat& m) {
  const GF& F = *m.F;
  std::vector<int> piv;
  int r = 0;
  for (int c = 0; c < m.cols && r < m.rows; ++c) {
    int sel = -1;
    for (int i = r; i < m.rows; ++i)
      if (m.at(i, c)) {
        sel = i;
        break;
      }
    if (sel < 0) continue;
    if (sel != r)
      for (int j = 0; j < m.cols; ++j) std::swap(m.at(sel, j), m.at(r, j));
    uint32_t iv = F.inv(m.at(r, c));
    for (int j = c; j < m.cols; ++j) m.at(r, j) = F.mul(m.at(r, j), iv);
    for (int i = 0; i < m.rows; ++i) {
      if (i == r || !m.at(i, c)) continue;
      uint32_t f = F.neg(m.at(i, c));
      for (int j = c; j < m.cols; ++j)
        if (m.at(r, j)) m.at(i, j) = F.add(m.at(i, j), F.mul(f, m.at(r, j)));
    }
    piv.push_back(c);
    ++r;
  }
  return piv;
}

int rank(GFMat m) { return static_cast<int>(rref(m).size()); }

std::vector<std::vector<uint32_t>> nullspace(GFMat m) {
  auto piv = rref(m);
  std::vector<int> is_piv(m.cols, -1);
  for (size_t i = 0; i < piv.size(); ++i) is_piv[piv[i]] = static_cast<int>(i);
  std::vector<std::vector<uint32_t>> out;
  for (int f = 0; f < m.cols; ++f) {
    if (is_piv[f] >= 0) continue;
    std::vector<uint32_t> v(m.cols, 0);
    v[f] = 1;
    for (size_t i = 0; i < piv.size(); ++i) v[piv[i]] = m.F->neg(m.at(static_cast<int>(i), f));
    out.push_back(std::move(v));
  }
  return out;
}

std::optional<std::vector<uint32_t>> solve(GFMat m, const std::vector<uint32_t>& b) {
  GFMat aug(m.F, m.rows, m.cols + 1);
  for (int i = 0; i < m.rows; ++i) {
    for (int j = 0; j < m.cols; ++j) aug.at(i, j) = m.at(i, j);
    aug.at(i, m.cols) = b[i];
  }
  auto piv = rref(aug);
  if (!piv.empty() && piv.back() == m.cols) return std::nullopt;
  std::vector<uint32_t> x(m.cols, 0);
  for (size_t i = 0; i < piv.size(); ++i) x[piv[i]] = aug.at(static_cast<int>(i), m.cols);
  return x;
}

QMat q_identity(int n) {
  QMat m(n, QVec(n, 0));
  for (int i = 0; i < n; ++i) m[i][i] = 1;
  return m;
}

QMat q_mul(const QMat& a, const QMat& b) {
  size_t n = a.size(), k = b.size(), m = k ? b[0].size() : 0;
  QMat r(n, QVec(m, 0));
  for (size_t i = 0; i < n; ++i)
    for (size_t l = 0; l < k; ++l) {
      if (a[i][l] == 0) continue;
      for (size_t j = 0; j < m; ++j) r[i][j] += a[i][l] * b[l][j];
    }
  return r;
}

QVec q_mul(const QMat& a, const QVec& v) {
  QVec r(a.size(), 0);
  for (size_t i = 0; i < a.size(); ++i)
    for (size_t j = 0; j < v.size(); ++j) r[i] += a[i][j] * v[j];
  return r;
}

QMat q_transpose(const QMat& a) {
  if (a.empty()) return a;
  QMat r(a[0].size(), QVec(a.size()));
  for (size_t i = 0; i < a.size(); ++i)
    for (size_t j = 0; j < a[0].size(); ++j) r[j][i] = a[i][j];
  return r;
}

std::vector<int> q_rref(QMat& m) {
  std::vector<int> piv;
  int rows = static_cast<int>(m.size());
  int cols = rows ? static_cast<int>(m[0].size()) : 0;
  int r = 0;
  for (int c = 0; c < cols && r < rows; ++c) {
    int sel = -1;
    for (int i = r; i < rows; ++i)
      if (m[i][c] != 0) {
        sel = i;
        break;
      }
    if (sel < 0) continue;
    std::swap(m[sel], m[r]);
    mpq_class iv = 1 / m[r][c];
    for (int j = c; j < cols; ++j) m[r][j] *= iv;
    for (int i = 0; i < rows; ++i) {
      if (i == r || m[i][c] == 0) continue;
      mpq_class f = m[i][c];
      for (int j = c; j < cols; ++j)
        if (m[r][j] != 0) m[i][j] -= f * m[r][j];
    }
    piv.push_back(c);
    ++r;
  }
  return piv;
}

int q_rank(QMat m) { return static_cast<int>(q_rref(m).size()); }

std::vector<QVec> q_nullspace(QMat m) {
  int cols = m.empty() ? 0 : static_cast<int>(m[0].size());
  auto piv = q_rref(m);
  std::vector<int> is_piv(cols, -1);
  for (size_t i = 0; i < piv.size(); ++i) is_piv[piv[i]] = static_cast<int>(i);
  std::vector<QVec> out;
  for (int f = 0; f < cols; ++f) {
    if (is_piv[f] >= 0) continue;
    QVec v(cols, 0);
    v[f] = 1;
    for (size_t i = 0; i < piv.size(); ++i) v[piv[i]] = -m[i][f];
    out.push_back(std::move(v));
  }
  return out;
}

std::optional<QMat> q_inverse(const QMat& a) {
  int n = static_cast<int>(a.size());
  QMat aug(n, QVec(2 * n, 0));
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) aug[i][j] = a[i][j];
    aug[i][n + i] = 1;
  }
  auto piv = q_rref(aug);
  if (static_cast<int>(piv.size()) < n || (n && piv[n - 1] != n - 1)) return std::nullopt;
  QMat r(n, QVec(n));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) r[i][j] = aug[i][n + j];
  return r;
}

QVec q_charpoly(const QMat& a) {
  // Faddeev-LeVerrier
  int n = static_cast<int>(a.size());
  QVec c(n + 1, 0);
  c[n] = 1;
  QMat m(n, QVec(n, 0));
  for (int k = 1; k <= n; ++k) {
    QMat am = q_mul(a, m);
    for (int i = 0; i < n; ++i) am[i][i] += c[n - k + 1];
    m = am;
    QMat t = q_mul(a, m);
    mpq_class tr = 0;
    for (int i = 0; i < n; ++i) tr += t[i][i];
    c[n - k] = -tr / k;
  }
  return c;
}

QMat q_poly_eval(const QVec& p, const QMat& a) {
  int n = static_cast<int>(a.size());
  QMat r(n, QVec(n, 0));
  for (size_t i = p.size(); i-- > 0;) {
    r = q_mul(r, a);
    for (int j = 0; j < n; ++j) r[j][j] += p[i];
  }
  return r;
}

}  // namespace bq
