#include "biquad/gf.hpp"

#include <map>
#include <mutex>

namespace bq {

namespace {

uint32_t ipow(uint32_t b, uint32_t e) {
  uint64_t r = 1;
  for (uint32_t i = 0; i < e; ++i) {
    r *= b;
    if (r > GF::kMaxSize) return GF::kMaxSize + 1;
  }
  return static_cast<uint32_t>(r);
}

}  // namespace

std::shared_ptr<const GF> GF::get(uint32_t p, uint32_t m) {
  static std::mutex mu;
  static std::map<std::pair<uint32_t, uint32_t>, std::shared_ptr<const GF>> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto& slot = cache[{p, m}];
  if (!slot) slot = std::make_shared<const GF>(p, m);
  return slot;
}

GF::GF(uint32_t p, uint32_t m) : p_(p), m_(m) {
  if (p < 3 || m == 0) throw std::invalid_argument("GF: need odd p and m >= 1");
  for (uint32_t d = 2; d * d <= p; ++d)
    if (p % d == 0) throw std::invalid_argument("GF: p must be prime");
  q_ = ipow(p, m);
  if (q_ > kMaxSize) throw BoundExceeded("GF: field of size " + std::to_string(p) + "^" +
                                         std::to_string(m) + " exceeds table limit");
  if (m_ > 1) {
    half_ = ipow(p, (m + 1) / 2);
    uint32_t hd = (m + 1) / 2;
    addt_.resize(static_cast<size_t>(half_) * half_);
    negt_.resize(half_);
    for (uint32_t a = 0; a < half_; ++a) {
      uint32_t na = 0, pw = 1, x = a;
      for (uint32_t i = 0; i < hd; ++i) {
        uint32_t d = x % p;
        x /= p;
        na += ((p - d) % p) * pw;
        pw *= p;
      }
      negt_[a] = na;
      for (uint32_t b = 0; b < half_; ++b) {
        uint32_t s = 0, xa = a, xb = b;
        pw = 1;
        for (uint32_t i = 0; i < hd; ++i) {
          s += ((xa % p + xb % p) % p) * pw;
          xa /= p;
          xb /= p;
          pw *= p;
        }
        addt_[a * half_ + b] = s;
      }
    }
  }

  exp_.assign(2 * static_cast<size_t>(q_), 0);
  log_.assign(q_, 0);
  if (m_ == 1) {
    modulus_ = {0, 1};
    for (uint32_t g = 2; g < p; ++g) {
      uint64_t x = 1;
      uint32_t order = 0;
      do {
        x = x * g % p;
        ++order;
      } while (x != 1);
      if (order != p - 1) continue;
      modulus_ = {p - g, 1};
      x = 1;
      for (uint32_t i = 0; i < q_ - 1; ++i) {
        exp_[i] = static_cast<uint32_t>(x);
        log_[x] = i;
        x = x * g % p;
      }
      break;
    }
  } else {
    // Search monic polynomials c0 + c1 x + ... + x^m with primitive root x.
    std::vector<uint32_t> c(m, 0);
    std::vector<uint32_t> cur(m);
    for (uint64_t code = 1; code < q_; ++code) {
      uint64_t t = code;
      for (uint32_t i = 0; i < m; ++i) {
        c[i] = t % p;
        t /= p;
      }
      if (c[0] == 0) continue;
      std::fill(cur.begin(), cur.end(), 0);
      cur[0] = 1;
      bool ok = true;
      for (uint32_t i = 0; i < q_ - 1; ++i) {
        uint32_t enc = 0, pw = 1;
        for (uint32_t j = 0; j < m; ++j) {
          enc += cur[j] * pw;
          pw *= p;
        }
        if (i > 0 && enc == 1) {
          ok = false;
          break;
        }
        exp_[i] = enc;
        // multiply by x modulo the candidate
        uint32_t top = cur[m - 1];
        for (uint32_t j = m - 1; j > 0; --j) cur[j] = cur[j - 1];
        cur[0] = 0;
        if (top)
          for (uint32_t j = 0; j < m; ++j) cur[j] = (cur[j] + (p - top) * c[j]) % p;
      }
      if (!ok) continue;
      modulus_.assign(c.begin(), c.end());
      modulus_.push_back(1);
      for (uint32_t i = 0; i < q_ - 1; ++i) log_[exp_[i]] = i;
      break;
    }
    if (modulus_.empty()) throw std::logic_error("GF: no primitive polynomial found");
  }
  for (uint32_t i = 0; i < q_ - 1; ++i) exp_[i + q_ - 1] = exp_[i];
}

uint32_t GF::pow(uint32_t a, int64_t e) const {
  if (a == 0) {
    if (e == 0) return 1;
    if (e < 0) throw DivisionByZero();
    return 0;
  }
  int64_t n = q_ - 1;
  int64_t k = static_cast<int64_t>(log_[a]) % n;
  int64_t ee = e % n;
  if (ee < 0) ee += n;
  return exp_[static_cast<uint64_t>((static_cast<__int128>(k) * ee) % n)];
}

uint32_t GF::from_int(int64_t v) const {
  int64_t r = v % static_cast<int64_t>(p_);
  if (r < 0) r += p_;
  return static_cast<uint32_t>(r);
}

int64_t GF::to_int(uint32_t a) const {
  if (a >= p_) throw std::invalid_argument("GF::to_int: element not in prime field");
  return a;
}

uint32_t GF::sqrt(uint32_t a) const {
  if (a == 0) return 0;
  if (log_[a] % 2) throw std::domain_error("GF::sqrt: not a square");
  uint32_t r = exp_[log_[a] / 2];
  uint32_t s = neg(r);
  return r < s ? r : s;
}

uint32_t GF::frob(uint32_t a, uint32_t k) const {
  if (a == 0) return 0;
  uint64_t e = 1;
  for (uint32_t i = 0; i < k % m_; ++i) e = e * p_ % (q_ - 1);
  return exp_[static_cast<uint64_t>(log_[a]) * e % (q_ - 1)];
}

std::vector<uint32_t> GF::digits(uint32_t a) const {
  std::vector<uint32_t> d(m_);
  for (uint32_t i = 0; i < m_; ++i) {
    d[i] = a % p_;
    a /= p_;
  }
  return d;
}

uint32_t GF::from_digits(const std::vector<uint32_t>& d) const {
  uint32_t r = 0, pw = 1;
  for (uint32_t i = 0; i < m_ && i < d.size(); ++i) {
    r += (d[i] % p_) * pw;
    pw *= p_;
  }
  return r;
}

std::string GF::str(uint32_t a) const {
  if (m_ == 1) return std::to_string(a);
  std::string s = "[";
  auto d = digits(a);
  for (size_t i = 0; i < d.size(); ++i) {
    if (i) s += ",";
    s += std::to_string(d[i]);
  }
  return s + "]";
}

Embedding::Embedding(GFPtr small, GFPtr big, uint32_t beta)
    : small_(std::move(small)), big_(std::move(big)) {
  const GF& S = *small_;
  const GF& B = *big_;
  img_.resize(S.size());
  pre_.assign(B.size(), -1);
  std::vector<uint32_t> bp(S.m());
  bp[0] = 1;
  for (uint32_t i = 1; i < S.m(); ++i) bp[i] = B.mul(bp[i - 1], beta);
  for (uint32_t a = 0; a < S.size(); ++a) {
    uint32_t x = a, r = 0;
    for (uint32_t i = 0; i < S.m(); ++i) {
      uint32_t d = x % S.p();
      x /= S.p();
      if (d) r = B.add(r, B.mul(B.from_int(d), bp[i]));
    }
    img_[a] = r;
    pre_[r] = static_cast<int32_t>(a);
  }
}

uint32_t Embedding::back(uint32_t a) const {
  if (pre_[a] < 0) throw std::domain_error("Embedding::back: element not in subfield");
  return static_cast<uint32_t>(pre_[a]);
}

uint32_t Embedding::trace(uint32_t a) const {
  const GF& B = *big_;
  uint32_t r = B.m() / small_->m();
  uint32_t s = 0, x = a;
  for (uint32_t i = 0; i < r; ++i) {
    s = B.add(s, x);
    x = B.frob(x, small_->m());
  }
  return back(s);
}

namespace {

uint32_t eval_modulus(const GF& B, const std::vector<uint32_t>& mod, uint32_t x) {
  uint32_t r = 0;
  for (size_t i = mod.size(); i-- > 0;) r = B.add(B.mul(r, x), B.from_int(mod[i]));
  return r;
}

}  // namespace

FieldTower::FieldTower(uint32_t p, uint32_t k) : p_(p), k_(k) {
  base_ = GF::get(p, k);
  ext_.resize(2);
  ext_[1] = base_;
}

GFPtr FieldTower::ext(uint32_t n) const {
  std::lock_guard<std::mutex> lock(mu_);
  if (n >= ext_.size()) ext_.resize(n + 1);
  if (!ext_[n]) ext_[n] = GF::get(p_, k_ * n);
  return ext_[n];
}

const Embedding& FieldTower::emb(uint32_t a, uint32_t b) const {
  if (b % a) throw std::invalid_argument("FieldTower::emb: degree does not divide");
  GFPtr S = ext(a), B = ext(b);
  const Embedding* base_ab = nullptr;
  const Embedding* base_b = nullptr;
  if (k_ > 1 && a > 1) {
    base_ab = &emb(1, a);
    base_b = &emb(1, b);
  }
  std::lock_guard<std::mutex> lock(mu_);
  for (size_t i = 0; i < emb_keys_.size(); ++i)
    if (emb_keys_[i] == std::make_pair(a, b)) return *embs_[i];
  // roots of the defining polynomial of S lie in the subgroup of order |S|-1
  uint64_t step = (B->size() - 1) / (S->size() - 1);
  std::unique_ptr<Embedding> found;
  for (uint64_t j = 1; j < S->size() && !found; ++j) {
    uint32_t beta = B->exp(step * j);
    if (eval_modulus(*B, S->modulus(), beta) != 0) continue;
    auto cand = std::make_unique<Embedding>(S, B, beta);
    if (base_ab) {
      uint32_t g = base_->gen();
      if ((*cand)((*base_ab)(g)) != (*base_b)(g)) continue;
    }
    found = std::move(cand);
  }
  if (!found) throw std::logic_error("FieldTower::emb: no compatible embedding");
  emb_keys_.push_back({a, b});
  embs_.push_back(std::move(found));
  return *embs_.back();
}

}  // namespace bq
