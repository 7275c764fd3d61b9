#pragma once

#include <cstdint>
#include <memory>
#include <mutex>
#include <stdexcept>
#include <string>
#include <vector>

namespace bq {

struct BoundExceeded : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct DivisionByZero : std::runtime_error {
  DivisionByZero() : std::runtime_error("division by zero") {}
};

// Finite field F_{p^m}. Elements are integers in [0, p^m) whose base-p digits
// are the coefficients of a polynomial in a primitive root g of the defining
// polynomial. Multiplication goes through log/exp tables.
class GF {
 public:
  static constexpr uint32_t kMaxSize = 1u << 21;

  static std::shared_ptr<const GF> get(uint32_t p, uint32_t m);

  uint32_t p() const { return p_; }
  uint32_t m() const { return m_; }
  uint32_t size() const { return q_; }

  uint32_t add(uint32_t a, uint32_t b) const {
    if (m_ == 1) {
      uint32_t s = a + b;
      return s >= p_ ? s - p_ : s;
    }
    return addt_[(a % half_) * half_ + (b % half_)] +
           half_ * addt_[(a / half_) * half_ + (b / half_)];
  }
  uint32_t neg(uint32_t a) const {
    if (m_ == 1) return a == 0 ? 0 : p_ - a;
    return negt_[a % half_] + half_ * negt_[a / half_];
  }
  uint32_t sub(uint32_t a, uint32_t b) const { return add(a, neg(b)); }
  uint32_t mul(uint32_t a, uint32_t b) const {
    if (a == 0 || b == 0) return 0;
    return exp_[log_[a] + log_[b]];
  }
  uint32_t inv(uint32_t a) const {
    if (a == 0) throw DivisionByZero();
    return exp_[(q_ - 1 - log_[a]) % (q_ - 1)];
  }
  uint32_t div(uint32_t a, uint32_t b) const { return mul(a, inv(b)); }
  uint32_t pow(uint32_t a, int64_t e) const;
  uint32_t from_int(int64_t v) const;
  // Integer value of a prime-field element (digit 0); requires a in F_p.
  int64_t to_int(uint32_t a) const;
  bool in_prime_field(uint32_t a) const { return a < p_; }

  uint32_t log(uint32_t a) const { return log_[a]; }
  uint32_t exp(uint64_t k) const { return exp_[k % (q_ - 1)]; }
  uint32_t gen() const { return exp_[1]; }

  bool is_square(uint32_t a) const { return a == 0 || (log_[a] % 2) == 0; }
  // Canonical square root: of the two roots, the one with the smaller index.
  uint32_t sqrt(uint32_t a) const;
  // a^(p^k)
  uint32_t frob(uint32_t a, uint32_t k) const;

  std::vector<uint32_t> digits(uint32_t a) const;
  uint32_t from_digits(const std::vector<uint32_t>& d) const;
  // Monic defining polynomial of the generator over F_p, low degree first.
  const std::vector<uint32_t>& modulus() const { return modulus_; }
  std::string str(uint32_t a) const;

  GF(uint32_t p, uint32_t m);

 private:
  uint32_t p_, m_, q_;
  uint32_t half_ = 1;
  std::vector<uint32_t> addt_, negt_;
  std::vector<uint32_t> exp_, log_;
  std::vector<uint32_t> modulus_;
};

using GFPtr = std::shared_ptr<const GF>;

// Field homomorphism small -> big between fields of the same characteristic.
class Embedding {
 public:
  Embedding(GFPtr small, GFPtr big, uint32_t image_of_gen);
  uint32_t operator()(uint32_t a) const { return img_[a]; }
  // Preimage of an element of the image; throws if a is not in the image.
  uint32_t back(uint32_t a) const;
  bool in_image(uint32_t a) const { return pre_[a] >= 0; }
  const GFPtr& small() const { return small_; }
  const GFPtr& big() const { return big_; }
  // Tr_{big/small}(a), returned in small.
  uint32_t trace(uint32_t a) const;

 private:
  GFPtr small_, big_;
  std::vector<uint32_t> img_;
  std::vector<int32_t> pre_;
};

// All fields F_{q^n} over a fixed base F_q, q = p^k, with mutually compatible
// embeddings. Every F_{q^n} is stored as GF(p, k n).
class FieldTower {
 public:
  FieldTower(uint32_t p, uint32_t k);
  uint32_t p() const { return p_; }
  uint32_t k() const { return k_; }
  uint32_t q() const { return base_->size(); }
  const GFPtr& base() const { return base_; }
  // F_{q^n}; throws BoundExceeded when q^n exceeds the table limit.
  GFPtr ext(uint32_t n) const;
  // Embedding F_{q^a} -> F_{q^b}, a | b.
  const Embedding& emb(uint32_t a, uint32_t b) const;
  uint32_t degree_of(const GF& f) const { return f.m() / k_; }

 private:
  uint32_t p_, k_;
  GFPtr base_;
  mutable std::mutex mu_;
  mutable std::vector<GFPtr> ext_;
  mutable std::vector<std::unique_ptr<Embedding>> embs_;
  mutable std::vector<std::pair<uint32_t, uint32_t>> emb_keys_;
};

}  // namespace bq
