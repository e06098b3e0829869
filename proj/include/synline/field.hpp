#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "synline/error.hpp"

namespace synline {

inline bool is_prime(std::uint64_t n) {
  if (n < 2) return false;
  for (std::uint64_t d = 2; d * d <= n; ++d) {
    if (n % d == 0) return false;
  }
  return true;
}

/// Decomposes q = p^h. Returns nullopt when q is not a prime power.
inline std::optional<std::pair<std::uint32_t, std::uint32_t>> prime_power(std::uint64_t q) {
  if (q < 2) return std::nullopt;
  std::uint64_t p = 2;
  while (p * p <= q && q % p != 0) ++p;
  if (q % p != 0) p = q;
  std::uint32_t h = 0;
  while (q % p == 0) {
    q /= p;
    ++h;
  }
  if (q != 1) return std::nullopt;
  return std::pair{static_cast<std::uint32_t>(p), h};
}

namespace detail {

/// Polynomials over GF(p), coefficient i is the coefficient of x^i.
using Poly = std::vector<std::uint32_t>;

inline void trim(Poly& f) {
  while (!f.empty() && f.back() == 0) f.pop_back();
}

inline std::uint32_t inv_mod(std::uint32_t a, std::uint32_t p) {
  // Fermat; p is small.
  std::uint64_t result = 1, base = a % p;
  for (std::uint32_t e = p - 2; e; e >>= 1) {
    if (e & 1) result = result * base % p;
    base = base * base % p;
  }
  return static_cast<std::uint32_t>(result);
}

/// Remainder of f modulo g (g nonzero).
inline Poly poly_mod(Poly f, const Poly& g, std::uint32_t p) {
  trim(f);
  const std::size_t dg = g.size() - 1;
  const std::uint32_t lead_inv = inv_mod(g.back(), p);
  while (f.size() >= g.size()) {
    const std::uint64_t factor = std::uint64_t{f.back()} * lead_inv % p;
    const std::size_t shift = f.size() - 1 - dg;
    for (std::size_t i = 0; i <= dg; ++i) {
      f[shift + i] = static_cast<std::uint32_t>((f[shift + i] + p - factor * g[i] % p) % p);
    }
    trim(f);
  }
  return f;
}

inline Poly decode_poly(std::uint64_t code, std::uint32_t p, std::uint32_t len) {
  Poly f(len);
  for (std::uint32_t i = 0; i < len; ++i) {
    f[i] = static_cast<std::uint32_t>(code % p);
    code /= p;
  }
  return f;
}

/// Monic polynomial of the given degree whose lower coefficients are the
/// base-p digits of code.
inline Poly monic_from_code(std::uint64_t code, std::uint32_t p, std::uint32_t degree) {
  Poly f = decode_poly(code, p, degree);
  f.push_back(1);
  return f;
}

inline bool is_irreducible(const Poly& f, std::uint32_t p) {
  const std::uint32_t degree = static_cast<std::uint32_t>(f.size() - 1);
  for (std::uint32_t d = 1; 2 * d <= degree; ++d) {
    std::uint64_t count = 1;
    for (std::uint32_t i = 0; i < d; ++i) count *= p;
    for (std::uint64_t code = 0; code < count; ++code) {
      if (poly_mod(f, monic_from_code(code, p, d), p).empty()) return false;
    }
  }
  return true;
}

}  // namespace detail

/// GF(p^h). Elements are encoded as integers 0..q-1 whose base-p digits are
/// the coefficients of the representing polynomial (digit i = coefficient of
/// x^i). 0 and 1 are the field's zero and one.
class FiniteField {
 public:
  FiniteField(std::uint32_t p, std::uint32_t h, std::vector<std::uint32_t> modulus)
      : p_(p), h_(h), modulus_(std::move(modulus)) {
    q_ = 1;
    for (std::uint32_t i = 0; i < h_; ++i) q_ *= p_;
    build_tables();
  }

  std::uint32_t characteristic() const { return p_; }
  std::uint32_t degree() const { return h_; }
  std::uint32_t size() const { return q_; }
  /// Coefficients of the defining polynomial, constant term first, monic.
  const std::vector<std::uint32_t>& modulus() const { return modulus_; }

  std::uint32_t add(std::uint32_t a, std::uint32_t b) const {
    if (p_ == 2) return a ^ b;
    std::uint32_t result = 0, scale = 1;
    for (std::uint32_t i = 0; i < h_; ++i) {
      result += ((a % p_ + b % p_) % p_) * scale;
      a /= p_;
      b /= p_;
      scale *= p_;
    }
    return result;
  }

  std::uint32_t neg(std::uint32_t a) const {
    if (p_ == 2) return a;
    std::uint32_t result = 0, scale = 1;
    for (std::uint32_t i = 0; i < h_; ++i) {
      result += ((p_ - a % p_) % p_) * scale;
      a /= p_;
      scale *= p_;
    }
    return result;
  }

  std::uint32_t sub(std::uint32_t a, std::uint32_t b) const { return add(a, neg(b)); }

  std::uint32_t mul(std::uint32_t a, std::uint32_t b) const {
    if (a == 0 || b == 0) return 0;
    std::uint32_t e = log_[a] + log_[b];
    if (e >= q_ - 1) e -= q_ - 1;
    return exp_[e];
  }

  std::uint32_t inv(std::uint32_t a) const {
    if (a == 0) throw Error(ErrorCode::PreconditionFailed, "inverse of zero");
    return exp_[(q_ - 1 - log_[a]) % (q_ - 1)];
  }

  std::uint32_t div(std::uint32_t a, std::uint32_t b) const { return mul(a, inv(b)); }

  /// Frobenius power a^(p^k).
  std::uint32_t frobenius(std::uint32_t a, std::uint32_t k = 1) const {
    if (a == 0) return 0;
    std::uint64_t e = log_[a];
    for (std::uint32_t i = 0; i < k; ++i) e = e * p_ % (q_ - 1);
    return exp_[e];
  }

  bool is_square(std::uint32_t a) const {
    if (a == 0) return true;
    return p_ == 2 || log_[a] % 2 == 0;
  }

  std::uint32_t primitive_element() const { return exp_[1 % (q_ - 1)]; }

 private:
  std::uint32_t multiply_slow(std::uint32_t a, std::uint32_t b) const {
    const auto fa = detail::decode_poly(a, p_, h_);
    const auto fb = detail::decode_poly(b, p_, h_);
    detail::Poly product(2 * h_, 0);
    for (std::uint32_t i = 0; i < h_; ++i) {
      for (std::uint32_t j = 0; j < h_; ++j) {
        product[i + j] =
            static_cast<std::uint32_t>((product[i + j] + std::uint64_t{fa[i]} * fb[j]) % p_);
      }
    }
    auto reduced = detail::poly_mod(product, modulus_, p_);
    std::uint32_t code = 0, scale = 1;
    for (std::size_t i = 0; i < reduced.size(); ++i) {
      code += reduced[i] * scale;
      scale *= p_;
    }
    return code;
  }

  void build_tables() {
    exp_.assign(q_, 0);
    log_.assign(q_, 0);
    if (q_ == 2) {
      exp_[0] = 1;
      return;
    }
    for (std::uint32_t g = 2; g < q_; ++g) {
      std::uint32_t x = 1;
      std::uint32_t k = 0;
      bool primitive = true;
      do {
        exp_[k] = x;
        log_[x] = k;
        x = multiply_slow(x, g);
        ++k;
        if (x == 1 && k < q_ - 1) {
          primitive = false;
          break;
        }
      } while (k < q_ - 1);
      if (primitive) return;
    }
    throw Error(ErrorCode::PreconditionFailed, "no primitive element found");
  }

  std::uint32_t p_;
  std::uint32_t h_;
  std::uint32_t q_;
  std::vector<std::uint32_t> modulus_;
  std::vector<std::uint32_t> exp_;
  std::vector<std::uint32_t> log_;
};

/// Lexicographically least monic irreducible polynomial of degree h over
/// GF(p), ordered by the integer whose base-p digits are the non-leading
/// coefficients (constant term least significant).
inline std::vector<std::uint32_t> least_irreducible(std::uint32_t p, std::uint32_t h) {
  std::uint64_t count = 1;
  for (std::uint32_t i = 0; i < h; ++i) count *= p;
  for (std::uint64_t code = 0; code < count; ++code) {
    auto f = detail::monic_from_code(code, p, h);
    if (detail::is_irreducible(f, p)) return f;
  }
  throw Error(ErrorCode::PreconditionFailed, "no irreducible polynomial found");
}

inline FiniteField build_field(std::uint32_t p, std::uint32_t h, const Limits& limits = {}) {
  if (!is_prime(p)) throw Error(ErrorCode::NonPrime, std::to_string(p) + " is not prime");
  if (h == 0) throw Error(ErrorCode::DegreeOutOfRange, "extension degree must be positive");
  std::uint64_t q = 1;
  for (std::uint32_t i = 0; i < h; ++i) {
    q *= p;
    if (q > limits.max_field) {
      throw Error(ErrorCode::DegreeOutOfRange,
                  std::to_string(p) + "^" + std::to_string(h) + " exceeds field bound " +
                      std::to_string(limits.max_field));
    }
  }
  return FiniteField(p, h, least_irreducible(p, h));
}

inline FiniteField build_field_of_order(std::uint64_t q, const Limits& limits = {}) {
  auto ph = prime_power(q);
  if (!ph) throw Error(ErrorCode::NonPrime, std::to_string(q) + " is not a prime power");
  return build_field(ph->first, ph->second, limits);
}

}  // namespace synline
