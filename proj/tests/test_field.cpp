#include <catch_amalgamated.hpp>

#include <set>
#include <vector>

#include "synline/field.hpp"

using namespace synline;

namespace {

// Schoolbook polynomial product mod (p, modulus), independent of the log tables.
std::uint32_t slow_mul(std::uint32_t a, std::uint32_t b, std::uint32_t p, std::uint32_t h,
                       const std::vector<std::uint32_t>& modulus) {
  std::vector<std::uint64_t> fa(h), fb(h), prod(2 * h, 0);
  for (std::uint32_t i = 0; i < h; ++i, a /= p, b /= p) {
    fa[i] = a % p;
    fb[i] = b % p;
  }
  for (std::uint32_t i = 0; i < h; ++i)
    for (std::uint32_t j = 0; j < h; ++j) prod[i + j] = (prod[i + j] + fa[i] * fb[j]) % p;
  for (std::size_t d = 2 * h - 1; d >= h; --d) {
    const auto c = prod[d];
    if (c == 0) continue;
    for (std::uint32_t k = 0; k <= h; ++k) prod[d - h + k] = (prod[d - h + k] + (p - c) * modulus[k]) % p;
  }
  std::uint32_t code = 0, scale = 1;
  for (std::uint32_t i = 0; i < h; ++i, scale *= p) code += static_cast<std::uint32_t>(prod[i]) * scale;
  return code;
}

}  // namespace

TEST_CASE("primality and prime powers", "[field]") {
  CHECK(is_prime(2));
  CHECK(is_prime(31));
  CHECK_FALSE(is_prime(1));
  CHECK_FALSE(is_prime(9));
  CHECK(prime_power(8) == std::pair<std::uint32_t, std::uint32_t>{2, 3});
  CHECK(prime_power(9) == std::pair<std::uint32_t, std::uint32_t>{3, 2});
  CHECK_FALSE(prime_power(6).has_value());
  CHECK_FALSE(prime_power(1).has_value());
}

TEST_CASE("prime fields have the identity modulus", "[field]") {
  auto f2 = build_field(2, 1);
  CHECK(f2.size() == 2);
  CHECK(f2.modulus() == std::vector<std::uint32_t>{0, 1});
  auto f3 = build_field(3, 1);
  CHECK(f3.size() == 3);
  CHECK(f3.mul(2, 2) == 1);
  CHECK(f3.add(2, 2) == 1);
}

TEST_CASE("GF(4) uses x^2+x+1", "[field]") {
  auto f = build_field(2, 2);
  CHECK(f.size() == 4);
  CHECK(f.modulus() == std::vector<std::uint32_t>{1, 1, 1});
  // Only irreducible quadratic over GF(2): no roots among 0, 1.
  int irreducible = 0;
  for (std::uint32_t c0 = 0; c0 < 2; ++c0)
    for (std::uint32_t c1 = 0; c1 < 2; ++c1) {
      const bool root0 = c0 == 0;
      const bool root1 = (c0 + c1 + 1) % 2 == 0;
      irreducible += !root0 && !root1;
    }
  CHECK(irreducible == 1);
}

TEST_CASE("least irreducible polynomial is lexicographically least", "[field]") {
  CHECK(least_irreducible(3, 2) == std::vector<std::uint32_t>{1, 0, 1});
  CHECK(least_irreducible(2, 3) == std::vector<std::uint32_t>{1, 1, 0, 1});
}

TEST_CASE("field axioms and table multiplication agree with polynomial arithmetic", "[field]") {
  for (std::uint64_t q : {4u, 5u, 7u, 8u, 9u, 16u, 25u, 27u}) {
    auto f = build_field_of_order(q);
    const auto p = f.characteristic(), h = f.degree();
    INFO("q = " << q);
    for (std::uint32_t a = 0; a < q; ++a) {
      CHECK(f.add(a, 0) == a);
      CHECK(f.add(a, f.neg(a)) == 0);
      CHECK(f.mul(a, 1) == a);
      if (a != 0) CHECK(f.mul(a, f.inv(a)) == 1);
      for (std::uint32_t b = 0; b < q; ++b) {
        CHECK(f.mul(a, b) == slow_mul(a, b, p, h, f.modulus()));
        CHECK(f.mul(a, b) == f.mul(b, a));
      }
    }
    std::set<std::uint32_t> powers;
    std::uint32_t x = 1;
    for (std::uint32_t k = 0; k + 1 < q; ++k, x = f.mul(x, f.primitive_element())) powers.insert(x);
    CHECK(powers.size() == q - 1);
  }
}

TEST_CASE("Frobenius is additive and multiplicative", "[field]") {
  auto f = build_field_of_order(9);
  for (std::uint32_t a = 0; a < 9; ++a) {
    CHECK(f.frobenius(a) == f.mul(f.mul(a, a), a));
    for (std::uint32_t b = 0; b < 9; ++b) CHECK(f.frobenius(f.add(a, b)) == f.add(f.frobenius(a), f.frobenius(b)));
  }
}

TEST_CASE("field construction errors", "[field]") {
  CHECK_THROWS_MATCHES(build_field(4, 1), Error,
                       Catch::Matchers::Predicate<Error>([](const Error& e) { return e.code() == ErrorCode::NonPrime; }));
  CHECK_THROWS_AS(build_field_of_order(6), Error);
  CHECK_THROWS_AS(build_field(2, 0), Error);
  CHECK_THROWS_AS(build_field(2, 1).inv(0), Error);
}
