#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "siegel/cyclotomic.hpp"

using namespace siegel;

namespace {

// Phi_n = prod_{d | n} (x^d - 1)^mu(n/d), computed by multiplying and
// dividing binomials; independent of the library's recursive division.
int moebius(unsigned n) {
  int m = 1;
  for (unsigned p = 2; p * p <= n; ++p) {
    if (n % p) continue;
    n /= p;
    if (n % p == 0) return 0;
    m = -m;
  }
  return n > 1 ? -m : m;
}

std::vector<Integer> phi_by_moebius(unsigned n) {
  std::vector<Integer> num{1}, den{1};
  for (unsigned d = 1; d <= n; ++d) {
    if (n % d) continue;
    const int mu = moebius(n / d);
    if (mu == 0) continue;
    auto& target = mu > 0 ? num : den;
    std::vector<Integer> next(target.size() + d);
    for (size_t i = 0; i < target.size(); ++i) {
      next[i + d] += target[i];
      next[i] -= target[i];
    }
    target = next;
  }
  // exact long division num / den (den monic up to sign)
  const size_t dn = den.size() - 1;
  std::vector<Integer> q(num.size() - dn);
  for (size_t i = num.size() - 1;; --i) {
    const Integer c = num[i] / den[dn];
    q[i - dn] = c;
    for (size_t j = 0; j <= dn; ++j) num[i - dn + j] -= c * den[j];
    if (i == dn) break;
  }
  return q;
}

CycElt random_elt(std::mt19937_64& rng, unsigned order, long mag) {
  std::uniform_int_distribution<long> dist(-mag, mag);
  std::vector<Integer> c(euler_phi(order));
  for (auto& x : c) x = dist(rng);
  return CycElt::from_poly(order, c);
}

}  // namespace

TEST_CASE("cyclotomic polynomials") {
  CHECK(cyclotomic_polynomial(1) == std::vector<Integer>{-1, 1});
  CHECK(cyclotomic_polynomial(8) == std::vector<Integer>{1, 0, 0, 0, 1});
  const auto p24 = cyclotomic_polynomial(24);
  CHECK(p24.size() == 9);
  CHECK(p24 == std::vector<Integer>{1, 0, 0, 0, -1, 0, 0, 0, 1});
  for (unsigned n : {1u, 2u, 3u, 8u, 12u, 24u, 40u, 56u, 88u, 104u, 136u, 152u})
    CHECK(cyclotomic_polynomial(n) == phi_by_moebius(n));
}

TEST_CASE("roots of unity") {
  CHECK(CycElt::root(8, 0) == CycElt::one(8));
  CHECK(CycElt::root(8, 4) == CycElt::integer(8, -1));
  CHECK(CycElt::root(8, 5) == -CycElt::root(8, 1));
  CHECK(CycElt::root(8, -3) == CycElt::root(8, 5));
  for (unsigned n : {8u, 24u, 40u, 56u}) {
    const CycElt z = CycElt::root(n, 1);
    CHECK(z.pow(n) == CycElt::one(n));
    CHECK(z.pow(n / 2) == CycElt::integer(n, -1));
  }
}

TEST_CASE("arithmetic examples") {
  const CycElt z = CycElt::root(8, 1), one = CycElt::one(8);
  CHECK(z * CycElt::root(8, 3) == CycElt::integer(8, -1));
  CHECK((one + z) + (one - z) == CycElt::integer(8, 2));
  CHECK((one + z) * (one - z) == one - CycElt::root(8, 2));
  CHECK_THROWS_AS(z + CycElt::one(24), CyclotomicError);
  CHECK_THROWS_AS(z * CycElt::one(24), CyclotomicError);
}

TEST_CASE("ring axioms on random triples") {
  std::mt19937_64 rng(8);
  for (unsigned order : {8u, 24u}) {
    for (int i = 0; i < 1000; ++i) {
      const CycElt a = random_elt(rng, order, 50), b = random_elt(rng, order, 50), c = random_elt(rng, order, 50);
      REQUIRE((a * b) * c == a * (b * c));
      REQUIRE(a * (b + c) == a * b + a * c);
      REQUIRE(a * b == b * a);
      REQUIRE(a + b == b + a);
    }
  }
}

TEST_CASE("embedding") {
  CHECK(std::abs(CycElt::one(8).embed(3) - 1.0) < 1e-15);
  const auto z = CycElt::root(8, 1).embed(1);
  CHECK(std::abs(std::abs(z) - 1.0) < 1e-12);
  CHECK(std::abs(z - std::polar(1.0, M_PI / 4)) < 1e-12);
  const CycElt s = CycElt::one(8) + CycElt::root(8, 1) + CycElt::root(8, -1);
  CHECK(std::abs(s.embed(1) - (1.0 + std::sqrt(2.0))) < 1e-12);
  CHECK(std::abs(s.embed(1).real() - 2.41421356) < 1e-8);
  CHECK_THROWS_AS(s.embed(2), CyclotomicError);

  std::mt19937_64 rng(3);
  for (unsigned order : {8u, 24u}) {
    for (int i = 0; i < 300; ++i) {
      const CycElt a = random_elt(rng, order, 1000000), b = random_elt(rng, order, 1000000);
      for (long k : {1L, 5L}) {
        const auto lhs = (a * b).embed(k), rhs = a.embed(k) * b.embed(k);
        REQUIRE(std::abs(lhs - rhs) <= 1e-9 * std::max(1.0, std::abs(rhs)));
      }
    }
  }
}

TEST_CASE("lift and project") {
  CHECK(CycElt::one(8).lift(24) == CycElt::one(24));
  CHECK(CycElt::root(8, 1).lift(24) == CycElt::root(24, 3));
  CHECK(CycElt::root(24, 3).project(8) == CycElt::root(8, 1));
  CHECK_THROWS_AS(CycElt::root(24, 1).project(8), CyclotomicError);
  CHECK_THROWS_AS(CycElt::root(8, 1).lift(12), CyclotomicError);
  std::mt19937_64 rng(11);
  for (int i = 0; i < 1000; ++i) {
    const CycElt a = random_elt(rng, 8, 1000);
    REQUIRE(a.lift(24).project(8) == a);
  }
  // the 8p phase sums of T(p) land here
  const CycElt a = random_elt(rng, 8, 30);
  CHECK(a.lift(56).project(8) == a);
}

TEST_CASE("norm and division") {
  const CycElt z = CycElt::root(8, 1);
  CHECK(CycElt::one(8).norm() == 1);
  CHECK((CycElt::one(8) - z).norm() == 2);
  CHECK(CycElt::integer(8, 3).norm() == 81);
  std::mt19937_64 rng(5);
  for (int i = 0; i < 100; ++i) {
    const CycElt a = random_elt(rng, 8, 20), b = random_elt(rng, 8, 20);
    if (b.is_zero()) continue;
    REQUIRE((a * b).divisible_by(b));
    REQUIRE((a * b).divide_exact(b) == a);
  }
  CHECK_FALSE(CycElt::one(8).divisible_by(CycElt::integer(8, 3)));
  CHECK_THROWS_AS(CycElt::one(8).divide_exact(CycElt::integer(8, 3)), CyclotomicError);
  CHECK_THROWS_AS(CycElt::integer(8, 3).divexact(2), CyclotomicError);
}

TEST_CASE("serialization") {
  const CycElt a = CycElt::from_poly(8, {Integer("123456789012345678901234567890"), -2, 0, 7});
  const auto j = a.to_json();
  CHECK(j["order"] == 8);
  CHECK(j["coeffs"][0] == "123456789012345678901234567890");
  CHECK(CycElt::from_json(nlohmann::json::parse(j.dump())) == a);
  CHECK_THROWS_AS(CycElt::from_coeffs_json(8, nlohmann::json::parse("[\"1\",\"2\"]")), CyclotomicError);
}

TEST_CASE("root accumulator") {
  RootAccumulator acc(24);
  acc.add(3, 2);
  acc.add(27, -1);
  acc.add_scaled(CycElt::root(8, 1), 0, 5);
  CHECK(acc.value() == CycElt::root(24, 3) * Integer(6));
}
