#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>
#include <sstream>

#include "siegel/theta.hpp"

using namespace siegel;

namespace {

std::vector<Characteristic> all_characteristics(bool odd) {
  std::vector<Characteristic> out;
  for (int a = 0; a < 2; ++a)
    for (int b = 0; b < 2; ++b)
      for (int c = 0; c < 2; ++c)
        for (int d = 0; d < 2; ++d) {
          Characteristic m{a, b, c, d};
          if (m.is_odd() == odd) out.push_back(m);
        }
  return out;
}

// Direct lattice sum for one coefficient, as a Gaussian integer.
std::pair<long, long> theta_oracle(const ThetaFactor& f, const QIndex& q) {
  long re = 0, im = 0;
  for (long u = -20; u <= 20; ++u)
    for (long v = -20; v <= 20; ++v) {
      if (((u - f.m.a) % 2) != 0 || ((v - f.m.b) % 2) != 0) continue;
      const long d = f.dilation;
      if (d * u * u != q.N || 2 * d * u * v != q.R || d * v * v != q.M) continue;
      const long k = ((u * f.m.c + v * f.m.d) % 4 + 4) % 4;
      const long units[4][2] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};
      re += units[k][0];
      im += units[k][1];
    }
  return {re, im};
}

CycElt gaussian(long re, long im) { return CycElt::from_poly(8, {re, 0, im}); }

}  // namespace

TEST_CASE("parity") {
  CHECK_FALSE(is_odd_characteristic({0, 0, 0, 0}));
  CHECK(is_odd_characteristic({1, 0, 1, 0}));
  CHECK_FALSE(is_odd_characteristic({1, 1, 1, 1}));
  CHECK(all_characteristics(true).size() == 6);
  CHECK_THROWS_AS(is_odd_characteristic({2, 0, 0, 0}), ThetaError);
  CHECK_THROWS_AS(theta_constant({{0, 0, 0, 0}, 3}, 8), ThetaError);
}

TEST_CASE("theta examples") {
  const FourierSeries t = theta_constant({{0, 0, 0, 0}, 1}, 8);
  CHECK(t.coefficient({0, 0, 0}) == CycElt::one(8));
  CHECK(t.coefficient({4, 0, 0}) == CycElt::integer(8, 2));
  CHECK(t.coefficient({4, 8, 4}) == CycElt::integer(8, 2));
  CHECK(theta_constant({{1, 0, 1, 0}, 1}, 40).empty());
}

TEST_CASE("odd characteristics vanish") {
  for (const auto& m : all_characteristics(true))
    for (int d : {1, 2}) CHECK(theta_constant({m, d}, 64).empty());
}

TEST_CASE("agreement with the direct lattice sum") {
  std::mt19937_64 rng(64);
  const auto even = all_characteristics(false);
  std::uniform_int_distribution<size_t> pick(0, even.size() - 1);
  std::uniform_int_distribution<int> dil(1, 2);
  for (int round = 0; round < 10; ++round) {
    const ThetaFactor f{even[pick(rng)], dil(rng)};
    const FourierSeries t = theta_constant(f, 64);
    std::vector<QIndex> support;
    for (const auto& [k, v] : t.terms()) support.push_back(k);
    for (int i = 0; i < 20; ++i) {
      QIndex q;
      if (i % 2 == 0) {
        q = support[std::uniform_int_distribution<size_t>(0, support.size() - 1)(rng)];
      } else {
        std::uniform_int_distribution<long> nm(0, 32);
        q = {nm(rng), 0, nm(rng)};
        const long rmax = static_cast<long>(std::sqrt(4.0 * q.N * q.M));
        q.R = std::uniform_int_distribution<long>(-rmax, rmax)(rng);
      }
      const auto [re, im] = theta_oracle(f, q);
      REQUIRE(t.coefficient(q) == gaussian(re, im));
    }
  }
}

TEST_CASE("coefficients lie in Z[i]") {
  const FourierSeries g4 = build_g4(24);
  REQUIRE_FALSE(g4.empty());
  for (const auto& [k, v] : g4.terms()) {
    CHECK(v.coeffs()[1] == 0);
    CHECK(v.coeffs()[3] == 0);
  }
  for (const auto& m : all_characteristics(false)) {
    const FourierSeries t = theta_constant({m, 1}, 40);
    for (const auto& [k, v] : t.terms()) {
      CHECK(v.coeffs()[1] == 0);
      CHECK(v.coeffs()[3] == 0);
    }
  }
}

TEST_CASE("dilation identity") {
  for (const auto& m : all_characteristics(false)) {
    const FourierSeries t2 = theta_constant({m, 2}, 40);
    const FourierSeries t1 = theta_constant({m, 1}, 20).rescale(2, Rescale::refine);
    REQUIRE(t1.prec() == 40);
    // same index set and coefficients; the scale label differs by design
    REQUIRE(t1.size() == t2.size());
    auto a = t1.terms().begin();
    for (const auto& [k, v] : t2.terms()) {
      CHECK(a->first == k);
      CHECK(a->second == v);
      ++a;
    }
  }
}

TEST_CASE("products") {
  const ThetaFactor f{{0, 1, 1, 0}, 1};
  CHECK(product_form({f}, 20) == theta_constant(f, 20));
  CHECK(product_form({f, {{1, 1, 1, 1}, 1}, {{0, 1, 0, 1}, 2}}, 20).empty());
  CHECK_THROWS_AS(product_form({}, 10), ThetaError);

  CHECK(build_g4(0).empty());
  const FourierSeries g4 = build_g4(24);
  CHECK(g4.min_trace() == 4);
  CHECK(g4.coefficient({2, 0, 2}) == CycElt::integer(8, 4));
  CHECK(g4.coefficient({2, 0, 6}) == CycElt::integer(8, -8));
  CHECK(g4.coefficient({6, 0, 6}) == CycElt::integer(8, 32));
  CHECK(g4.coefficient({6, -8, 6}) == CycElt::integer(8, -8));

  const FourierSeries g1 = build_g1(24);
  CHECK(g1.min_trace() == 2);
  CHECK(g1.coefficient({1, 0, 1}) == CycElt::integer(8, 4));
  CHECK(g1.coefficient({1, 0, 5}) == CycElt::integer(8, 8));
  CHECK(g1.coefficient({1, 0, 9}) == CycElt::integer(8, -4));
  CHECK(build_g1(12) == g1.truncated(12));
}

TEST_CASE("printed factor lists") {
  CHECK(format_factor_list(g1_factors()) == "2:0,0,0,0\n1:1,0,0,0\n1:0,1,0,0\n1:0,0,1,0\n1:0,0,1,0\n1:0,0,0,1\n");
  CHECK(format_factor_list(g4_factors()) == "2:0,0,0,0\n2:1,0,0,0\n2:0,1,0,0\n1:0,0,1,0\n1:0,0,0,1\n1:0,0,1,1\n");
}

TEST_CASE("factor file parsing") {
  std::istringstream ok("# g4\n2:0,0,0,0\n 2:1,0,0,0  # comment\n\n2:0,1,0,0\n1:0,0,1,0\n1:0,0,0,1\n1:0,0,1,1\n");
  CHECK(parse_factor_list(ok) == g4_factors());
  for (const char* bad : {"2:0,0,0\n", "x:0,0,0,0\n", "3:0,0,0,0\n", "1:0,0,0,2\n", "1;0,0,0,0\n", "# only\n", "1:0,0,0,0,1\n"}) {
    std::istringstream in(bad);
    CHECK_THROWS_AS(parse_factor_list(in), ThetaError);
  }
  CHECK_THROWS_AS(read_factor_file("/nonexistent/factors.txt"), ThetaError);
}

TEST_CASE("numeric theta matches the series") {
  // evaluate g4 at a point with large imaginary part from both sides
  using C = std::complex<double>;
  const CMat2 z{{{C(0.1, 1.3), C(0.05, 0.2)}, {C(0.05, 0.2), C(-0.2, 1.1)}}};
  const FourierSeries g4 = build_g4(80);
  C sum = 0;
  for (const auto& [k, v] : g4.terms()) {
    const C e = std::exp(C(0, 2 * M_PI) * (double(k.N) * z[0][0] + double(k.R) * z[0][1] + double(k.M) * z[1][1]) / 4.0);
    sum += v.embed(1) * e;
  }
  const C direct = product_numeric(g4_factors(), z);
  CHECK(std::abs(sum - direct) < 1e-10 * std::max(1.0, std::abs(direct)));
}
