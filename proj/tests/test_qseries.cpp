#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <map>
#include <random>
#include <tuple>

#include "siegel/qseries.hpp"

using namespace siegel;

namespace {

QIndex random_index(std::mt19937_64& rng, long max_trace) {
  std::uniform_int_distribution<long> t(0, max_trace);
  for (;;) {
    const long n = t(rng), m = t(rng);
    if (n + m > max_trace) continue;
    const long rmax = static_cast<long>(std::sqrt(4.0 * n * m));
    std::uniform_int_distribution<long> r(-rmax, rmax);
    QIndex q{n, r(rng), m};
    if (q.is_psd()) return q;
  }
}

FourierSeries random_series(std::mt19937_64& rng, size_t terms, long prec, unsigned order = 8) {
  FourierSeries f(prec, order);
  std::uniform_int_distribution<long> c(-9, 9);
  std::uniform_int_distribution<long> k(0, order - 1);
  while (f.size() < terms) f.add_term(random_index(rng, prec), CycElt::root(order, k(rng)) * Integer(c(rng)));
  return f;
}

using Key = std::tuple<long, long, long>;

std::map<Key, CycElt> to_map(const FourierSeries& f) {
  std::map<Key, CycElt> m;
  for (const auto& [k, v] : f.terms()) m.emplace(Key{k.N, k.R, k.M}, v);
  return m;
}

}  // namespace

TEST_CASE("index basics") {
  CHECK(QIndex{1, 2, 1}.is_psd());
  CHECK_FALSE(QIndex{1, 3, 1}.is_psd());
  CHECK_FALSE(QIndex{-1, 0, 1}.is_psd());
  QIndexLess less;
  CHECK(less({1, 5, 0}, {1, -5, 1}));  // N, then M, then R
  CHECK(less({1, -5, 7}, {1, 5, 7}));
  CHECK(less({0, 0, 9}, {1, 0, 0}));
}

TEST_CASE("series_add") {
  std::mt19937_64 rng(1);
  const FourierSeries f = random_series(rng, 50, 20);
  CHECK(f + FourierSeries(20) == f);
  CHECK((f + (-f)).empty());

  const FourierSeries g = random_series(rng, 50, 16);
  const FourierSeries s = f + g;
  CHECK(s.prec() == 16);
  // naive merge
  std::map<Key, CycElt> want;
  for (const auto* x : {&f, &g})
    for (const auto& [k, v] : x->terms()) {
      if (k.trace() > 16) continue;
      auto [it, ins] = want.try_emplace(Key{k.N, k.R, k.M}, v);
      if (!ins) it->second += v;
    }
  std::erase_if(want, [](const auto& kv) { return kv.second.is_zero(); });
  CHECK(to_map(s) == want);
  s.validate();

  CHECK_THROWS_AS(f + FourierSeries(20, 24), SeriesError);
  CHECK_THROWS_AS(f + FourierSeries(20, 8, 12), SeriesError);
}

TEST_CASE("series_mul") {
  FourierSeries a(10), b(10);
  a.add_term({1, 0, 0}, CycElt::one(8));
  b.add_term({0, 0, 1}, CycElt::one(8));
  const FourierSeries ab = a * b;
  REQUIRE(ab.size() == 1);
  CHECK(ab.coefficient({1, 0, 1}) == CycElt::one(8));
  CHECK((a * FourierSeries(10)).empty());

  std::mt19937_64 rng(2);
  for (int round = 0; round < 5; ++round) {
    const FourierSeries f = random_series(rng, 30, 20), g = random_series(rng, 30, 20);
    std::map<Key, CycElt> want;
    for (const auto& [x, u] : f.terms())
      for (const auto& [y, v] : g.terms()) {
        const QIndex z = x + y;
        if (z.trace() > 20) continue;
        auto [it, ins] = want.try_emplace(Key{z.N, z.R, z.M}, u * v);
        if (!ins) it->second += u * v;
      }
    std::erase_if(want, [](const auto& kv) { return kv.second.is_zero(); });
    const FourierSeries fg = f * g;
    CHECK(to_map(fg) == want);
    fg.validate();
  }
}

TEST_CASE("multiplication laws and truncation coherence") {
  std::mt19937_64 rng(3);
  for (int round = 0; round < 5; ++round) {
    const FourierSeries f = random_series(rng, 25, 16), g = random_series(rng, 25, 16), h = random_series(rng, 25, 16);
    CHECK(f * g == g * f);
    CHECK((f * g) * h == f * (g * h));
    CHECK((f * g).truncated(9) == f.truncated(9) * g.truncated(9));
  }
}

TEST_CASE("coefficient lookup") {
  FourierSeries f(8);
  f.add_term({2, 1, 3}, CycElt::root(8, 2));
  CHECK(f.coefficient({2, 1, 3}) == CycElt::root(8, 2));
  CHECK(f.coefficient({1, 0, 1}).is_zero());
  CHECK_THROWS_AS(f.coefficient({5, 0, 4}), SeriesError);
  CHECK_THROWS_AS(f.add_term({1, 5, 1}, CycElt::one(8)), SeriesError);
  f.add_term({9, 0, 0}, CycElt::one(8));  // beyond precision: dropped
  CHECK(f.size() == 1);
}

TEST_CASE("rescale") {
  std::mt19937_64 rng(4);
  const FourierSeries f = random_series(rng, 40, 12);
  CHECK(f.rescale(3, Rescale::refine).rescale(3, Rescale::coarsen) == f);

  FourierSeries g(10);
  g.add_term({3, 0, 0}, CycElt::one(8));
  CHECK_THROWS_AS(g.rescale(2, Rescale::coarsen), SeriesError);

  FourierSeries h(10);
  h.add_term({1, 0, 1}, CycElt::one(8));
  const FourierSeries r = h.rescale(3, Rescale::refine);
  CHECK(r.scale() == 12);
  CHECK(r.size() == 1);
  CHECK(r.terms().begin()->first == QIndex{3, 0, 3});
}

TEST_CASE("json round trip is stable") {
  std::mt19937_64 rng(5);
  const FourierSeries f = random_series(rng, 30, 14);
  const std::string s1 = f.to_json().dump();
  const FourierSeries g = FourierSeries::from_json(nlohmann::json::parse(s1));
  CHECK(g == f);
  CHECK(g.to_json().dump() == s1);
  // keys in the documented order, terms in (N, M, R) order
  const auto j = f.to_json();
  auto it = j.begin();
  CHECK(it.key() == "scale");
  QIndexLess less;
  QIndex prev{-1, 0, 0};
  for (const auto& t : j["terms"]) {
    const QIndex q{t["N"].get<long>(), t["R"].get<long>(), t["M"].get<long>()};
    CHECK(less(prev, q));
    prev = q;
  }
  CHECK_THROWS_AS(FourierSeries::from_json(nlohmann::json::parse("{\"prec\":3}")), SeriesError);
}

TEST_CASE("lifted and projected") {
  std::mt19937_64 rng(6);
  const FourierSeries f = random_series(rng, 20, 10);
  CHECK(f.lifted(24).projected(8) == f);
  FourierSeries g(4, 24);
  g.add_term({1, 0, 1}, CycElt::root(24, 1));
  CHECK_THROWS_AS(g.projected(8), SeriesError);
}
