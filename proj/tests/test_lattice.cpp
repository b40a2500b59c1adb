#include <doctest.h>

#include <algorithm>
#include <random>
#include <set>

#include "fpp/errors.hpp"
#include "fpp/lattice.hpp"

using namespace fpp;

namespace {

int l1_distance(const LatticePoint& p, const LatticePoint& q) {
  int s = 0;
  for (int k = 0; k < p.dim(); ++k) s += std::abs(p[k] - q[k]);
  return s;
}

LatticePoint random_point(std::mt19937_64& rng, int dim, int radius) {
  std::uniform_int_distribution<int> c(-radius, radius);
  std::vector<Coord> v(static_cast<std::size_t>(dim));
  for (auto& x : v) x = c(rng);
  return LatticePoint(v);
}

}  // namespace

TEST_CASE("points need at least two coordinates") {
  CHECK_THROWS_AS(LatticePoint({1}), DomainError);
  CHECK_THROWS_AS(LatticePoint::origin(1), DomainError);
  CHECK(LatticePoint::origin(4).dim() == 4);
  CHECK(LatticePoint::unit(3, 1) == LatticePoint({0, 1, 0}));
}

TEST_CASE("neighbors in d=2 come in axis order, + before -") {
  const auto n = neighbors(LatticePoint({0, 0}));
  REQUIRE(n.size() == 4);
  CHECK(n[0] == LatticePoint({1, 0}));
  CHECK(n[1] == LatticePoint({-1, 0}));
  CHECK(n[2] == LatticePoint({0, 1}));
  CHECK(n[3] == LatticePoint({0, -1}));
  for (const auto& q : n) CHECK(std::abs(hyperplane_index(q).n) <= 1);
}

TEST_CASE("neighbors in d=3 are distinct and at distance one") {
  const LatticePoint p({5, -2, 1});
  const auto n = neighbors(p);
  CHECK(n.size() == 6);
  CHECK(std::set<LatticePoint>(n.begin(), n.end()).size() == 6);
  for (const auto& q : n) CHECK(l1_distance(p, q) == 1);
}

TEST_CASE("canonical edges") {
  const LatticePoint o({0, 0});
  CHECK(canonical_edge(o, LatticePoint({1, 0})) == EdgeId{o, 0});
  CHECK(canonical_edge(LatticePoint({1, 0}), o) == EdgeId{o, 0});
  CHECK(canonical_edge(LatticePoint({0, -1}), o) == EdgeId{LatticePoint({0, -1}), 1});
  CHECK_THROWS_AS(canonical_edge(o, LatticePoint({1, 1})), NotAdjacent);
  CHECK_THROWS_AS(canonical_edge(o, o), NotAdjacent);
  CHECK_THROWS_AS(canonical_edge(o, LatticePoint({0, 0, 1})), NotAdjacent);
}

TEST_CASE("every edge has exactly one id") {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 200; ++trial) {
    const auto p = random_point(rng, 4, 5);
    for (const auto& q : neighbors(p)) CHECK(canonical_edge(p, q) == canonical_edge(q, p));
  }
}

TEST_CASE("hyperplane index is the first coordinate") {
  CHECK(hyperplane_index(LatticePoint({0, 0, 0})).n == 0);
  CHECK(hyperplane_index(LatticePoint({3, -1, 4})).n == 3);
  const LatticePoint p({-7, 2});
  CHECK(hyperplane_index(p.shifted(0, 1)).n == hyperplane_index(p).n + 1);
}

TEST_CASE("incremental keys agree with keys computed from scratch") {
  std::mt19937_64 rng(3);
  std::uniform_int_distribution<int> axis_of(0, 5);
  for (int trial = 0; trial < 500; ++trial) {
    const auto p = random_point(rng, 6, 3);
    const int axis = axis_of(rng);
    const Coord delta = (rng() & 1) ? 1 : -1;
    CHECK(step_key(point_key(p), axis, p[axis], delta) == point_key(p.shifted(axis, delta)));
  }
}

TEST_CASE("keys separate dimensions and coordinate order") {
  CHECK(point_key(LatticePoint({0, 0})) != point_key(LatticePoint({0, 0, 0})));
  CHECK(point_key(LatticePoint({1, 2})) != point_key(LatticePoint({2, 1})));
  CHECK(edge_key(EdgeId{LatticePoint({0, 0}), 0}) != edge_key(EdgeId{LatticePoint({0, 0}), 1}));
  CHECK(point_key(LatticePoint({1, -1, 0})) == point_key(LatticePoint({1, -1, 0})));
}

TEST_CASE("point index finds what was inserted and nothing else") {
  PointPool pool(3);
  PointIndex index;
  std::mt19937_64 rng(5);
  std::vector<LatticePoint> inserted;
  std::set<LatticePoint> seen;
  while (inserted.size() < 2000) {
    const auto p = random_point(rng, 3, 20);
    if (!seen.insert(p).second) continue;
    const auto id = pool.push(p.coords(), point_key(p));
    index.insert(point_key(p), id);
    inserted.push_back(p);
  }
  CHECK(index.size() == 2000);
  for (std::size_t i = 0; i < inserted.size(); ++i) {
    const auto& p = inserted[i];
    const auto hit = index.find(point_key(p), [&](std::uint32_t v) { return pool.equals(v, p.coords()); });
    CHECK(hit == i);
    CHECK(pool.point(hit) == p);
  }
  const LatticePoint absent({100, 100, 100});
  CHECK(index.find(point_key(absent), [&](std::uint32_t v) { return pool.equals(v, absent.coords()); }) ==
        PointIndex::npos);
  index.clear();
  CHECK(index.size() == 0);
}

TEST_CASE("pool shifted pushes") {
  PointPool pool(2);
  const LatticePoint p({3, 4});
  const auto a = pool.push(p.coords(), point_key(p));
  const auto b = pool.push_shifted(a, 1, -1, step_key(point_key(p), 1, 4, -1));
  CHECK(pool.point(b) == LatticePoint({3, 3}));
  CHECK(pool.key(b) == point_key(LatticePoint({3, 3})));
  CHECK(pool.equals_shifted(b, a, 1, -1));
  CHECK_FALSE(pool.equals_shifted(b, a, 1, 1));
}
