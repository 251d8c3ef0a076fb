#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <map>
#include <random>

#include "fatmeasure/errors.hpp"
#include "fatmeasure/packing.hpp"
#include "test_support.hpp"

using namespace fatmeasure;
using fatmeasure::testing::q;

namespace {

// Sides mixing powers of two with thirds, fifths and sevenths, scaled up
// until the volume hypothesis holds.
CubeFamily random_family(std::mt19937_64& rng, std::size_t dim, std::size_t count) {
  static const long dens[] = {2, 4, 8, 16, 3, 5, 7, 12};
  CubeFamily f{dim, {}};
  for (std::size_t j = 0; j < count; ++j) {
    long den = dens[rng() % 8];
    f.sides.push_back(q(1 + static_cast<long>(rng() % static_cast<unsigned long>(den)), den));
  }
  while (f.total_volume() < 1) {
    for (auto& a : f.sides) a *= q(3, 2);
  }
  return f;
}

// Grid-sample oracle: midpoints of a fine grid inside the target must each
// land in some placed cube (closed cubes, compared directly).
bool sampled_cover(const CubeFamily& f, const PackingLayout& layout, long per_axis) {
  const std::size_t d = f.dim;
  std::vector<long> idx(d, 0);
  const Rational side = layout.target.side(0).hi.value();
  while (true) {
    Point p(d);
    for (std::size_t i = 0; i < d; ++i) p[i] = side * q(2 * idx[i] + 1, 2 * per_axis);
    bool inside = false;
    for (const auto& pl : layout.placements) {
      bool here = true;
      for (std::size_t i = 0; i < d && here; ++i) {
        here = pl.translation[i] <= p[i] && p[i] <= pl.translation[i] + f.sides[pl.j];
      }
      if (here) {
        inside = true;
        break;
      }
    }
    if (!inside) return false;
    std::size_t i = 0;
    while (i < d && ++idx[i] == per_axis) idx[i++] = 0;
    if (i == d) return true;
  }
}

}  // namespace

TEST_CASE("round_to_dyadic examples") {
  auto r = round_to_dyadic({q(1, 2), q(3, 8), q(1), q(5, 3)}, 1);
  CHECK(r.rounded[0].k == -1);
  CHECK(r.rounded[0].value == q(1, 2));
  CHECK(r.rounded[1].k == -2);
  CHECK(r.rounded[1].value == q(1, 4));
  CHECK(r.rounded[2].k == 0);
  CHECK(r.rounded[3].k == 0);
  CHECK(r.volume_bound);
  CHECK_THROWS_AS(round_to_dyadic({q(0)}, 2), PreconditionError);
}

TEST_CASE("merge examples") {
  auto one = merge_dyadic({-2, -2}, 1);
  REQUIRE(one.final_family.size() == 1);
  CHECK(one.final_family[0].k == -1);
  CHECK(one.tree.size() == 1);

  auto four = merge_dyadic({-1, -1, -1, -1}, 2);
  REQUIRE(four.final_family.size() == 1);
  CHECK(four.final_family[0].k == 0);
  REQUIRE(four.tree.size() == 1);
  CHECK(four.tree[0].parts == std::vector<std::size_t>{0, 1, 2, 3});
  CHECK(four.tree[0].offsets[1] == Point{q(0), q(1, 2)});
  CHECK(four.tree[0].offsets[2] == Point{q(1, 2), q(0)});

  auto fixed = merge_dyadic({-1, -2, -3, -1, -1}, 2);
  CHECK(fixed.tree.empty());
  CHECK(fixed.final_family.size() == 5);
}

TEST_CASE("pack_cover examples") {
  CubeFamily f{1, {q(1, 2), q(1, 4), q(1, 4)}};
  PackingLayout l = pack_cover(f);
  CHECK(l.verified);
  REQUIRE(l.placements.size() == 1);
  CHECK(l.placements[0].j == 0);
  CHECK(l.placements[0].translation == Point{q(0)});
  CHECK(l.merge_tree.front().parts == std::vector<std::size_t>{1, 2});
  CHECK(verify_layout(f, l));

  CubeFamily unit{1, {q(1)}};
  PackingLayout u = pack_cover(unit);
  CHECK(u.placements.size() == 1);
  CHECK(u.merge_tree.empty());

  CHECK_THROWS_AS(pack_cover(CubeFamily{1, {q(1, 4), q(1, 4)}}), PreconditionError);
  CHECK_THROWS_AS(pack_cover(CubeFamily{1, {q(1)}}, q(4)), PreconditionError);

  // rescaled: four cubes of 1/8 cover [0, 1/16]^2 with alpha = 1/4
  CubeFamily small{2, {q(1, 8), q(1, 8), q(1, 8), q(1, 8)}};
  PackingLayout s = pack_cover(small, q(1, 2), q(1, 4));
  CHECK(s.target == Box::cube(Point{q(0), q(0)}, q(1, 8)));
  CHECK(verify_layout(small, s));

  // tampered layouts are rejected
  PackingLayout bad = l;
  bad.placements[0].translation = Point{q(1, 8)};
  CHECK_FALSE(verify_layout(f, bad));
  PackingLayout twice = u;
  twice.placements.push_back(twice.placements[0]);
  CHECK_FALSE(verify_layout(unit, twice));
}

TEST_CASE("random families") {
  std::mt19937_64 rng(2024);
  for (int trial = 0; trial < 150; ++trial) {
    std::size_t dim = 1 + trial % 3;
    CubeFamily f = random_family(rng, dim, 1 + rng() % 64);
    Rational alpha = trial % 4 == 0 ? q(1, 3) : Rational(1);
    if (alpha != 1) {
      for (auto& a : f.sides) a *= alpha;
    }
    RoundingReport r = round_to_dyadic(f.sides, dim);
    CHECK(r.volume_bound);

    std::vector<long> levels;
    for (const auto& a : f.sides) levels.push_back(floor_log2(a / alpha));
    MergeResult m = merge_dyadic(levels, dim);
    Rational before(0);
    for (long k : levels) before += pow2(k * static_cast<long>(dim));
    CHECK(m.volume == before);
    std::map<long, std::size_t> per_level;
    for (const auto& c : m.final_family) ++per_level[c.k];
    for (const auto& [k, count] : per_level) CHECK(count <= (std::size_t{1} << dim) - 1);

    PackingLayout l = pack_cover(f, q(1, 2), alpha);
    CHECK(l.verified);
    CHECK(verify_layout(f, l));
    CHECK(sampled_cover(f, l, dim == 3 ? 6 : 16));
  }
}
