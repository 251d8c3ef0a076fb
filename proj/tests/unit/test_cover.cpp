#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "fatmeasure/cover.hpp"
#include "fatmeasure/errors.hpp"
#include "test_support.hpp"

using namespace fatmeasure;
using fatmeasure::testing::q;

namespace {

Box iv(Rational a, Rational b) { return Box(Point{a}, Point{b}); }
RingExpr cantor1() { return RingExpr::gen(Point{q(0)}, Box::unit(1)); }
RingExpr shifted1(Rational x) { return RingExpr::gen(Point{x}, Box::unit(1)); }

bool only_gen_union(const RingExpr& e) {
  switch (e.kind()) {
    case RingExpr::Kind::Gen:
      return true;
    case RingExpr::Kind::Union:
      return only_gen_union(e.left()) && only_gen_union(e.right());
    default:
      return false;
  }
}

}  // namespace

TEST_CASE("positive hull") {
  RingExpr a = cantor1(), b = shifted1(q(1, 4)), c = shifted1(q(1, 2));
  CHECK(positive_hull(RingExpr::difference(a, b)) == a);
  RingExpr u = RingExpr::unite(a, b);
  CHECK(positive_hull(u) == u);
  CHECK(positive_hull(RingExpr::difference(u, c)) == u);

  std::mt19937_64 rng(3);
  auto s = CantorSchedule::standard(1);
  for (int trial = 0; trial < 50; ++trial) {
    RingExpr e = fatmeasure::testing::random_expr(rng, 1, 1 + trial % 6);
    RingExpr h = positive_hull(e);
    CHECK(only_gen_union(h));
    CHECK(approx_set(s, h, 3).includes(approx_set(s, e, 3)));
  }
}

TEST_CASE("verify_cover examples") {
  auto s = CantorSchedule::standard(1);
  for (unsigned n = 0; n <= 5; ++n) {
    CoverCheck self = verify_cover(s, approx_set(s, cantor1(), n), {cantor1()}, n);
    CHECK(self.covers_outer_hulls);
    CHECK(self.uncovered_measure == 0);
  }
  for (unsigned n = 1; n <= 8; ++n) {
    CoverCheck gap = verify_cover(s, BoxUnion(Box::unit(1)), {cantor1()}, n);
    CHECK_FALSE(gap.covers_outer_hulls);
    CHECK_FALSE(gap.genuine);
    CHECK(gap.uncovered_measure == 1 - s.stage_measure(n));
  }
  CoverCheck empty = verify_cover(s, BoxUnion(1), {}, 3);
  CHECK(empty.covers_outer_hulls);
  CHECK(empty.genuine);

  // ring targets: the genuine check follows the real sets
  CHECK(verify_cover(s, cantor1(), {cantor1()}, 3).genuine);
  RingExpr left = RingExpr::gen(Point{q(0)}, iv(q(0), q(1, 2)));
  RingExpr right = RingExpr::gen(Point{q(0)}, iv(q(1, 2), q(1)));
  CHECK(verify_cover(s, cantor1(), {left, right}, 3).genuine);
  CHECK_FALSE(verify_cover(s, cantor1(), {left}, 3).covers_outer_hulls);
  // the stage-1 hull of C - (C + 1/8) would cover C, but the real set does not
  RingExpr hole = RingExpr::difference(cantor1(), shifted1(q(1, 8)));
  CoverCheck partial = verify_cover(s, cantor1(), {hole}, 3);
  CHECK(partial.covers_outer_hulls);
  CHECK_FALSE(partial.genuine);
  // closed right endpoints belong to C: a clip that stops at 3/8 misses none
  // of the left half, a clip that stops just before it misses the endpoint
  RingExpr left_half = RingExpr::gen(Point{q(0)}, iv(q(0), q(3, 8)));
  RingExpr closed_left = RingExpr::gen(Point{q(0)}, iv(q(0), q(7, 16)));
  CHECK_FALSE(verify_cover(s, closed_left, {left_half}, 4).genuine);
  CHECK(verify_cover(s, left_half, {closed_left}, 4).genuine);
}

TEST_CASE("genuine covers have no uncovered measure") {
  std::mt19937_64 rng(19);
  auto s = CantorSchedule::standard(1);
  int genuine = 0;
  for (int trial = 0; trial < 60; ++trial) {
    RingExpr t = fatmeasure::testing::random_expr(rng, 1, 1 + trial % 3);
    std::vector<RingExpr> family;
    for (int k = 0; k < 3; ++k) family.push_back(fatmeasure::testing::random_expr(rng, 1, 1 + rng() % 2, false));
    unsigned n = 2 + trial % 4;
    CoverCheck c = verify_cover(s, t, family, n);
    if (c.genuine) {
      ++genuine;
      CHECK(c.covers_outer_hulls);
      CHECK(c.uncovered_measure == 0);
      // a genuine cover at stage n stays genuine later
      CHECK(verify_cover(s, t, family, n + 2).genuine);
    }
  }
  CHECK(genuine > 0);
}

TEST_CASE("find_uncovered_box examples") {
  auto s = CantorSchedule::standard(1);
  auto r = find_uncovered_box(s, Box::unit(1), {cantor1()});
  REQUIRE(std::holds_alternative<UncoveredWitness>(r));
  const auto& w = std::get<UncoveredWitness>(r);
  CHECK(w.stage == 1);
  CHECK(w.box == iv(q(7, 16), q(9, 16)));
  CHECK(w.box.open_within(iv(q(3, 8), q(5, 8))));
  REQUIRE(w.certificates.size() == 1);
  CHECK(verify_witness(s, Box::unit(1), {cantor1()}, w));

  auto none = find_uncovered_box(s, iv(q(0), q(1)), {});
  REQUIRE(std::holds_alternative<UncoveredWitness>(none));
  CHECK(std::get<UncoveredWitness>(none).box == iv(q(1, 4), q(3, 4)));

  std::vector<RingExpr> two{cantor1(), RingExpr::gen(Point{q(1, 4)}, Box::unit(1))};
  auto r2 = find_uncovered_box(s, Box::unit(1), two);
  REQUIRE(std::holds_alternative<UncoveredWitness>(r2));
  const auto& w2 = std::get<UncoveredWitness>(r2);
  CHECK(w2.stage <= 4);
  CHECK(verify_witness(s, Box::unit(1), two, w2));
  for (const auto& e : two) CHECK(approx_set(s, e, w2.stage).intersect(w2.box).empty());

  // translates whose clips miss the target are dismissed by the clip
  std::vector<RingExpr> far{RingExpr::gen(Point{q(5)}, iv(q(5), q(6)))};
  auto r3 = find_uncovered_box(s, Box::unit(1), far);
  REQUIRE(std::holds_alternative<UncoveredWitness>(r3));
  CHECK(std::get<UncoveredWitness>(r3).certificates.at(0).clip_disjoint);
  CHECK(verify_witness(s, Box::unit(1), far, std::get<UncoveredWitness>(r3)));

  CHECK_THROWS_AS(find_uncovered_box(s, iv(q(1), q(1)), {}), PreconditionError);
  auto capped = find_uncovered_box(s, Box::unit(1), {cantor1()}, SearchLimits{0});
  REQUIRE(std::holds_alternative<NeedsDeeperStage>(capped));
  CHECK(std::get<NeedsDeeperStage>(capped).deepest_stage_tried == 0);
}

TEST_CASE("witnesses in two dimensions and tampering") {
  auto s = CantorSchedule::standard(2);
  auto pool = grid_pool(2, 4);
  auto r = find_uncovered_box(s, Box::unit(2), pool);
  REQUIRE(std::holds_alternative<UncoveredWitness>(r));
  auto w = std::get<UncoveredWitness>(r);
  CHECK(verify_witness(s, Box::unit(2), pool, w));
  for (const auto& e : pool) CHECK(approx_set(s, e, w.stage, {}, w.box).empty());

  UncoveredWitness grown = w;
  grown.box = Box::unit(2);
  CHECK_FALSE(verify_witness(s, Box::unit(2), pool, grown));
  UncoveredWitness dropped = w;
  dropped.certificates.pop_back();
  CHECK_FALSE(verify_witness(s, Box::unit(2), pool, dropped));
}

TEST_CASE("random families always leave a witness") {
  std::mt19937_64 rng(23);
  for (int trial = 0; trial < 40; ++trial) {
    std::size_t dim = 1 + trial % 2;
    auto s = CantorSchedule::standard(static_cast<unsigned>(dim));
    std::vector<RingExpr> family;
    for (std::size_t k = 0; k < 1 + rng() % 4; ++k) family.push_back(fatmeasure::testing::random_expr(rng, dim, 2));
    Box target = Box::unit(dim);
    auto r = find_uncovered_box(s, target, family);
    REQUIRE(std::holds_alternative<UncoveredWitness>(r));
    CHECK(verify_witness(s, target, family, std::get<UncoveredWitness>(r)));
  }
}

TEST_CASE("outer_upper") {
  auto s = CantorSchedule::standard(1);
  CoverOptions opt;
  opt.stage = 6;
  CoverAttempt self = outer_upper(s, cantor1(), {cantor1()}, opt);
  CHECK(self.verified);
  REQUIRE(self.total_premeasure_upper);
  CHECK(*self.total_premeasure_upper == s.stage_measure(6));
  CHECK(*self.total_premeasure_upper >= q(1, 2));

  RingExpr half = RingExpr::gen(Point{q(0)}, iv(q(0), q(3, 8)));
  CoverAttempt left = outer_upper(s, half, {half}, opt);
  REQUIRE(left.total_premeasure_upper);
  CHECK(*left.total_premeasure_upper == s.stage_measure(6) / 2);
  CoverAttempt deeper = outer_upper(s, half, {half}, CoverOptions{12});
  CHECK(*deeper.total_premeasure_upper - q(1, 4) <= pow2(-13));

  CoverAttempt cube = outer_upper(s, Box::unit(1), {cantor1(), shifted1(q(1, 4))}, opt);
  CHECK(cube.infinite());
  CHECK_FALSE(cube.verified);
  REQUIRE(cube.witness);
  CHECK(verify_witness(s, Box::unit(1), {cantor1(), shifted1(q(1, 4))}, *cube.witness));

  // a cheaper cover wins over the greedy pick, ties go to the lower indices
  RingExpr right = RingExpr::gen(Point{q(0)}, iv(q(5, 8), q(1)));
  CoverAttempt pick = outer_upper(s, cantor1(), {cantor1(), half, right, cantor1()}, opt);
  REQUIRE(pick.verified);
  CHECK(pick.indices == std::vector<std::size_t>{0});
  // C - [0, 3/8) - [5/8, 1) still holds the endpoints 3/8 and 1
  CoverAttempt open_ends = outer_upper(s, cantor1(), {half, right, cantor1()}, opt);
  CHECK(open_ends.indices == std::vector<std::size_t>{2});
  RingExpr lower = RingExpr::gen(Point{q(0)}, iv(q(0), q(1, 2)));
  RingExpr upper = RingExpr::gen(Point{q(0)}, iv(q(1, 2), q(2)));
  CoverAttempt split = outer_upper(s, cantor1(), {lower, upper, cantor1()}, opt);
  CHECK(split.indices == std::vector<std::size_t>{0, 1});
  CHECK(*split.total_premeasure_upper == *pick.total_premeasure_upper);

  CoverAttempt none = outer_upper(s, cantor1(), {half}, opt);
  CHECK(none.infinite());
  CHECK(none.exhaustive_complete);
}

TEST_CASE("outer_upper invariants") {
  std::mt19937_64 rng(41);
  auto s = CantorSchedule::standard(1);
  CoverOptions opt;
  opt.stage = 4;
  for (int trial = 0; trial < 25; ++trial) {
    RingExpr t = fatmeasure::testing::random_expr(rng, 1, 1 + trial % 2, false);
    std::vector<RingExpr> pool;
    for (int k = 0; k < 4; ++k) pool.push_back(fatmeasure::testing::random_expr(rng, 1, 1 + rng() % 2, false));
    pool.push_back(t);  // guarantees a cover exists
    CoverAttempt a = outer_upper(s, t, pool, opt);
    REQUIRE(a.verified);
    // any verified cover carries at least the target's measure
    CHECK(*a.total_premeasure_upper >= measure_bounds(s, t, opt.stage).lower);

    std::vector<RingExpr> more = pool;
    more.push_back(fatmeasure::testing::random_expr(rng, 1, 1, false));
    CoverAttempt b = outer_upper(s, t, more, opt);
    REQUIRE(b.exhaustive_complete);
    CHECK(*b.total_premeasure_upper <= *a.total_premeasure_upper);
  }

  // subadditivity on disjoint targets
  RingExpr t1 = RingExpr::gen(Point{q(0)}, iv(q(0), q(1, 2)));
  RingExpr t2 = RingExpr::gen(Point{q(3)}, iv(q(3), q(4)));
  std::vector<RingExpr> pool{cantor1(), t1, t2, shifted1(q(1, 8))};
  auto a1 = outer_upper(s, t1, pool, opt), a2 = outer_upper(s, t2, pool, opt);
  auto a12 = outer_upper(s, RingExpr::unite(t1, t2), pool, opt);
  REQUIRE((a1.verified && a2.verified && a12.verified));
  CHECK(*a12.total_premeasure_upper <= *a1.total_premeasure_upper + *a2.total_premeasure_upper);
}

TEST_CASE("infinite cube report") {
  auto s1 = CantorSchedule::standard(1);
  CubeReport r = infinite_cube_report(s1, 4);
  CHECK(r.rows.size() == 15);
  CHECK(r.witnesses == 15);
  CHECK(r.inconclusive == 0);

  CubeReport zero = infinite_cube_report(s1, 0);
  REQUIRE(zero.rows.size() == 1);
  CHECK(zero.rows[0].subset.empty());
  CHECK(zero.witnesses == 1);

  auto s2 = CantorSchedule::standard(2);
  CubeReport r2 = infinite_cube_report(s2, 2);
  CHECK(r2.rows.size() == 3);
  CHECK(r2.witnesses == 3);
  CHECK_THROWS_AS(infinite_cube_report(s1, 20, {}, 1000), BudgetError);
}
