#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "fatmeasure/box_union.hpp"
#include "fatmeasure/errors.hpp"
#include "fatmeasure/extended_rational.hpp"
#include "test_support.hpp"

using namespace fatmeasure;
using fatmeasure::testing::q;

namespace {

Box interval(Rational a, Rational b) { return Box(Point{a}, Point{b}); }

}  // namespace

TEST_CASE("rational text form is canonical p/q") {
  CHECK(to_string(parse_rational("6/8")) == "3/4");
  CHECK(to_string(parse_rational("2")) == "2/1");
  CHECK(to_string(parse_rational("-3/9")) == "-1/3");
  CHECK(to_string(Rational(0)) == "0/1");
  CHECK_THROWS_AS(parse_rational("1/0"), PreconditionError);
  CHECK_THROWS_AS(parse_rational("0.5"), PreconditionError);
  CHECK_THROWS_AS(parse_rational("1/-2"), PreconditionError);
  CHECK(floor_log2(q(3, 8)) == -2);
  CHECK(floor_log2(q(1, 2)) == -1);
  CHECK(floor_log2(q(1)) == 0);
  CHECK(floor_log2(q(7)) == 2);
  CHECK(rational_gcd({q(3, 8), q(1, 2)}) == q(1, 8));
}

TEST_CASE("volume") {
  CHECK(Box::unit(2).volume() == 1);
  CHECK(interval(q(1, 3), q(1, 3)).volume() == 0);
  CHECK(Box(Point{q(0), q(0)}, Point{q(3, 8), q(1, 2)}).volume() == q(3, 16));
  Box half_line({Interval{Coord(q(0)), Coord::pos_inf()}});
  CHECK_THROWS_AS(half_line.volume(), PreconditionError);
}

TEST_CASE("interval split and idempotence") {
  BoxUnion a(interval(q(0), q(1)));
  BoxUnion b(interval(q(3, 8), q(5, 8)));
  BoxUnion diff = a.subtract(b);
  REQUIRE(diff.size() == 2);
  CHECK(diff.boxes()[0] == interval(q(0), q(3, 8)));
  CHECK(diff.boxes()[1] == interval(q(5, 8), q(1)));
  CHECK(diff.measure() == q(3, 4));
  CHECK(a.intersect(a) == a);
  CHECK(BoxUnion(1).measure() == 0);
  CHECK_THROWS_AS(a.unite(BoxUnion(Box::unit(2))), PreconditionError);
}

TEST_CASE("canonical form merges adjacent pieces") {
  std::vector<Box> parts{interval(q(1, 2), q(1)), interval(q(0), q(1, 2))};
  BoxUnion u(1, parts);
  REQUIRE(u.size() == 1);
  CHECK(u.boxes()[0] == interval(q(0), q(1)));

  // two stacked rectangles forming one square
  std::vector<Box> stacked{Box(Point{q(0), q(0)}, Point{q(1), q(1, 2)}), Box(Point{q(0), q(1, 2)}, Point{q(1), q(1)})};
  CHECK(BoxUnion(2, stacked) == BoxUnion(Box::unit(2)));
}

TEST_CASE("boolean operations agree with cell sampling") {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 150; ++trial) {
    std::size_t dim = 1 + trial % 3;
    auto ra = fatmeasure::testing::random_boxes(rng, dim, 5);
    auto rb = fatmeasure::testing::random_boxes(rng, dim, 5);
    BoxUnion a(dim, ra), b(dim, rb);
    BoxUnion u = a.unite(b), i = a.intersect(b), s = a.subtract(b);
    for (const auto& p : fatmeasure::testing::cell_samples({ra, rb}, dim)) {
      bool in_a = fatmeasure::testing::in_any(ra, p);
      bool in_b = fatmeasure::testing::in_any(rb, p);
      REQUIRE(u.contains(p) == (in_a || in_b));
      REQUIRE(i.contains(p) == (in_a && in_b));
      REQUIRE(s.contains(p) == (in_a && !in_b));
    }
    CHECK(u.pairwise_disjoint());
    CHECK(s.pairwise_disjoint());
  }
}

TEST_CASE("algebraic laws hold as canonical equalities") {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 100; ++trial) {
    std::size_t dim = 1 + trial % 3;
    auto ra = fatmeasure::testing::random_boxes(rng, dim, 6);
    auto rb = fatmeasure::testing::random_boxes(rng, dim, 6);
    BoxUnion a(dim, ra), b(dim, rb);
    CHECK(BoxUnion(dim, a.boxes()) == a);  // canonicalization is idempotent
    CHECK(a.subtract(b).unite(a.intersect(b)) == a);
    CHECK(a.subtract(a.subtract(b)) == a.intersect(b));
    CHECK(a.unite(b).measure() + a.intersect(b).measure() == a.measure() + b.measure());
    // canonical form does not depend on input order
    std::reverse(ra.begin(), ra.end());
    CHECK(BoxUnion(dim, ra) == a);
  }
}

TEST_CASE("measure equals inclusion-exclusion over the raw boxes") {
  std::mt19937_64 rng(13);
  for (int trial = 0; trial < 60; ++trial) {
    std::size_t dim = 1 + trial % 3;
    auto boxes = fatmeasure::testing::random_boxes(rng, dim, 6);
    Rational oracle(0);
    const std::size_t n = boxes.size();
    for (unsigned mask = 1; mask < (1u << n); ++mask) {
      Box acc = Box::whole(dim);
      int bits = 0;
      for (std::size_t k = 0; k < n; ++k) {
        if (mask & (1u << k)) {
          acc = acc.intersect(boxes[k]);
          ++bits;
        }
      }
      Rational v = acc.empty() ? Rational(0) : acc.volume();
      oracle += (bits % 2 == 1) ? v : Rational(-v);
    }
    CHECK(BoxUnion(dim, boxes).measure() == oracle);
  }
}

TEST_CASE("translate") {
  BoxUnion u(interval(q(0), q(1)));
  Point zero{q(0)};
  CHECK(u.translate(zero) == u);
  CHECK(u.translate(Point{q(1, 3)}).boxes()[0] == interval(q(1, 3), q(4, 3)));

  std::mt19937_64 rng(17);
  for (int trial = 0; trial < 40; ++trial) {
    std::size_t dim = 1 + trial % 3;
    BoxUnion a(dim, fatmeasure::testing::random_boxes(rng, dim, 6));
    Point v(dim), minus_v(dim);
    for (std::size_t i = 0; i < dim; ++i) {
      v[i] = fatmeasure::testing::grid_rational(rng, -3, 3, 7);
      minus_v[i] = -v[i];
    }
    BoxUnion moved = a.translate(v);
    CHECK(moved.measure() == a.measure());
    CHECK(moved.translate(minus_v) == a);
    CHECK(BoxUnion(dim, moved.boxes()) == moved);
  }
}

TEST_CASE("unbounded boxes intersect like half-spaces") {
  Box half({Interval{Coord::neg_inf(), Coord(q(1, 2))}, Interval{Coord::neg_inf(), Coord::pos_inf()}});
  BoxUnion clipped = BoxUnion(Box::unit(2)).intersect(half);
  CHECK(clipped.measure() == q(1, 2));
  CHECK_FALSE(BoxUnion(half).bounded());
  CHECK_THROWS_AS(BoxUnion(half).measure(), PreconditionError);
}

TEST_CASE("tile_check double counting") {
  auto one = tile_check(interval(q(0), q(1)), {q(2)});
  CHECK(one.ok);
  CHECK(one.scaled_count == 2);
  CHECK(one.refinement == interval(q(0), q(1)));
  CHECK(one.scaled_measure == 2);

  auto half = tile_check(interval(q(0), q(1)), {q(3, 2)});
  CHECK(half.ok);
  CHECK(half.scaled_count == 3);
  CHECK(half.refinement == interval(q(0), q(1, 2)));
  CHECK(half.counted_measure == q(3, 2));

  // direct decomposition count: 3 x 2 cells of size 1/2 x 1/3
  auto square = tile_check(Box::unit(2), {q(3, 2), q(2, 3)});
  CHECK(square.ok);
  CHECK(square.scaled_count == 6);
  CHECK(square.scaled_measure == 1);
  CHECK(square.counted_measure == 6 * q(1, 6));

  CHECK_THROWS_AS(tile_check(Box::unit(1), {q(0)}), PreconditionError);
  CHECK_THROWS_AS(tile_check(Box::unit(1), {q(-1, 2)}), PreconditionError);
}

TEST_CASE("extended rational ordering matches the real embedding") {
  ExtendedRational root2 = ExtendedRational::sqrt_of(2);
  CHECK(root2 * root2 == ExtendedRational(q(2)));
  CHECK(ExtendedRational(q(7, 5)) < root2);
  CHECK(root2 < ExtendedRational(q(3, 2)));
  CHECK(ExtendedRational::sqrt_of(4).is_rational());
  CHECK(ExtendedRational(q(1), q(-1), 2).sign() < 0);

  std::mt19937_64 rng(23);
  for (int trial = 0; trial < 500; ++trial) {
    unsigned long r = 2 + trial % 5;
    if (r == 4) r = 6;
    auto draw = [&] {
      return ExtendedRational(fatmeasure::testing::grid_rational(rng, -4, 4, 9),
                              fatmeasure::testing::grid_rational(rng, -4, 4, 9), r);
    };
    ExtendedRational x = draw(), y = draw();
    // long double carries enough precision for these small-denominator samples
    long double xv = static_cast<long double>(x.rational_part().get_d()) +
                     static_cast<long double>(x.surd_part().get_d()) * std::sqrt(static_cast<long double>(r));
    long double yv = static_cast<long double>(y.rational_part().get_d()) +
                     static_cast<long double>(y.surd_part().get_d()) * std::sqrt(static_cast<long double>(r));
    if (std::fabs(xv - yv) > 1e-12L) CHECK((x < y) == (xv < yv));
    CHECK(((x < y) || (y < x) || (x == y)));
    CHECK((x * y).approx() == doctest::Approx(x.approx() * y.approx()).epsilon(1e-9));
  }
}
