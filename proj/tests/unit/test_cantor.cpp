#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "fatmeasure/cantor.hpp"
#include "fatmeasure/errors.hpp"
#include "test_support.hpp"

using namespace fatmeasure;
using fatmeasure::testing::q;
using K = Membership::Kind;

namespace {

// Oracle: literal middle removal, stage by stage.
std::vector<std::pair<Rational, Rational>> removal_oracle(const Rational& c, const Rational& rho, unsigned n) {
  std::vector<std::pair<Rational, Rational>> ivs{{q(0), q(1)}};
  Rational r = c;
  for (unsigned k = 1; k <= n; ++k) {
    r *= rho;
    std::vector<std::pair<Rational, Rational>> next;
    for (auto& [a, b] : ivs) {
      Rational keep = (b - a - r) / 2;
      next.emplace_back(a, a + keep);
      next.emplace_back(b - keep, b);
    }
    ivs = std::move(next);
  }
  return ivs;
}

Box open1(Rational a, Rational b) { return Box(Point{a}, Point{b}); }

}  // namespace

TEST_CASE("schedule validation") {
  CHECK_NOTHROW(CantorSchedule(1, q(1), q(1, 4)));
  CHECK_THROWS_AS(CantorSchedule(1, q(0), q(1, 4)), PreconditionError);
  CHECK_THROWS_AS(CantorSchedule(1, q(1), q(1, 2)), PreconditionError);
  // c rho / (1 - 2 rho) = 2 * (1/4) / (1/2) = 1: limit set would be null
  CHECK_THROWS_AS(CantorSchedule(1, q(2), q(1, 4)), PreconditionError);
  CHECK_THROWS_AS(CantorSchedule(0, q(1), q(1, 4)), PreconditionError);
}

TEST_CASE("limit measure closed form") {
  CHECK(CantorSchedule::standard(1).limit_measure() == q(1, 2));
  CHECK(CantorSchedule(1, q(1), q(1, 8)).limit_measure() == q(5, 6));
  CHECK(CantorSchedule::standard(2).limit_measure() == q(1, 4));
}

TEST_CASE("stage approximations") {
  auto s = CantorSchedule::standard(1);
  CHECK(s.stage_approx(0) == BoxUnion(Box::unit(1)));
  BoxUnion a1 = s.stage_approx(1);
  REQUIRE(a1.size() == 2);
  CHECK(a1.boxes()[0] == open1(q(0), q(3, 8)));
  CHECK(a1.boxes()[1] == open1(q(5, 8), q(1)));
  CHECK(a1.measure() == q(3, 4));
  CHECK(s.stage_approx(2).measure() == q(5, 8));
  CHECK(s.interval_length(4) == q(17, 512));
  CHECK(CantorSchedule::standard(2).stage_approx(0).measure() == 1);
}

TEST_CASE("closed form agrees with literal removal") {
  for (auto [c, rho] : {std::pair{q(1), q(1, 4)}, std::pair{q(1), q(1, 8)}, std::pair{q(1, 2), q(1, 3)}}) {
    CantorSchedule s(1, c, rho);
    for (unsigned n = 0; n <= 8; ++n) {
      auto oracle = removal_oracle(c, rho, n);
      auto got = s.intervals_within(n, Coord::neg_inf(), Coord::pos_inf());
      REQUIRE(got.size() == oracle.size());
      Rational total(0);
      for (std::size_t i = 0; i < got.size(); ++i) {
        CHECK(got[i].lo == oracle[i].first);
        CHECK(got[i].hi == oracle[i].second);
        total += oracle[i].second - oracle[i].first;
      }
      CHECK(s.stage_measure_1d(n) == total);
      CHECK(s.stage_approx(n).measure() == total);
    }
  }
}

TEST_CASE("nesting, defect and symmetry") {
  for (unsigned d : {1u, 2u}) {
    auto s = CantorSchedule::standard(d);
    for (unsigned n = 0; n + 1 <= (d == 1 ? 9u : 5u); ++n) {
      BoxUnion an = s.stage_approx(n), next = s.stage_approx(n + 1);
      CHECK(an.includes(next));
      CHECK(an.measure() == s.stage_measure(n));
      CHECK(an.measure() - s.limit_measure() == s.stage_defect(n));
      CHECK(s.stage_defect(n + 1) < s.stage_defect(n));
      CHECK(s.stage_defect(n) > 0);
    }
  }
  auto s = CantorSchedule::standard(1);
  CHECK(s.stage_defect(0) == q(1, 2));
  CHECK(s.stage_defect(3) == q(1, 16));
  for (unsigned n = 0; n <= 8; ++n) {
    BoxUnion a = s.stage_approx(n);
    // reflect x -> 1 - x: [lo, hi) maps to [1 - hi, 1 - lo), same set modulo endpoints
    std::vector<Box> mirrored;
    for (const auto& b : a.boxes()) {
      mirrored.push_back(open1(Rational(1 - b.side(0).hi.value()), Rational(1 - b.side(0).lo.value())));
    }
    CHECK(BoxUnion(1, mirrored) == a);
    Box left({Interval{Coord::neg_inf(), Coord(q(1, 2))}});
    CHECK(a.intersect(left).measure() * 2 == a.measure());
  }
}

TEST_CASE("windowed measure matches box algebra") {
  std::mt19937_64 rng(3);
  auto s = CantorSchedule::standard(1);
  for (int trial = 0; trial < 100; ++trial) {
    unsigned n = trial % 9;
    Rational a = fatmeasure::testing::grid_rational(rng, -1, 2, 64);
    Rational b = fatmeasure::testing::grid_rational(rng, -1, 2, 64);
    if (b < a) std::swap(a, b);
    Interval w{Coord(a), Coord(b)};
    CHECK(s.measure_within_1d(n, w) == s.stage_approx(n).intersect(open1(a, b)).measure());
  }
  CHECK(s.measure_within_1d(3, Interval{Coord::neg_inf(), Coord::pos_inf()}) == q(9, 16));
}

TEST_CASE("stage budget") {
  auto s = CantorSchedule::standard(2);
  CHECK_THROWS_AS(s.stage_approx(11, StageLimits{20}), BudgetError);
  CHECK_NOTHROW(s.stage_approx(3, StageLimits{20}));
}

TEST_CASE("membership") {
  auto s = CantorSchedule::standard(1);
  auto m = membership(s, Point{q(1, 2)}, 10);
  CHECK(m.kind == K::Out);
  CHECK(m.stage == 1);
  m = membership(s, Point{q(0)}, 10);
  CHECK(m.kind == K::In);
  CHECK(m.stage == 0);
  m = membership(s, Point{q(3, 8)}, 10);
  CHECK(m.kind == K::In);
  CHECK(m.stage == 1);
  CHECK(membership(s, Point{q(2)}, 10).kind == K::Out);
  CHECK(membership(s, Point{q(-1, 3)}, 10).stage == 0);
  // 1/3 is neither an endpoint nor in a gap within a few stages
  CHECK(membership(s, Point{q(1, 3)}, 2).kind == K::Unknown);

  auto s2 = CantorSchedule::standard(2);
  CHECK(membership(s2, Point{q(0), q(1, 2)}, 5).kind == K::Out);
  CHECK(membership(s2, Point{q(0), q(5, 8)}, 5).kind == K::In);
}

TEST_CASE("membership is consistent with stage sets") {
  auto s = CantorSchedule::standard(1);
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 300; ++trial) {
    Point x{fatmeasure::testing::grid_rational(rng, 0, 1, 512)};
    auto m = membership(s, x, 12);
    if (m.kind == K::Out) {
      CHECK_FALSE(s.stage_approx(m.stage).contains(x));
    } else if (m.kind == K::In) {
      // x is an endpoint: in every closed stage set, tested via the intervals
      for (unsigned n = 0; n <= 8; ++n) {
        bool inside = false;
        for (const auto& iv : s.intervals_within(n, Coord::neg_inf(), Coord::pos_inf())) {
          inside = inside || (iv.lo <= x[0] && x[0] <= iv.hi);
        }
        CHECK(inside);
      }
    }
  }
}

TEST_CASE("find_gap examples") {
  auto s = CantorSchedule::standard(1);
  Point zero{q(0)};
  auto r = find_gap(s, zero, open1(q(0), q(1)), 12);
  REQUIRE(std::holds_alternative<GapCertificate>(r));
  auto cert = std::get<GapCertificate>(r);
  CHECK(cert.stage == 1);
  CHECK(cert.witness.open_within(open1(q(3, 8), q(5, 8))));
  CHECK(cert.witness == open1(q(7, 16), q(9, 16)));
  CHECK(verify_gap(s, zero, cert));

  r = find_gap(s, zero, open1(q(0), q(1, 8)), 12);
  REQUIRE(std::holds_alternative<GapCertificate>(r));
  cert = std::get<GapCertificate>(r);
  CHECK(cert.stage >= 2);
  CHECK(cert.stage == 3);  // first gap left of 1/8: (9/128, 11/128)
  CHECK(verify_gap(s, zero, cert));

  // a translate of a known gap is already disjoint at that gap's stage
  Point t{q(1, 5)};
  r = find_gap(s, t, open1(q(3, 8) + q(1, 5), q(5, 8) + q(1, 5)), 12);
  REQUIRE(std::holds_alternative<GapCertificate>(r));
  cert = std::get<GapCertificate>(r);
  CHECK(cert.stage == 1);
  CHECK(cert.witness == open1(q(3, 8) + q(1, 5) + q(1, 16), q(5, 8) + q(1, 5) - q(1, 16)));

  r = find_gap(s, zero, open1(q(0), q(1, 8)), 2);
  CHECK(std::holds_alternative<NeedsDeeperStage>(r));
  CHECK_THROWS_AS(find_gap(s, zero, open1(q(1, 2), q(1, 2)), 4), PreconditionError);
}

TEST_CASE("gap certificates always verify") {
  std::mt19937_64 rng(9);
  for (unsigned d : {1u, 2u}) {
    auto s = CantorSchedule::standard(d);
    for (int trial = 0; trial < 60; ++trial) {
      Box j = fatmeasure::testing::random_box(rng, d, 64, 1);
      if (j.empty()) continue;
      Point t(d);
      for (auto& ti : t) ti = fatmeasure::testing::grid_rational(rng, -1, 1, 16);
      auto r = find_gap(s, t, j, 14);
      REQUIRE(std::holds_alternative<GapCertificate>(r));
      const auto& cert = std::get<GapCertificate>(r);
      CHECK(cert.witness.open_within(j));
      CHECK(verify_gap(s, t, cert));
      CHECK(disjoint_stage(s, t, cert.witness, 14).value() <= cert.stage);
    }
  }
}
