#include "fatmeasure/hausdorff.hpp"

#include <algorithm>
#include <stdexcept>

#include "fatmeasure/errors.hpp"

namespace fatmeasure {

ExtendedRational cube_diameter(const Rational& side, std::size_t dim) {
  return {Rational(0), side, static_cast<unsigned long>(dim)};
}

namespace {

void require_delta(const Rational& delta) {
  if (delta <= 0) throw PreconditionError("delta must be positive");
}

// side * sqrt(d) < delta, squared
bool below_delta(const Rational& side, std::size_t dim, const Rational& delta) {
  return side * side * static_cast<unsigned long>(dim) < delta * delta;
}

// All tuples of the given corner coordinates, coordinate 0 slowest.
std::vector<Cube> product_cubes(const std::vector<Rational>& corners, std::size_t dim, const Rational& side) {
  std::vector<Cube> out;
  std::vector<std::size_t> idx(dim, 0);
  if (corners.empty()) return out;
  while (true) {
    Point p(dim);
    for (std::size_t i = 0; i < dim; ++i) p[i] = corners[idx[i]];
    out.push_back({std::move(p), side});
    std::size_t i = dim;
    while (i > 0 && ++idx[i - 1] == corners.size()) idx[--i] = 0;
    if (i == 0) return out;
  }
}

}  // namespace

Inequality compare(std::string name, const ExtendedRational& lhs, std::string relation, const ExtendedRational& rhs) {
  bool holds = false;
  if (relation == "<") {
    holds = lhs < rhs;
  } else if (relation == "<=") {
    holds = lhs <= rhs;
  } else if (relation == "==") {
    holds = lhs == rhs;
  } else {
    throw std::logic_error("unknown relation " + relation);
  }
  return {std::move(name), lhs, std::move(relation), rhs, holds, false};
}

DeltaCover nu_delta_upper(const CantorSchedule& s, const Gauge& h, const Rational& delta, const NuOptions& options) {
  require_delta(delta);
  if (h.s == 0) throw PreconditionError("gauge exponent must be positive");
  const std::size_t d = s.dim();
  auto sum_at = [&](unsigned n) {
    return ExtendedRational(pow2(static_cast<long>(n * d))) * h(cube_diameter(s.interval_length(n), d));
  };

  unsigned stage = 0;
  if (options.stage) {
    stage = *options.stage;
    if (!below_delta(s.interval_length(stage), d, delta)) {
      throw PreconditionError("stage " + std::to_string(stage) + " cubes are not below delta");
    }
  } else {
    std::optional<unsigned> first;
    for (unsigned n = 0; n <= options.stage_cap && !first; ++n) {
      if (below_delta(s.interval_length(n), d, delta)) first = n;
    }
    if (!first) {
      throw BudgetError("stage cap too small for delta", nlohmann::json{{"stage_cap", options.stage_cap}});
    }
    stage = *first;
    if (options.choice == StageChoice::Best) {
      ExtendedRational best = sum_at(stage);
      const unsigned last = std::min<unsigned>(options.stage_cap, options.limits.max_log2_boxes / d);
      for (unsigned n = stage + 1; n <= last; ++n) {
        ExtendedRational v = sum_at(n);
        if (v < best) {
          best = v;
          stage = n;
        }
      }
    }
  }

  if (static_cast<unsigned long>(stage) * d > options.limits.max_log2_boxes) {
    throw BudgetError("too many stage cubes", nlohmann::json{{"stage", stage}});
  }
  DeltaCover c;
  c.dim = d;
  c.delta = delta;
  c.stage = stage;
  const Rational side = s.interval_length(stage);
  c.diameter = cube_diameter(side, d);
  c.cubes = product_cubes(s.left_endpoints(stage), d, side);
  c.gauge_sum = sum_at(stage);
  return c;
}

DeltaCover nu_delta_upper(const BoxUnion& u, const Gauge& h, const Rational& delta, const NuOptions& options) {
  require_delta(delta);
  if (h.s == 0) throw PreconditionError("gauge exponent must be positive");
  const std::size_t d = u.dim();
  DeltaCover c;
  c.dim = d;
  c.delta = delta;
  if (u.empty()) return c;
  if (!u.bounded()) throw PreconditionError("box union must be bounded");

  std::vector<Rational> coords;
  for (const auto& b : u.boxes()) {
    for (const auto& side : b.sides()) {
      coords.push_back(side.lo.value());
      coords.push_back(side.hi.value());
    }
  }
  const Rational g = rational_gcd(coords);
  std::optional<unsigned> level;
  for (unsigned j = 0; j <= options.stage_cap && !level; ++j) {
    if (below_delta(g * pow2(-static_cast<long>(j)), d, delta)) level = j;
  }
  if (!level) throw BudgetError("refinement cap too small for delta", nlohmann::json{{"stage_cap", options.stage_cap}});
  const Rational side = g * pow2(-static_cast<long>(*level));
  const Rational count = u.measure() / power(side, static_cast<long>(d));
  if (count > pow2(options.limits.max_log2_boxes)) {
    throw BudgetError("too many cubes", nlohmann::json{{"level", *level}});
  }

  c.stage = *level;
  c.diameter = cube_diameter(side, d);
  for (const auto& b : u.boxes()) {
    std::vector<std::size_t> counts(d), idx(d, 0);
    for (std::size_t i = 0; i < d; ++i) {
      Rational k = b.side(i).length() / side;
      counts[i] = k.get_num().get_ui();
    }
    while (true) {
      Point p(d);
      for (std::size_t i = 0; i < d; ++i) p[i] = b.side(i).lo.value() + side * static_cast<unsigned long>(idx[i]);
      c.cubes.push_back({std::move(p), side});
      std::size_t i = d;
      while (i > 0 && ++idx[i - 1] == counts[i - 1]) idx[--i] = 0;
      if (i == 0) break;
    }
  }
  c.gauge_sum = ExtendedRational(count) * h(c.diameter);
  return c;
}

DiamVolumeReport diam_volume_check(const BoxUnion& u) {
  if (!u.bounded()) throw PreconditionError("box union must be bounded");
  DiamVolumeReport r;
  r.measure = u.measure();
  r.diameter_squared = 0;
  const auto& boxes = u.boxes();
  // the farthest points of two boxes are opposite corners
  for (std::size_t a = 0; a < boxes.size(); ++a) {
    for (std::size_t b = a; b < boxes.size(); ++b) {
      Rational sq(0);
      for (std::size_t i = 0; i < u.dim(); ++i) {
        Rational span = std::max(boxes[a].side(i).hi.value() - boxes[b].side(i).lo.value(),
                                 boxes[b].side(i).hi.value() - boxes[a].side(i).lo.value());
        sq += span * span;
      }
      r.diameter_squared = std::max(r.diameter_squared, sq);
    }
  }
  r.measure_squared = r.measure * r.measure;
  r.diameter_squared_pow_d = power(r.diameter_squared, static_cast<long>(u.dim()));
  r.holds = r.measure_squared <= r.diameter_squared_pow_d;
  return r;
}

namespace {

// Largest k / 2^p with (k / 2^p)^(2d) <= value, p doubled until k > 0.
Rational dyadic_root_below(const Rational& value, unsigned long root) {
  for (long p = 32;; p *= 2) {
    const Rational v = value * pow2(p * static_cast<long>(root));
    mpz_class scaled = v.get_num() / v.get_den();
    mpz_class k;
    mpz_root(k.get_mpz_t(), scaled.get_mpz_t(), root);
    if (k > 0) return Rational(k) * pow2(-p);
  }
}

}  // namespace

CorollaryReport corollary_pipeline(const CantorSchedule& s, const Gauge& h, const Rational& delta, const Rational& a,
                                   const NuOptions& options) {
  const std::size_t d = s.dim();
  if (a <= 0) throw PreconditionError("a must be positive (alpha would be 0)");
  if (a > s.limit_measure()) throw PreconditionError("a exceeds the measure of C^d");

  CorollaryReport r;
  r.dim = d;
  r.gauge = h;
  r.delta = delta;
  r.a = a;
  r.ball_constant = 1;
  r.cover = nu_delta_upper(s, h, delta, options);
  auto& ineq = r.inequalities;
  const ExtendedRational sqrt_d = ExtendedRational::sqrt_of(static_cast<unsigned long>(d));
  const ExtendedRational diam_pow = r.cover.diameter.pow(static_cast<unsigned>(d));
  const Rational side = r.cover.cubes.front().side;
  const Rational n_cover(static_cast<unsigned long>(r.cover.cubes.size()));

  ineq.push_back(compare("a <= lambda(K)", a, "<=", s.limit_measure()));
  ineq.push_back(compare("diam E_j < delta", r.cover.diameter, "<", delta));
  ineq.push_back(compare("lambda(E_j) <= (diam E_j)^d", power(side, static_cast<long>(d)), "<=", diam_pow));
  ineq.push_back(compare("a <= sum (diam E_j)^d", a, "<=", ExtendedRational(n_cover) * diam_pow));

  // smallest n with n (diam E)^d > a/2
  const Rational half_a = a / 2;
  std::size_t lo = 1, hi = r.cover.cubes.size();
  while (lo < hi) {
    std::size_t mid = lo + (hi - lo) / 2;
    if (ExtendedRational(Rational(static_cast<unsigned long>(mid))) * diam_pow > half_a) {
      hi = mid;
    } else {
      lo = mid + 1;
    }
  }
  r.truncation = lo;
  const Rational n_kept(static_cast<unsigned long>(r.truncation));
  ineq.push_back(compare("a/2 < sum_{j<=n} (diam E_j)^d", half_a, "<", ExtendedRational(n_kept) * diam_pow));

  // Q_j = [0, diam E_j / sqrt(d)]^d; every E_j has the same side here
  for (std::size_t j = 0; j < r.truncation; ++j) r.cubes.push_back({Point(d, Rational(0)), side});
  ineq.push_back(compare("diam Q_j == diam E_j", cube_diameter(side, d), "==", r.cover.diameter));

  // alpha^d * C_d * d^(d/2) = a/2, i.e. alpha^(2d) = (a/2)^2 / d^d
  const Rational alpha_2d = half_a * half_a / power(Rational(static_cast<unsigned long>(d)), static_cast<long>(d));
  Rational alpha;
  r.alpha_exact = exact_root(alpha_2d, 2 * d, alpha);
  if (!r.alpha_exact) alpha = dyadic_root_below(alpha_2d, 2 * d);
  r.alpha = alpha;
  ExtendedRational lhs = ExtendedRational(power(alpha, static_cast<long>(d))) * sqrt_d.pow(static_cast<unsigned>(d));
  ineq.push_back(compare(r.alpha_exact ? "alpha^d d^(d/2) == a/2" : "alpha^d d^(d/2) <= a/2", lhs,
                         r.alpha_exact ? "==" : "<=", half_a));

  CubeFamily family{d, std::vector<Rational>(r.truncation, side)};
  ineq.push_back(compare("1 <= sum (side Q_j / alpha)^d", Rational(1), "<=",
                         Rational(n_kept * power(side / alpha, static_cast<long>(d)))));
  r.packing = pack_cover(family, Rational(1, 2), alpha);
  std::vector<Box> placed;
  for (const auto& p : r.packing.placements) placed.push_back(Box::cube(p.translation, side));
  Rational uncovered = BoxUnion(r.packing.target).subtract(BoxUnion(d, placed)).measure();
  ineq.push_back(compare("lambda([0, alpha/2]^d minus placed Q_j) == 0", uncovered, "==", Rational(0)));

  ExtendedRational q_sum = ExtendedRational(n_kept) * h(cube_diameter(side, d));
  ineq.push_back(compare("sum_{j<=n} h(diam Q_j) <= sum h(diam E_j)", q_sum, "<=", r.cover.gauge_sum));
  Inequality bound = compare("sum h(diam E_j) <= a + 1", r.cover.gauge_sum, "<=", Rational(a + 1));
  bound.informational = true;
  ineq.push_back(bound);

  r.ok = r.packing.verified;
  for (const auto& i : ineq) {
    if (!i.informational) r.ok = r.ok && i.holds;
  }
  return r;
}

unsigned tolerance_stage(const CantorSchedule& s, const Rational& tol, unsigned stage_cap) {
  if (tol <= 0) throw PreconditionError("tolerance must be positive");
  for (unsigned n = 0; n <= stage_cap; ++n) {
    if (s.stage_defect(n) <= tol) return n;
  }
  throw BudgetError("stage cap too small for the tolerance", nlohmann::json{{"stage_cap", stage_cap}});
}

MeasureBounds range_function(const CantorSchedule& s, const Rational& x, const Rational& tol, unsigned stage_cap) {
  const unsigned n = tolerance_stage(s, tol, stage_cap);
  std::vector<Interval> sides(s.dim(), Interval{Coord::neg_inf(), Coord::pos_inf()});
  sides[0].hi = Coord(x);
  RingExpr slab = RingExpr::gen(Point(s.dim(), Rational(0)), Box(std::move(sides)));
  return measure_bounds(s, slab, n);
}

LevelSolution solve_level(const CantorSchedule& s, const Rational& target, const Rational& tol, unsigned stage_cap) {
  if (target <= 0 || target >= s.limit_measure()) throw PreconditionError("target must lie strictly between 0 and lambda(C^d)");
  tolerance_stage(s, tol, stage_cap);
  Rational lo(0), hi(1);
  for (unsigned it = 1; it <= 4096; ++it) {
    Rational mid = (lo + hi) / 2;
    MeasureBounds b = range_function(s, mid, tol, stage_cap);
    if (b.upper < target) {
      lo = mid;
    } else if (b.lower > target) {
      hi = mid;
    } else {
      return {mid, b, it};
    }
  }
  throw std::logic_error("bisection did not bracket the target");
}

}  // namespace fatmeasure
