#include "fatmeasure/cantor.hpp"

#include <algorithm>
#include <functional>

#include "fatmeasure/errors.hpp"

namespace fatmeasure {

CantorSchedule::CantorSchedule(unsigned dim, Rational c, Rational rho) : dim_(dim), c_(std::move(c)), rho_(std::move(rho)) {
  if (dim_ == 0) throw PreconditionError("schedule dimension must be positive");
  if (sgn(c_) <= 0) throw PreconditionError("schedule requires c > 0");
  if (sgn(rho_) <= 0) throw PreconditionError("schedule requires rho > 0");
  if (2 * rho_ >= 1) throw PreconditionError("schedule requires 2*rho < 1");
  // Total removed length c*rho/(1-2rho) < 1 makes the limit set fat; it also
  // keeps every l_n > 0, i.e. each middle removal fits inside its interval.
  if (c_ * rho_ / (1 - 2 * rho_) >= 1) throw PreconditionError("schedule requires c*rho/(1-2*rho) < 1");
}

Rational CantorSchedule::removal(unsigned k) const { return c_ * power(rho_, k); }

Rational CantorSchedule::stage_measure_1d(unsigned n) const {
  // sum_{k=1}^n 2^(k-1) c rho^k = c rho (1 - (2 rho)^n) / (1 - 2 rho)
  Rational two_rho = 2 * rho_;
  Rational removed = c_ * rho_ * (1 - power(two_rho, n)) / (1 - two_rho);
  return 1 - removed;
}

Rational CantorSchedule::interval_length(unsigned n) const { return stage_measure_1d(n) * pow2(-static_cast<long>(n)); }

Rational CantorSchedule::stage_measure(unsigned n) const { return power(stage_measure_1d(n), dim_); }

Rational CantorSchedule::limit_measure_1d() const { return 1 - c_ * rho_ / (1 - 2 * rho_); }

Rational CantorSchedule::limit_measure() const { return power(limit_measure_1d(), dim_); }

Rational CantorSchedule::stage_defect(unsigned n) const { return stage_measure(n) - limit_measure(); }

namespace {

struct Levels {
  std::vector<Rational> length;  // l_k
  std::vector<Rational> step;    // l_k + r_k: offset of the right child at level k
};

Levels levels(const CantorSchedule& s, unsigned n) {
  Levels lv;
  lv.length.reserve(n + 1);
  lv.step.reserve(n + 1);
  lv.length.push_back(Rational(1));
  lv.step.push_back(Rational(0));
  for (unsigned k = 1; k <= n; ++k) {
    Rational r = s.removal(k);
    Rational len = (lv.length.back() - r) / 2;
    lv.step.push_back(len + r);
    lv.length.push_back(std::move(len));
  }
  return lv;
}

}  // namespace

std::vector<ClosedInterval> CantorSchedule::intervals_within(unsigned n, const Coord& lo, const Coord& hi) const {
  std::vector<ClosedInterval> out;
  if (!(lo < hi)) return out;
  Levels lv = levels(*this, n);
  std::function<void(const Rational&, unsigned)> descend = [&](const Rational& left, unsigned k) {
    Rational right = left + lv.length[k];
    if (!(Coord(left) < hi) || !(lo < Coord(right))) return;
    if (k == n) {
      out.push_back({left, std::move(right)});
      return;
    }
    descend(left, k + 1);
    descend(Rational(left + lv.step[k + 1]), k + 1);
  };
  descend(Rational(0), 0);
  return out;
}

std::vector<Rational> CantorSchedule::left_endpoints(unsigned n) const {
  std::vector<Rational> out;
  for (auto& iv : intervals_within(n, Coord::neg_inf(), Coord::pos_inf())) out.push_back(std::move(iv.lo));
  return out;
}

Rational CantorSchedule::measure_within_1d(unsigned n, const Interval& window) const {
  if (window.empty()) return Rational(0);
  Levels lv = levels(*this, n);
  std::function<Rational(const Rational&, unsigned)> descend = [&](const Rational& left, unsigned k) -> Rational {
    Rational right = left + lv.length[k];
    Coord l(left), r(right);
    if (!(l < window.hi) || !(window.lo < r)) return Rational(0);
    if (window.lo <= l && r <= window.hi) {
      // whole subtree: 2^(n-k) intervals of length l_n
      return lv.length[n] * pow2(static_cast<long>(n - k));
    }
    if (k == n) {
      Coord a = std::max(l, window.lo);
      Coord b = std::min(r, window.hi);
      return Rational(b.value() - a.value());
    }
    return descend(left, k + 1) + descend(Rational(left + lv.step[k + 1]), k + 1);
  };
  return descend(Rational(0), 0);
}

namespace {

void check_count(double count, const StageLimits& limits) {
  if (count > static_cast<double>(1ull << std::min(limits.max_log2_boxes, 62u))) {
    throw BudgetError("stage set exceeds the explosion cap of 2^" + std::to_string(limits.max_log2_boxes) + " boxes");
  }
}

std::vector<Box> product(const std::vector<std::vector<ClosedInterval>>& axes, const Rational& dilation) {
  std::vector<Box> out;
  const std::size_t d = axes.size();
  std::vector<std::vector<Interval>> sides_by_axis(d);
  std::size_t total = 1;
  for (std::size_t i = 0; i < d; ++i) {
    if (axes[i].empty()) return out;
    for (const auto& iv : axes[i]) sides_by_axis[i].push_back({Coord(iv.lo), Coord(Rational(iv.hi + dilation))});
    total *= axes[i].size();
  }
  out.reserve(total);
  std::vector<std::size_t> idx(d, 0);
  while (true) {
    std::vector<Interval> sides;
    sides.reserve(d);
    for (std::size_t i = 0; i < d; ++i) sides.push_back(sides_by_axis[i][idx[i]]);
    out.emplace_back(std::move(sides));
    // lexicographic: last axis varies fastest
    std::size_t axis = d;
    while (axis > 0) {
      --axis;
      if (++idx[axis] < axes[axis].size()) break;
      idx[axis] = 0;
      if (axis == 0) return out;
    }
  }
}

}  // namespace

BoxUnion CantorSchedule::stage_approx(unsigned n, const StageLimits& limits) const {
  if (static_cast<unsigned long>(n) * dim_ > limits.max_log2_boxes) {
    throw BudgetError("stage_approx: n*d = " + std::to_string(n * dim_) + " exceeds the cap " +
                          std::to_string(limits.max_log2_boxes) + "; try n <= " +
                          std::to_string(limits.max_log2_boxes / dim_),
                      nlohmann::json{{"suggested_stage", limits.max_log2_boxes / dim_}});
  }
  std::vector<ClosedInterval> one = intervals_within(n, Coord::neg_inf(), Coord::pos_inf());
  std::vector<std::vector<ClosedInterval>> axes(dim_, one);
  // Distinct stage intervals never touch, so the product list is canonical.
  return BoxUnion::from_canonical(dim_, product(axes, Rational(0)));
}

std::vector<Box> CantorSchedule::stage_boxes_within(unsigned n, const Box& window, const StageLimits& limits,
                                                    const Rational& dilation) const {
  if (window.dim() != dim_) throw PreconditionError("dimension mismatch");
  std::vector<std::vector<ClosedInterval>> axes;
  double count = 1;
  for (std::size_t i = 0; i < dim_; ++i) {
    Coord lo = window.side(i).lo.shifted(Rational(-dilation));
    axes.push_back(intervals_within(n, lo, window.side(i).hi));
    count *= static_cast<double>(axes.back().size());
    check_count(count, limits);
  }
  return product(axes, dilation);
}

namespace {

Membership resolve_1d(const Rational& x, unsigned cap, const CantorSchedule& s) {
  using K = Membership::Kind;
  if (x < 0 || x > 1) return {K::Out, 0};
  Rational left(0);
  Rational len(1);
  for (unsigned k = 0;; ++k) {
    if (x == left || x == left + len) return {K::In, k};
    if (k == cap) return {K::Unknown, cap};
    Rational child = s.interval_length(k + 1);
    Rational gap_lo = left + child;
    Rational gap_hi = gap_lo + s.removal(k + 1);
    if (gap_lo < x && x < gap_hi) return {K::Out, k + 1};
    if (x >= gap_hi) left = gap_hi;
    len = child;
  }
}

}  // namespace

Membership membership(const CantorSchedule& s, std::span<const Rational> x, unsigned stage_cap) {
  using K = Membership::Kind;
  if (x.size() != s.dim()) throw PreconditionError("dimension mismatch");
  std::optional<unsigned> out_stage;
  bool unknown = false;
  unsigned in_stage = 0;
  for (const auto& xi : x) {
    Membership m = resolve_1d(xi, stage_cap, s);
    if (m.kind == K::Out) out_stage = std::min(out_stage.value_or(m.stage), m.stage);
    if (m.kind == K::Unknown) unknown = true;
    if (m.kind == K::In) in_stage = std::max(in_stage, m.stage);
  }
  if (out_stage) return {K::Out, *out_stage};
  if (unknown) return {K::Unknown, stage_cap};
  return {K::In, in_stage};
}

namespace {

// First open component of (p, q) minus the union of closed intervals (sorted).
std::optional<std::pair<Rational, Rational>> first_component(const Rational& p, const Rational& q,
                                                             const std::vector<ClosedInterval>& ivs) {
  Rational cursor = p;
  for (const auto& iv : ivs) {
    if (iv.lo > cursor) return std::make_pair(cursor, iv.lo);
    if (iv.hi > cursor) cursor = iv.hi;
    if (cursor >= q) return std::nullopt;
  }
  if (cursor < q) return std::make_pair(cursor, q);
  return std::nullopt;
}

void require_solid(const Box& j) {
  if (!j.bounded() || j.empty()) throw PreconditionError("query box must be bounded with positive side lengths");
}

}  // namespace

std::variant<GapCertificate, NeedsDeeperStage> find_gap(const CantorSchedule& s, std::span<const Rational> t,
                                                        const Box& j, unsigned stage_cap) {
  if (t.size() != s.dim() || j.dim() != s.dim()) throw PreconditionError("dimension mismatch");
  require_solid(j);
  for (unsigned m = 0; m <= stage_cap; ++m) {
    for (std::size_t i = 0; i < s.dim(); ++i) {
      Rational p = j.side(i).lo.value() - t[i];
      Rational q = j.side(i).hi.value() - t[i];
      auto comp = first_component(p, q, s.intervals_within(m, Coord(p), Coord(q)));
      if (!comp) continue;
      Rational a = comp->first + t[i];
      Rational b = comp->second + t[i];
      Rational margin = (b - a) / 4;
      std::vector<Interval> sides(j.sides().begin(), j.sides().end());
      sides[i] = {Coord(Rational(a + margin)), Coord(Rational(b - margin))};
      return GapCertificate{m, Box(std::move(sides))};
    }
  }
  return NeedsDeeperStage{stage_cap};
}

std::optional<unsigned> disjoint_stage(const CantorSchedule& s, std::span<const Rational> t, const Box& open_box,
                                       unsigned stage_cap) {
  if (t.size() != s.dim() || open_box.dim() != s.dim()) throw PreconditionError("dimension mismatch");
  require_solid(open_box);
  for (unsigned m = 0; m <= stage_cap; ++m) {
    for (std::size_t i = 0; i < s.dim(); ++i) {
      Coord p = open_box.side(i).lo.shifted(Rational(-t[i]));
      Coord q = open_box.side(i).hi.shifted(Rational(-t[i]));
      if (s.intervals_within(m, p, q).empty()) return m;
    }
  }
  return std::nullopt;
}

bool verify_gap(const CantorSchedule& s, std::span<const Rational> t, const GapCertificate& cert) {
  const Box& w = cert.witness;
  if (w.dim() != s.dim() || t.size() != s.dim() || !w.bounded() || w.empty()) return false;
  Point neg(t.begin(), t.end());
  for (auto& v : neg) v = -v;
  std::vector<Box> stage = s.stage_boxes_within(cert.stage, w.translate(neg), StageLimits{40});
  for (auto& b : stage) b = b.translate(t);
  std::vector<Box> witness{w};
  std::span<const Box> ops[] = {stage, witness};
  return combine(s.dim(), ops, [](Mask m) { return m == 3; }).empty();
}

}  // namespace fatmeasure
