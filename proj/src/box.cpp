#include "fatmeasure/box.hpp"

#include "fatmeasure/errors.hpp"

namespace fatmeasure {

namespace {
const Rational kZero(0);
}

const Rational& Coord::value() const {
  if (!finite()) throw PreconditionError("unbounded: coordinate is infinite");
  return value_ ? *value_ : kZero;
}

Coord Coord::shifted(const Rational& delta) const {
  if (!finite()) return *this;
  return Coord(Rational(value() + delta));
}

bool operator==(const Coord& a, const Coord& b) {
  if (a.infinity_ != b.infinity_) return false;
  return a.infinity_ != 0 || a.value_ == b.value_ || a.value() == b.value();
}

std::strong_ordering operator<=>(const Coord& a, const Coord& b) {
  if (a.infinity_ != b.infinity_) return a.infinity_ <=> b.infinity_;
  if (a.infinity_ != 0 || a.value_ == b.value_) return std::strong_ordering::equal;
  int c = cmp(a.value(), b.value());
  return c <=> 0;
}

Rational Interval::length() const {
  if (empty()) return Rational(0);
  return Rational(hi.value() - lo.value());
}

Box::Box(std::vector<Interval> sides) : sides_(std::move(sides)) {
  for (const auto& s : sides_) {
    if (s.hi < s.lo) throw PreconditionError("box side with lo > hi");
  }
}

Box::Box(const Point& lo, const Point& hi) {
  if (lo.size() != hi.size()) throw PreconditionError("box corner dimension mismatch");
  sides_.reserve(lo.size());
  for (std::size_t i = 0; i < lo.size(); ++i) {
    if (hi[i] < lo[i]) throw PreconditionError("box side with lo > hi");
    sides_.push_back({Coord(lo[i]), Coord(hi[i])});
  }
}

Box Box::cube(const Point& corner, const Rational& side) {
  Point hi = corner;
  for (auto& h : hi) h += side;
  return Box(corner, hi);
}

Box Box::unit(std::size_t dim) { return Box(Point(dim, Rational(0)), Point(dim, Rational(1))); }

Box Box::whole(std::size_t dim) {
  return Box(std::vector<Interval>(dim, Interval{Coord::neg_inf(), Coord::pos_inf()}));
}

bool Box::empty() const {
  for (const auto& s : sides_) {
    if (s.empty()) return true;
  }
  return false;
}

bool Box::bounded() const {
  for (const auto& s : sides_) {
    if (!s.bounded()) return false;
  }
  return true;
}

Rational Box::volume() const {
  if (!bounded()) throw PreconditionError("unbounded: volume of a box with infinite sides");
  mpz_class num(1), den(1);
  for (const auto& s : sides_) {
    const Rational& lo = s.lo.value();
    const Rational& hi = s.hi.value();
    if (hi <= lo) return Rational(0);
    if (lo.get_den() == hi.get_den()) {
      num *= hi.get_num() - lo.get_num();
      den *= hi.get_den();
    } else {
      num *= hi.get_num() * lo.get_den() - lo.get_num() * hi.get_den();
      den *= hi.get_den() * lo.get_den();
    }
  }
  Rational v(num, den);
  v.canonicalize();
  return v;
}

Box Box::intersect(const Box& other) const {
  if (dim() != other.dim()) throw PreconditionError("dimension mismatch");
  std::vector<Interval> out;
  out.reserve(dim());
  for (std::size_t i = 0; i < dim(); ++i) {
    Coord lo = std::max(sides_[i].lo, other.sides_[i].lo);
    Coord hi = std::min(sides_[i].hi, other.sides_[i].hi);
    if (hi < lo) hi = lo;
    out.push_back({std::move(lo), std::move(hi)});
  }
  return Box(std::move(out));
}

Box Box::translate(std::span<const Rational> shift) const {
  if (shift.size() != dim()) throw PreconditionError("dimension mismatch");
  std::vector<Interval> out;
  out.reserve(dim());
  for (std::size_t i = 0; i < dim(); ++i) {
    out.push_back({sides_[i].lo.shifted(shift[i]), sides_[i].hi.shifted(shift[i])});
  }
  return Box(std::move(out));
}

bool Box::contains(std::span<const Rational> point) const {
  if (point.size() != dim()) throw PreconditionError("dimension mismatch");
  for (std::size_t i = 0; i < dim(); ++i) {
    Coord p(point[i]);
    if (p < sides_[i].lo || !(p < sides_[i].hi)) return false;
  }
  return true;
}

bool Box::open_within(const Box& outer) const {
  if (outer.dim() != dim()) throw PreconditionError("dimension mismatch");
  for (std::size_t i = 0; i < dim(); ++i) {
    if (sides_[i].lo < outer.sides_[i].lo || outer.sides_[i].hi < sides_[i].hi) return false;
  }
  return true;
}

}  // namespace fatmeasure
