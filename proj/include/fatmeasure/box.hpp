#pragma once

#include <compare>
#include <cstddef>
#include <memory>
#include <span>
#include <vector>

#include "fatmeasure/rational.hpp"

namespace fatmeasure {

/// A coordinate on the extended line: a rational or one of -inf / +inf.
class Coord {
 public:
  Coord() = default;
  Coord(Rational value) : value_(std::make_shared<const Rational>(std::move(value))) {}  // NOLINT: implicit by design of the algebra

  static Coord neg_inf() { return Coord(-1); }
  static Coord pos_inf() { return Coord(+1); }

  bool finite() const { return infinity_ == 0; }
  /// -1, 0 or +1.
  int infinity() const { return infinity_; }
  /// Throws PreconditionError on an infinite coordinate.
  const Rational& value() const;

  Coord shifted(const Rational& delta) const;

  friend bool operator==(const Coord& a, const Coord& b);
  friend std::strong_ordering operator<=>(const Coord& a, const Coord& b);

 private:
  explicit Coord(int infinity) : infinity_(infinity) {}

  int infinity_ = 0;
  // Shared so that copying boxes does not copy GMP storage; null is zero.
  std::shared_ptr<const Rational> value_;
};

/// Half-open interval [lo, hi). Empty when hi <= lo.
struct Interval {
  Coord lo;
  Coord hi;

  bool empty() const { return !(lo < hi); }
  bool bounded() const { return lo.finite() && hi.finite(); }
  Rational length() const;

  friend bool operator==(const Interval&, const Interval&) = default;
};

/// Axis-aligned box, a product of half-open intervals. The same data doubles
/// as an open box (lo, hi) for topological certificates; which reading applies
/// is fixed by the call site, never stored.
class Box {
 public:
  Box() = default;
  explicit Box(std::vector<Interval> sides);
  Box(const Point& lo, const Point& hi);

  static Box cube(const Point& corner, const Rational& side);
  static Box unit(std::size_t dim);
  static Box whole(std::size_t dim);

  std::size_t dim() const { return sides_.size(); }
  const Interval& side(std::size_t axis) const { return sides_[axis]; }
  std::span<const Interval> sides() const { return sides_; }

  bool empty() const;
  bool bounded() const;
  /// True when every side has positive length.
  bool solid() const { return !empty(); }

  /// Lebesgue measure. Throws PreconditionError("unbounded") on infinite sides.
  Rational volume() const;

  Box intersect(const Box& other) const;
  Box translate(std::span<const Rational> shift) const;
  bool contains(std::span<const Rational> point) const;
  /// Open-box reading: (lo, hi) contained in the interior of `outer`.
  bool open_within(const Box& outer) const;

  friend bool operator==(const Box&, const Box&) = default;

 private:
  std::vector<Interval> sides_;
};

}  // namespace fatmeasure
