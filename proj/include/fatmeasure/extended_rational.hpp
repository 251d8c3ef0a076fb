#pragma once

#include <compare>
#include <string>

#include "fatmeasure/rational.hpp"

namespace fatmeasure {

/// Exact element a + b*sqrt(r) of the quadratic field Q[sqrt(r)].
///
/// A value with b == 0 is plain rational and mixes with any radicand; two
/// irrational values must share the radicand.
class ExtendedRational {
 public:
  ExtendedRational() = default;
  ExtendedRational(Rational a) : a_(std::move(a)) {}  // NOLINT: rationals embed
  ExtendedRational(Rational a, Rational b, unsigned long radicand);

  static ExtendedRational sqrt_of(unsigned long radicand) { return {Rational(0), Rational(1), radicand}; }

  const Rational& rational_part() const { return a_; }
  const Rational& surd_part() const { return b_; }
  unsigned long radicand() const { return radicand_; }
  bool is_rational() const { return b_ == 0; }

  /// -1, 0, +1 of the real number a + b*sqrt(r), decided exactly.
  int sign() const;

  ExtendedRational operator-() const { return {Rational(-a_), Rational(-b_), radicand_}; }
  friend ExtendedRational operator+(const ExtendedRational& x, const ExtendedRational& y);
  friend ExtendedRational operator-(const ExtendedRational& x, const ExtendedRational& y);
  friend ExtendedRational operator*(const ExtendedRational& x, const ExtendedRational& y);
  ExtendedRational& operator+=(const ExtendedRational& y) { return *this = *this + y; }

  ExtendedRational pow(unsigned exponent) const;

  friend bool operator==(const ExtendedRational& x, const ExtendedRational& y) { return (x - y).sign() == 0; }
  friend std::strong_ordering operator<=>(const ExtendedRational& x, const ExtendedRational& y) {
    return (x - y).sign() <=> 0;
  }

  /// Approximate value, for diagnostics and tests only.
  double approx() const;

 private:
  void normalize();

  Rational a_;
  Rational b_;
  unsigned long radicand_ = 1;
};

std::string to_string(const ExtendedRational& value);

}  // namespace fatmeasure
