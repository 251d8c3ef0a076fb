#include "fatmeasure/extended_rational.hpp"

#include <cmath>
#include <stdexcept>

namespace fatmeasure {

ExtendedRational::ExtendedRational(Rational a, Rational b, unsigned long radicand)
    : a_(std::move(a)), b_(std::move(b)), radicand_(radicand) {
  normalize();
}

void ExtendedRational::normalize() {
  if (radicand_ == 0) b_ = 0;
  if (b_ == 0) return;
  // fold perfect-square radicands into the rational part
  unsigned long root = static_cast<unsigned long>(std::sqrt(static_cast<double>(radicand_)));
  while (root * root > radicand_) --root;
  while ((root + 1) * (root + 1) <= radicand_) ++root;
  if (root * root == radicand_) {
    a_ += b_ * Rational(root);
    b_ = 0;
  }
}

namespace {

unsigned long common_radicand(const ExtendedRational& x, const ExtendedRational& y) {
  if (x.is_rational()) return y.radicand();
  if (y.is_rational()) return x.radicand();
  if (x.radicand() != y.radicand()) throw std::logic_error("mixed radicands in Q[sqrt(r)] arithmetic");
  return x.radicand();
}

}  // namespace

int ExtendedRational::sign() const {
  int sa = sgn(a_);
  int sb = sgn(b_);
  if (sb == 0) return sa;
  if (sa == 0 || sa == sb) return sb;
  // opposite signs: compare a^2 with b^2 r
  Rational lhs = a_ * a_;
  Rational rhs = b_ * b_ * Rational(radicand_);
  int c = cmp(lhs, rhs);
  if (c == 0) return 0;
  return c > 0 ? sa : sb;
}

ExtendedRational operator+(const ExtendedRational& x, const ExtendedRational& y) {
  return {Rational(x.a_ + y.a_), Rational(x.b_ + y.b_), common_radicand(x, y)};
}

ExtendedRational operator-(const ExtendedRational& x, const ExtendedRational& y) {
  return {Rational(x.a_ - y.a_), Rational(x.b_ - y.b_), common_radicand(x, y)};
}

ExtendedRational operator*(const ExtendedRational& x, const ExtendedRational& y) {
  unsigned long r = common_radicand(x, y);
  Rational a = x.a_ * y.a_ + x.b_ * y.b_ * Rational(r);
  Rational b = x.a_ * y.b_ + x.b_ * y.a_;
  return {std::move(a), std::move(b), r};
}

ExtendedRational ExtendedRational::pow(unsigned exponent) const {
  ExtendedRational result(Rational(1), Rational(0), radicand_);
  ExtendedRational base = *this;
  while (exponent > 0) {
    if (exponent & 1u) result = result * base;
    base = base * base;
    exponent >>= 1u;
  }
  return result;
}

double ExtendedRational::approx() const {
  return a_.get_d() + b_.get_d() * std::sqrt(static_cast<double>(radicand_));
}

std::string to_string(const ExtendedRational& value) {
  if (value.is_rational()) return to_string(value.rational_part());
  return to_string(value.rational_part()) + " + " + to_string(value.surd_part()) + "*sqrt(" +
         std::to_string(value.radicand()) + ")";
}

}  // namespace fatmeasure
