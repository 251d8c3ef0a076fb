#pragma once

#include <gmpxx.h>

#include <string>
#include <string_view>
#include <vector>

namespace fatmeasure {

using Rational = mpq_class;
using Point = std::vector<Rational>;

/// Canonical "p/q" form, lowest terms, q > 0. Integers keep the "/1".
std::string to_string(const Rational& value);

/// Accepts "p/q" or "p" (optionally signed). Throws PreconditionError.
Rational parse_rational(std::string_view text);

/// Comma separated list of rationals, e.g. "1/2,1/4".
std::vector<Rational> parse_rational_list(std::string_view text);

/// p/q in lowest terms (mpq_class(p, q) alone does not reduce).
Rational ratio(long p, long q);

Rational power(const Rational& base, long exponent);
Rational pow2(long exponent);

/// Unique k with 2^k <= value < 2^(k+1). value must be positive.
long floor_log2(const Rational& value);

/// gcd of positive rationals: the largest rational g with every value an
/// integer multiple of g.
Rational rational_gcd(const std::vector<Rational>& values);

/// Exact k-th root if value is the k-th power of a rational.
bool exact_root(const Rational& value, unsigned long k, Rational& root);

}  // namespace fatmeasure
