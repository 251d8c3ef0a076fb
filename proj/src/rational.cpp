#include "fatmeasure/rational.hpp"

#include <cctype>

#include "fatmeasure/errors.hpp"

namespace fatmeasure {

std::string to_string(const Rational& value) {
  return value.get_num().get_str() + "/" + value.get_den().get_str();
}

namespace {

bool is_integer_literal(std::string_view s) {
  if (!s.empty() && (s.front() == '-' || s.front() == '+')) s.remove_prefix(1);
  if (s.empty()) return false;
  for (char ch : s) {
    if (!std::isdigit(static_cast<unsigned char>(ch))) return false;
  }
  return true;
}

}  // namespace

Rational parse_rational(std::string_view text) {
  auto slash = text.find('/');
  std::string_view num = text.substr(0, slash);
  std::string_view den = slash == std::string_view::npos ? std::string_view{"1"} : text.substr(slash + 1);
  if (!is_integer_literal(num) || !is_integer_literal(den) || den.front() == '-' || den.front() == '+') {
    throw PreconditionError("malformed rational '" + std::string(text) + "'");
  }
  if (num.front() == '+') num.remove_prefix(1);
  mpz_class p(std::string(num), 10);
  mpz_class q(std::string(den), 10);
  if (q == 0) throw PreconditionError("zero denominator in '" + std::string(text) + "'");
  Rational r(p, q);
  r.canonicalize();
  return r;
}

std::vector<Rational> parse_rational_list(std::string_view text) {
  std::vector<Rational> out;
  while (!text.empty()) {
    auto comma = text.find(',');
    out.push_back(parse_rational(text.substr(0, comma)));
    if (comma == std::string_view::npos) break;
    text.remove_prefix(comma + 1);
  }
  return out;
}

Rational ratio(long p, long q) {
  if (q == 0) throw PreconditionError("zero denominator");
  Rational r(p, q);
  r.canonicalize();
  return r;
}

Rational power(const Rational& base, long exponent) {
  Rational result(1);
  Rational b = exponent < 0 ? Rational(1) / base : base;
  unsigned long e = exponent < 0 ? static_cast<unsigned long>(-exponent) : static_cast<unsigned long>(exponent);
  mpz_class num, den;
  mpz_pow_ui(num.get_mpz_t(), b.get_num_mpz_t(), e);
  mpz_pow_ui(den.get_mpz_t(), b.get_den_mpz_t(), e);
  result = Rational(num, den);
  result.canonicalize();
  return result;
}

Rational pow2(long exponent) {
  mpz_class one(1);
  mpz_class shifted;
  if (exponent >= 0) {
    mpz_mul_2exp(shifted.get_mpz_t(), one.get_mpz_t(), static_cast<mp_bitcnt_t>(exponent));
    return Rational(shifted);
  }
  mpz_mul_2exp(shifted.get_mpz_t(), one.get_mpz_t(), static_cast<mp_bitcnt_t>(-exponent));
  return Rational(one, shifted);
}

long floor_log2(const Rational& value) {
  if (sgn(value) <= 0) throw PreconditionError("floor_log2 of a non-positive rational");
  long k = static_cast<long>(mpz_sizeinbase(value.get_num_mpz_t(), 2)) -
           static_cast<long>(mpz_sizeinbase(value.get_den_mpz_t(), 2));
  // estimate is off by at most one in either direction
  while (pow2(k) > value) --k;
  while (pow2(k + 1) <= value) ++k;
  return k;
}

Rational rational_gcd(const std::vector<Rational>& values) {
  mpz_class num(0), den(1);
  for (const auto& v : values) {
    mpz_gcd(num.get_mpz_t(), num.get_mpz_t(), v.get_num_mpz_t());
    mpz_lcm(den.get_mpz_t(), den.get_mpz_t(), v.get_den_mpz_t());
  }
  Rational g(num, den);
  g.canonicalize();
  return g;
}

bool exact_root(const Rational& value, unsigned long k, Rational& root) {
  if (sgn(value) < 0) return false;
  mpz_class p, q;
  bool num_exact = mpz_root(p.get_mpz_t(), value.get_num_mpz_t(), k) != 0;
  bool den_exact = mpz_root(q.get_mpz_t(), value.get_den_mpz_t(), k) != 0;
  if (!num_exact || !den_exact) return false;
  root = Rational(p, q);
  root.canonicalize();
  return true;
}

}  // namespace fatmeasure
