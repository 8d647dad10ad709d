#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <string>

#include "intrank/errors.hpp"

namespace intrank {

// Exact arbitrary-precision rational.  GMP's mpq_class already maintains the
// canonical-form invariant we need (gcd(num, den) = 1, den > 0) after every
// arithmetic operation, so equality is structural.
using Rational = mpq_class;
using Integer = mpz_class;

inline Rational rat(long num, long den = 1) {
  Rational r(num, den);
  r.canonicalize();
  return r;
}

inline Integer numer(const Rational& r) { return r.get_num(); }
inline Integer denom(const Rational& r) { return r.get_den(); }

inline int sign(const Rational& r) { return sgn(r); }

inline Rational rat_abs(const Rational& r) { return r < 0 ? Rational(-r) : r; }

inline Rational rat_min(const Rational& a, const Rational& b) { return a < b ? a : b; }
inline Rational rat_max(const Rational& a, const Rational& b) { return a > b ? a : b; }

inline Integer rat_floor(const Rational& r) {
  Integer q;
  mpz_fdiv_q(q.get_mpz_t(), r.get_num().get_mpz_t(), r.get_den().get_mpz_t());
  return q;
}

// power of two as a rational, exponent may be negative
inline Rational pow2(int e) {
  Rational r = 1;
  Integer p = 1;
  p <<= (e < 0 ? -e : e);
  if (e >= 0) return Rational(p);
  Rational out(1, p);
  out.canonicalize();
  return out;
}

// Serialization: "n/d" with the denominator omitted when it is 1.
inline std::string to_string(const Rational& r) { return r.get_str(); }

// Strict parser for the "n/d" format.  `where` feeds error messages.
Rational parse_rational(const std::string& token, int line = 0, int column = 0);

}  // namespace intrank
