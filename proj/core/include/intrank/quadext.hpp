#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>

#include "intrank/rational.hpp"

namespace intrank {

// Element of the real quadratic field Q(sqrt(d)): value = rat + irr * sqrt(d)
// with d a positive square-free integer.  All instances taking part in one
// computation share a single radicand; mixing distinct radicands is a checked
// error.  Canonical form: irr == 0  =>  d == 0, so purely rational values
// compare equal independently of the context they came from.
class QuadExt {
 public:
  QuadExt() : rat_(0), irr_(0), d_(0) {}
  QuadExt(const Rational& r) : rat_(r), irr_(0), d_(0) {}  // NOLINT (implicit)
  QuadExt(long n) : rat_(n), irr_(0), d_(0) {}             // NOLINT (implicit)
  QuadExt(Rational r, Rational i, std::int64_t d);

  static QuadExt sqrt_of(std::int64_t d) { return QuadExt(Rational(0), Rational(1), d); }

  const Rational& rat_part() const { return rat_; }
  const Rational& irr_part() const { return irr_; }
  std::int64_t radicand() const { return d_; }

  bool is_rational() const { return sgn(irr_) == 0; }
  // valid only when is_rational()
  const Rational& as_rational() const;

  bool is_zero() const { return sgn(rat_) == 0 && sgn(irr_) == 0; }

  // exact sign: -1, 0, +1
  int sign() const;

  QuadExt operator-() const { return QuadExt(-rat_, -irr_, d_); }
  QuadExt& operator+=(const QuadExt& o);
  QuadExt& operator-=(const QuadExt& o);
  QuadExt& operator*=(const QuadExt& o);
  QuadExt& operator/=(const QuadExt& o);

  friend QuadExt operator+(QuadExt a, const QuadExt& b) { return a += b; }
  friend QuadExt operator-(QuadExt a, const QuadExt& b) { return a -= b; }
  friend QuadExt operator*(QuadExt a, const QuadExt& b) { return a *= b; }
  friend QuadExt operator/(QuadExt a, const QuadExt& b) { return a /= b; }

  friend bool operator==(const QuadExt& a, const QuadExt& b) {
    return a.rat_ == b.rat_ && a.irr_ == b.irr_ &&
           (a.is_rational() || a.d_ == b.d_);
  }
  friend bool operator!=(const QuadExt& a, const QuadExt& b) { return !(a == b); }
  friend bool operator<(const QuadExt& a, const QuadExt& b) { return (a - b).sign() < 0; }
  friend bool operator<=(const QuadExt& a, const QuadExt& b) { return (a - b).sign() <= 0; }
  friend bool operator>(const QuadExt& a, const QuadExt& b) { return (a - b).sign() > 0; }
  friend bool operator>=(const QuadExt& a, const QuadExt& b) { return (a - b).sign() >= 0; }

  QuadExt abs() const { return sign() < 0 ? -*this : *this; }

  // Largest integer <= value, decided exactly via integer square roots.
  Integer floor() const;

  // Serialization: "a", "b*sqrt(d)" or "a+b*sqrt(d)" / "a-b*sqrt(d)".
  std::string str() const;

 private:
  // shared radicand of two operands, or a MixedRadicand error
  static std::int64_t merged(const QuadExt& a, const QuadExt& b);
  void normalize();

  Rational rat_;
  Rational irr_;
  std::int64_t d_;
};

std::ostream& operator<<(std::ostream& os, const QuadExt& q);

QuadExt parse_quadext(const std::string& token, int line = 0, int column = 0);

// Dyadic enclosure of sqrt(d) with width 2^-k: returns lo with
// lo <= sqrt(d) < lo + 2^-k, both rational.
Rational sqrt_lower_bound(std::int64_t d, int k);

}  // namespace intrank
